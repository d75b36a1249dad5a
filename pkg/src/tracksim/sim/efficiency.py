"""Zone-prediction efficiency experiments.

A trial reconstructs the operational loop: the transmitter knows the
target's last two fixes A and B (one silent window apart), predicts the
next-window zone from them, aims a beam of the chosen width at the zone
center, and after the silent window checks whether the target is both
inside the predicted circle and covered by the beam sector. The beam
sector has a finite range; targets that outrun it are lost, which is
what collapses efficiency at long silent periods.

Two algorithms share every trial's random walk, so comparisons are
paired: the integrated zone scores against the final (radical-point)
circle, the forward-only baseline against the straight-ahead forward
circle alone.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import TrackSimError, ZoneBeyondRange
from ..geometry import (
    DEFAULT_LADDER,
    BeamwidthLadder,
    Circle,
    Position2D,
    predict_zone,
    quantize_beamwidth,
    required_beamwidth,
    zone_forward_circle,
)
from .mobility import MobilityConfig, free_walk

Algorithm = Literal["integrated_zone", "forward_only_baseline"]

ALGORITHMS = ("integrated_zone", "forward_only_baseline")

# Transmitter standoff behind the older fix, and the beam's usable range.
DEFAULT_TX_STANDOFF = 400.0
DEFAULT_BEAM_RANGE = 1280.0


@dataclass(frozen=True)
class EfficiencyConfig:
    """One efficiency measurement point.

    beamwidth fixes the sector width in radians; leave it None to size
    the beam adaptively from the zone via the ladder. silent_duration is
    the radio-silent interval in seconds; trials aggregate over
    experiments x trials_per_experiment Bernoulli trials.
    """

    beamwidth: float | None = None
    ladder: BeamwidthLadder = DEFAULT_LADDER
    silent_duration: float = 15.0
    experiments: int = 10
    trials_per_experiment: int = 10
    algorithm: Algorithm = "integrated_zone"
    tx_standoff: float = DEFAULT_TX_STANDOFF
    beam_range: float = DEFAULT_BEAM_RANGE

    def __post_init__(self):
        if self.silent_duration < 0.0:
            raise ValueError("silent duration must be nonnegative")
        if self.experiments < 1 or self.trials_per_experiment < 1:
            raise ValueError("experiment and trial counts must be at least 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.beamwidth is not None and not 0.0 < self.beamwidth <= math.pi:
            raise ValueError("fixed beamwidth must lie in (0, pi]")


@dataclass
class EfficiencyRecord:
    algorithm: str
    beamwidth: float
    silent_duration: float
    successes: int
    trials: int

    @property
    def efficiency(self) -> float:
        return self.successes / self.trials


def in_beam_sector(
    target: Position2D,
    apex: Position2D,
    aim: Position2D,
    width: float,
    beam_range: float,
) -> bool:
    """True when target falls inside the sector of the given width and range
    with its apex at the transmitter, aimed at the aim point."""
    dx, dy = target.x - apex.x, target.y - apex.y
    dist = math.hypot(dx, dy)
    if dist > beam_range:
        return False
    if dist == 0.0:
        return True
    aim_angle = math.atan2(aim.y - apex.y, aim.x - apex.x)
    offset = math.atan2(dy, dx) - aim_angle
    offset = (offset + math.pi) % (2.0 * math.pi) - math.pi
    return abs(offset) <= width / 2.0


def _window_steps(cfg: EfficiencyConfig, mob: MobilityConfig) -> int:
    return max(0, int(round(cfg.silent_duration / mob.step)))


def _predicted_circle(a: Position2D, b: Position2D, algorithm: str) -> Circle:
    if algorithm == "integrated_zone":
        return predict_zone(a, b).final_circle
    return zone_forward_circle(a, b)


def run_trial(
    cfg: EfficiencyConfig,
    mob: MobilityConfig,
    rng: np.random.Generator,
    algorithm: str | None = None,
) -> bool:
    """One Bernoulli trial; True means the target was found.

    The prior window that yields the fixes A and B is maneuver-free (the
    target was being tracked); the scored silent window uses the full
    turn model. Per-trial speed variation applies to both windows, so the
    zone scales with the vehicle while the beam range does not.
    """
    algorithm = algorithm or cfg.algorithm
    k = _window_steps(cfg, mob)
    k_prior = max(1, k)
    speed_factor = rng.uniform(0.85, 1.15)
    heading0 = rng.uniform(0.0, 2.0 * math.pi)

    prior = free_walk(
        mob,
        np.zeros(2),
        heading0,
        k_prior,
        rng,
        allow_maneuver=False,
        speed_factor=speed_factor,
    )
    a = Position2D(*prior.positions[0])
    b = Position2D(*prior.positions[-1])
    if a == b:
        return False

    try:
        circle = _predicted_circle(a, b, algorithm)
    except TrackSimError:
        return False

    d = a.distance_to(b)
    u = ((b.x - a.x) / d, (b.y - a.y) / d)
    tx = Position2D(a.x - cfg.tx_standoff * u[0], a.y - cfg.tx_standoff * u[1])
    aim = circle.center
    try:
        needed = required_beamwidth(circle.radius, tx.distance_to(aim))
    except ZoneBeyondRange:
        return False
    width = cfg.beamwidth if cfg.beamwidth is not None else quantize_beamwidth(needed, cfg.ladder)

    silent_factor = rng.uniform(*mob.turn_model.silent_slowdown)
    scored = free_walk(
        mob,
        prior.positions[-1],
        prior.final_heading,
        k,
        rng,
        allow_maneuver=True,
        speed_factor=speed_factor * silent_factor,
    )
    target = Position2D(*scored.positions[-1])
    return circle.contains(target) and in_beam_sector(target, tx, aim, width, cfg.beam_range)


def run_efficiency(
    cfg: EfficiencyConfig,
    mob: MobilityConfig,
    rng_seed: int = 0,
    algorithm: str | None = None,
) -> EfficiencyRecord:
    """Aggregate trials into one efficiency record.

    Trial streams are derived from (seed, experiment, trial) only, so
    runs that differ in the algorithm see identical target behavior and
    the comparison is paired sample by sample.
    """
    algorithm = algorithm or cfg.algorithm
    successes = 0
    trials = cfg.experiments * cfg.trials_per_experiment
    for exp in range(cfg.experiments):
        for trial in range(cfg.trials_per_experiment):
            seq = np.random.SeedSequence([int(rng_seed) & 0xFFFFFFFF, 0x65FF, exp, trial])
            if run_trial(cfg, mob, np.random.default_rng(seq), algorithm=algorithm):
                successes += 1
    width = cfg.beamwidth if cfg.beamwidth is not None else float("nan")
    return EfficiencyRecord(
        algorithm=algorithm,
        beamwidth=width,
        silent_duration=cfg.silent_duration,
        successes=successes,
        trials=trials,
    )


def compare_algorithms(
    cfg: EfficiencyConfig,
    mob: MobilityConfig,
    beamwidths: list[float] | None = None,
    silent_durations: list[float] | None = None,
    rng_seed: int = 0,
) -> list[tuple[EfficiencyRecord, EfficiencyRecord]]:
    """Sweep one axis and return (integrated, baseline) record pairs.

    Exactly one of beamwidths (radians) or silent_durations (seconds)
    must be given; the other parameter is held at the config's value.
    Both algorithms run on the same per-trial seeds.
    """
    if (beamwidths is None) == (silent_durations is None):
        raise ValueError("provide exactly one of beamwidths or silent_durations")
    points = beamwidths if beamwidths is not None else silent_durations
    results = []
    for value in points:
        if beamwidths is not None:
            point_cfg = dataclasses.replace(cfg, beamwidth=value)
        else:
            point_cfg = dataclasses.replace(cfg, silent_duration=value)
        integrated = run_efficiency(point_cfg, mob, rng_seed, algorithm="integrated_zone")
        baseline = run_efficiency(point_cfg, mob, rng_seed, algorithm="forward_only_baseline")
        results.append((integrated, baseline))
    return results
