"""Target motion models for the tracking and zone experiments.

Two modes share a MobilityConfig. Road mode drives the linear vehicle
dynamics along a fixed heading, so the trajectory satisfies the road
constraint exactly; it feeds the Kalman experiments. Free mode walks the
target in micro-steps with small heading wander, multiplicative speed
jitter, and at most one deliberate maneuver per simulated window: a
regular turn within +-30 degrees or, with probability sharp_prob, a turn
beyond 30 degrees that brakes the vehicle and may end in a full stop
(obstruction). Free mode feeds the zone-efficiency experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import kalman


@dataclass(frozen=True)
class TurnModel:
    """Per-window maneuver statistics for the free walk.

    wander_deg: half-width of the uniform per-step heading wander.
    speed_jitter: sigma of the per-step multiplicative speed noise.
    maneuver_prob: probability that a window contains one deliberate turn.
    sharp_prob: fraction of maneuvers that are sharp (beyond 30 degrees).
    stop_prob: fraction of maneuvers that end in a stop (obstruction).
    slow_range: speed factor drawn for the remainder of a sharp-turn window.
    silent_slowdown: per-window speed factor range while radio silent; a
        node that stops reporting is assumed to move no faster than it
        last did.
    """

    wander_deg: float = 3.2
    speed_jitter: float = 0.03
    maneuver_prob: float = 0.10
    sharp_prob: float = 0.15
    stop_prob: float = 0.4
    slow_range: tuple[float, float] = (0.3, 0.7)
    silent_slowdown: tuple[float, float] = (0.75, 0.98)

    def __post_init__(self):
        for name in ("maneuver_prob", "sharp_prob", "stop_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p}")


@dataclass(frozen=True)
class MobilityConfig:
    """Scenario parameters: a 500 x 500 m area, 60 km/h, 3 s steps."""

    area: tuple[float, float] = (500.0, 500.0)
    speed: float = 16.67
    heading: float = math.radians(60.0)
    accel: float = 1.0
    step: float = 3.0
    turn_model: TurnModel = field(default_factory=TurnModel)

    def __post_init__(self):
        if self.speed <= 0.0:
            raise ValueError("speed must be positive")
        if self.step <= 0.0:
            raise ValueError("step must be positive")


@dataclass
class WalkResult:
    """Free-walk outcome: per-step (east, north) positions and the final heading."""

    positions: np.ndarray
    final_heading: float
    stopped: bool


def project_on_road(state: np.ndarray, theta: float) -> np.ndarray:
    """Orthogonally project positions and velocities onto the heading line."""
    direction = np.array([math.sin(theta), math.cos(theta)])  # (north, east)
    out = np.asarray(state, dtype=float).copy()
    out[:2] = direction * (direction @ out[:2])
    out[2:] = direction * (direction @ out[2:])
    return out


def simulate_truth(
    cfg: MobilityConfig,
    steps: int,
    rng: np.random.Generator,
    road_constrained: bool = True,
    accel_std: float | None = None,
    initial_state: np.ndarray | None = None,
) -> np.ndarray:
    """Generate a ground-truth trajectory of shape (steps + 1, 4).

    Rows are [p_north, p_east, v_north, v_east]. In road mode the start
    state is projected onto the heading line and each step applies the
    vehicle dynamics with acceleration cfg.accel plus zero-mean noise of
    sigma accel_std (default cfg.accel / 3), so the constraint
    p_north = p_east tan(heading) holds exactly throughout. In free mode
    the target walks per the turn model, clipped to the area.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if road_constrained:
        fcfg = kalman.FilterConfig(T=cfg.step, theta=cfg.heading)
        F, B, _, _ = kalman.dynamics_matrices(fcfg)
        if initial_state is None:
            initial_state = kalman.default_initial_state()
        state = project_on_road(np.asarray(initial_state, dtype=float), cfg.heading)
        sigma = cfg.accel / 3.0 if accel_std is None else accel_std
        out = np.empty((steps + 1, 4))
        out[0] = state
        for k in range(steps):
            u = cfg.accel + rng.normal(0.0, sigma)
            state = F @ state + B * u
            out[k + 1] = state
        return out

    start = np.array([cfg.area[0] / 2.0, cfg.area[1] / 2.0])
    walk = free_walk(cfg, start, cfg.heading, steps, rng, area=cfg.area)
    positions = walk.positions
    velocities = np.diff(positions, axis=0, prepend=positions[:1]) / cfg.step
    out = np.empty((steps + 1, 4))
    out[:, 0] = positions[:, 1]  # north
    out[:, 1] = positions[:, 0]  # east
    out[:, 2] = velocities[:, 1]
    out[:, 3] = velocities[:, 0]
    return out


def free_walk(
    cfg: MobilityConfig,
    start: np.ndarray,
    heading: float,
    steps: int,
    rng: np.random.Generator,
    allow_maneuver: bool = True,
    area: tuple[float, float] | None = None,
    speed_factor: float = 1.0,
) -> WalkResult:
    """Walk one window of `steps` micro-steps from start at the given heading.

    Draws the maneuver step (if any) up front, applies per-step wander
    and speed jitter, and freezes the target once a stop maneuver
    triggers. The positions array has shape (steps + 1, 2) in (east,
    north) order; clipping to the area, when given, parks coordinates at
    the boundary.
    """
    tm = cfg.turn_model
    wander = math.radians(tm.wander_deg)
    positions = np.empty((steps + 1, 2))
    positions[0] = start
    pos = np.asarray(start, dtype=float).copy()

    maneuver_step = -1
    if allow_maneuver and steps > 0 and rng.uniform() < tm.maneuver_prob:
        maneuver_step = int(rng.integers(0, steps))
    stopped = False
    slow_factor = 1.0

    for j in range(steps):
        heading += rng.uniform(-wander, wander)
        factor = 0.0 if stopped else slow_factor * max(
            0.05, 1.0 + rng.normal(0.0, tm.speed_jitter)
        )
        stop_after = False
        if j == maneuver_step and not stopped:
            if rng.uniform() < tm.sharp_prob:
                magnitude = rng.uniform(math.radians(30.0), math.radians(90.0))
                turn = math.copysign(magnitude, rng.uniform(-1.0, 1.0))
                slow_factor = rng.uniform(*tm.slow_range)
            else:
                turn = rng.uniform(-math.radians(30.0), math.radians(30.0))
            heading += turn
            # A maneuver brakes the vehicle for the step it happens on and
            # may end in a stop at an obstruction.
            factor = min(factor, math.cos(abs(turn) / 2.0))
            stop_after = rng.uniform() < tm.stop_prob
        step_len = cfg.speed * speed_factor * cfg.step * factor
        pos = pos + step_len * np.array([math.cos(heading), math.sin(heading)])
        if stop_after:
            stopped = True
        if area is not None:
            pos[0] = min(max(pos[0], 0.0), area[0])
            pos[1] = min(max(pos[1], 0.0), area[1])
        positions[j + 1] = pos
    return WalkResult(positions=positions, final_heading=heading, stopped=stopped)


def path_length(positions: np.ndarray) -> float:
    """Total arc length of a walked (n, 2) position sequence."""
    diffs = np.diff(np.asarray(positions, dtype=float), axis=0)
    return float(np.hypot(diffs[:, 0], diffs[:, 1]).sum())
