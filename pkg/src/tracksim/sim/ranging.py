"""Packet-timestamp ranging.

Range is the propagation speed times the mean departure-to-arrival delay
over an ensemble of timestamped packets; packets arriving after the
ensemble window closes are excluded from the average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NoValidPackets

SPEED_OF_LIGHT = 2.998e8  # m/s


@dataclass(frozen=True)
class PacketTimestampEnsemble:
    """Departure/arrival timestamp pairs collected over one ensemble window.

    ensemble_window is the absolute close time in seconds; pairs hold
    (time_of_departure, time_of_arrival). Counted pairs must not arrive
    before they depart; late pairs are allowed but never averaged.
    """

    ensemble_window: float
    pairs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((float(d), float(a)) for d, a in self.pairs))
        for tod, toa in self.on_time_pairs():
            if toa < tod:
                raise ValueError(f"packet arrives at {toa} before departing at {tod}")

    def on_time_pairs(self) -> list[tuple[float, float]]:
        return [(d, a) for d, a in self.pairs if a <= self.ensemble_window]

    @property
    def late_count(self) -> int:
        return len(self.pairs) - len(self.on_time_pairs())


def range_from_timestamps(
    ens: PacketTimestampEnsemble,
    c: float = SPEED_OF_LIGHT,
) -> float:
    """Speed times the mean (arrival - departure) delay over on-time pairs."""
    on_time = ens.on_time_pairs()
    if not on_time:
        raise NoValidPackets("every packet arrived after the ensemble window closed")
    delays = np.array([a - d for d, a in on_time])
    return float(c * delays.mean())


def simulate_ranging(
    true_range: float,
    n_pairs: int,
    jitter_std: float,
    rng: np.random.Generator,
    c: float = SPEED_OF_LIGHT,
    window_margin: float = 5.0,
) -> PacketTimestampEnsemble:
    """Build a synthetic ensemble for a target at true_range meters.

    Each packet's flight time is range/c plus a symmetric Gaussian
    processing jitter of jitter_std seconds (clamped so arrival never
    precedes departure). The window closes window_margin standard
    deviations past the nominal flight time, so extreme stragglers
    register as late.
    """
    flight = true_range / c
    tod = np.arange(n_pairs, dtype=float) * 1e-3
    delays = flight + rng.normal(0.0, jitter_std, n_pairs)
    delays = np.maximum(delays, 0.0)
    toa = tod + delays
    window = float(tod[-1] + flight + window_margin * jitter_std) if n_pairs else 0.0
    return PacketTimestampEnsemble(ensemble_window=window, pairs=tuple(zip(tod, toa)))
