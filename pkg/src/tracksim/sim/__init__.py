"""Scenario generation and the three desk-scale experiments."""

from .efficiency import (
    ALGORITHMS,
    EfficiencyConfig,
    EfficiencyRecord,
    compare_algorithms,
    in_beam_sector,
    run_efficiency,
    run_trial,
)
from .mobility import MobilityConfig, TurnModel, WalkResult, free_walk, path_length, simulate_truth
from .ranging import (
    SPEED_OF_LIGHT,
    PacketTimestampEnsemble,
    range_from_timestamps,
    simulate_ranging,
)
from .tracking import TrackingResult, compare_tracking, run_tracking, triangulated_fix

__all__ = [
    "ALGORITHMS",
    "EfficiencyConfig",
    "EfficiencyRecord",
    "compare_algorithms",
    "in_beam_sector",
    "run_efficiency",
    "run_trial",
    "MobilityConfig",
    "TurnModel",
    "WalkResult",
    "free_walk",
    "path_length",
    "simulate_truth",
    "SPEED_OF_LIGHT",
    "PacketTimestampEnsemble",
    "range_from_timestamps",
    "simulate_ranging",
    "TrackingResult",
    "compare_tracking",
    "run_tracking",
    "triangulated_fix",
]
