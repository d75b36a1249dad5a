"""Exception types shared across the toolkit.

Every domain error derives from TrackSimError so callers can catch the
whole family with one clause; the CLI maps them onto exit codes.
"""


class TrackSimError(Exception):
    """Base class for all toolkit errors."""


# --- geometry ---------------------------------------------------------------

class ParallelBearings(TrackSimError):
    """Bearing lines are (numerically) parallel; no unique intersection."""


class VerticalBearing(TrackSimError):
    """Bearing is vertical, so its tangent is undefined."""


class CoincidentPoints(TrackSimError):
    """Two points expected to be distinct are equal."""


class DisjointCircles(TrackSimError):
    """Circles are too far apart to intersect in two points."""


class ContainedCircles(TrackSimError):
    """One circle contains the other; no two-point intersection."""


class ConcentricCircles(TrackSimError):
    """Circle centers coincide; the radical point is undefined."""


class ZoneBeyondRange(TrackSimError):
    """Zone radius exceeds transmitter distance; no beam can cover it."""


# --- kalman -----------------------------------------------------------------

class HeadingSingular(TrackSimError):
    """Road heading is too close to vertical for tan(theta) to be usable."""


class SingularInnovation(TrackSimError):
    """Innovation covariance is numerically singular."""


class SingularConstraint(TrackSimError):
    """Constraint Gram matrix D P D^T is numerically singular."""


# --- phy --------------------------------------------------------------------

class SampleOutOfRange(TrackSimError):
    """Input sample is not representable with the configured bit width."""


class LengthMismatch(TrackSimError):
    """Sequence length is incompatible with the framing it must satisfy."""


class ZeroChannel(TrackSimError):
    """A used subcarrier has (numerically) zero channel response."""


# --- sim --------------------------------------------------------------------

class NoValidPackets(TrackSimError):
    """All timestamp pairs arrived after the ensemble window closed."""


# --- cli --------------------------------------------------------------------

class ConfigError(TrackSimError):
    """Invalid flags, config file keys, or parameter combinations."""
