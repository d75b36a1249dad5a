"""Planar constructions for GPS-free tracking.

Provides bearing-line triangulation from two reference nodes, motion-line
fitting from the last two position fixes, the integrated tracking-zone
construction (forward circle, turn circle, radical point, final circle),
and the adaptive beamwidth rule used to aim a directional antenna at the
predicted zone.

All operations are pure functions over immutable value types and are safe
to call concurrently.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

from .errors import (
    ConcentricCircles,
    ContainedCircles,
    CoincidentPoints,
    DisjointCircles,
    ParallelBearings,
    VerticalBearing,
    ZoneBeyondRange,
)

# Bearings whose cosine is below this are treated as vertical.
VERTICAL_COS_EPS = 1e-12

# Default tolerance for |tan(alpha) - tan(beta)| before two bearing lines
# are declared parallel.
PARALLEL_EPS = 1e-9

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Position2D:
    """Planar point; x is east and y is north, both in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"position coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Position2D") -> float:
        return math.hypot(other.x - self.x, other.y - self.y)


@dataclass(frozen=True)
class Bearing:
    """Direction in radians, counterclockwise from the positive x axis.

    The angle is normalized into (-pi, pi]. The tangent is undefined for
    vertical bearings (+-pi/2); accessing it raises VerticalBearing.
    """

    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ValueError("bearing angle must be finite")
        wrapped = math.fmod(self.angle, 2.0 * math.pi)
        if wrapped > math.pi:
            wrapped -= 2.0 * math.pi
        elif wrapped <= -math.pi:
            wrapped += 2.0 * math.pi
        object.__setattr__(self, "angle", wrapped)

    @classmethod
    def from_degrees(cls, degrees: float) -> "Bearing":
        return cls(math.radians(degrees))

    @property
    def tangent(self) -> float:
        if abs(math.cos(self.angle)) < VERTICAL_COS_EPS:
            raise VerticalBearing(f"bearing {self.angle} rad is vertical; tangent undefined")
        return math.tan(self.angle)


@dataclass(frozen=True)
class Line:
    """A line, either as y = slope*x + intercept or as the vertical x = x_vertical.

    Exactly one representation is active: the slope form has slope and
    intercept set with x_vertical None, the vertical form the reverse.
    """

    slope: float | None = None
    intercept: float | None = None
    x_vertical: float | None = None

    def __post_init__(self):
        sloped = self.slope is not None and self.intercept is not None
        vertical = self.x_vertical is not None
        if sloped == vertical:
            raise ValueError("exactly one of (slope, intercept) or x_vertical must be set")
        if sloped and not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise ValueError("slope and intercept must be finite")
        if vertical and not math.isfinite(self.x_vertical):
            raise ValueError("x_vertical must be finite")

    @property
    def is_vertical(self) -> bool:
        return self.x_vertical is not None

    def residual(self, p: Position2D) -> float:
        """Equation residual at p: |x - x0| for vertical lines, |y - (m x + c)| otherwise."""
        if self.is_vertical:
            return abs(p.x - self.x_vertical)
        return abs(p.y - (self.slope * p.x + self.intercept))

    def contains(self, p: Position2D, tol: float = 1e-9) -> bool:
        return self.residual(p) <= tol


@dataclass(frozen=True)
class Circle:
    center: Position2D
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"circle radius must be positive and finite, got {self.radius}")

    def contains(self, p: Position2D, tol: float = 0.0) -> bool:
        return self.center.distance_to(p) <= self.radius + tol


@dataclass(frozen=True)
class Zone:
    """Integrated tracking zone predicted from the last two position fixes.

    motion_line passes through the two fixes; forward_circle sits one step
    ahead of the newest fix; turn_circle is centered on the newest fix;
    final_circle carries the forward radius but is recentered on the
    radical point of the two circles, which pulls the prediction back
    toward the newest fix so turns and slow-downs stay covered.
    """

    motion_line: Line
    forward_circle: Circle
    turn_circle: Circle
    radical_point: Position2D
    final_circle: Circle
    step_distance: float


@dataclass(frozen=True)
class BeamwidthLadder:
    """Discrete beamwidths (radians) an antenna can form, strictly increasing."""

    widths: tuple[float, ...]

    def __post_init__(self):
        if len(self.widths) == 0:
            raise ValueError("beamwidth ladder must not be empty")
        for w in self.widths:
            if not (0.0 < w <= math.pi):
                raise ValueError(f"beamwidths must lie in (0, pi], got {w}")
        if any(b <= a for a, b in zip(self.widths, self.widths[1:])):
            raise ValueError("beamwidth ladder must be strictly increasing")

    @classmethod
    def from_degrees(cls, degrees) -> "BeamwidthLadder":
        return cls(tuple(math.radians(d) for d in degrees))


# Hits every discrete width the antenna sweep experiments exercise.
DEFAULT_LADDER = BeamwidthLadder.from_degrees((2.0, 7.0, 10.0, 14.0, 20.0, 28.0, 30.0))


def triangulate(
    r: Position2D,
    s: Position2D,
    alpha: Bearing,
    beta: Bearing,
    parallel_eps: float = PARALLEL_EPS,
) -> Position2D:
    """Intersect the bearing line through r at alpha with the one through s at beta.

    Raises VerticalBearing if either bearing has an undefined tangent and
    ParallelBearings when the two tangents differ by less than parallel_eps.
    """
    ta = alpha.tangent
    tb = beta.tangent
    denom = ta - tb
    if abs(denom) <= parallel_eps:
        raise ParallelBearings(
            f"bearing tangents {ta} and {tb} differ by less than {parallel_eps}"
        )
    x = ((s.y - r.y) + r.x * ta - s.x * tb) / denom
    y = ((r.x - s.x) * ta * tb + (s.y * ta - r.y * tb)) / denom
    return Position2D(x, y)


def fit_line(a: Position2D, b: Position2D) -> Line:
    """Line through two distinct fixes; vertical representation when x coordinates match."""
    if a == b:
        raise CoincidentPoints(f"cannot fit a line through coincident points {a}")
    if a.x == b.x:
        return Line(x_vertical=a.x)
    slope = (b.y - a.y) / (b.x - a.x)
    intercept = (b.x * a.y - a.x * b.y) / (b.x - a.x)
    return Line(slope=slope, intercept=intercept)


def zone_forward_circle(a: Position2D, b: Position2D) -> Circle:
    """Circle of radius d/sqrt(3) centered one step-length past b along a->b.

    d is the distance between the two fixes; the center is the reflection
    of a through b, so it lies on the motion line by construction.
    """
    if a == b:
        raise CoincidentPoints(f"cannot build a forward circle from coincident points {a}")
    d = a.distance_to(b)
    center = Position2D(2.0 * b.x - a.x, 2.0 * b.y - a.y)
    return Circle(center, d / SQRT3)


def radical_point(c1: Circle, c2: Circle, eps: float = 1e-12) -> Position2D:
    """Point where the center line meets the chord through the circle intersections.

    Requires |r1 - r2| <= d <= r1 + r2 where d is the center distance; at
    either boundary the circles are tangent and the radical point is the
    tangency point. The point sits at signed distance
    (d^2 + r1^2 - r2^2) / (2 d) from c1's center, measured toward c2's.
    """
    dx = c2.center.x - c1.center.x
    dy = c2.center.y - c1.center.y
    d = math.hypot(dx, dy)
    if d <= eps:
        raise ConcentricCircles("circle centers coincide")
    if d > c1.radius + c2.radius:
        raise DisjointCircles(
            f"center distance {d} exceeds r1 + r2 = {c1.radius + c2.radius}"
        )
    if d < abs(c1.radius - c2.radius):
        raise ContainedCircles(
            f"center distance {d} is below |r1 - r2| = {abs(c1.radius - c2.radius)}"
        )
    along = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d)
    return Position2D(c1.center.x + along * dx / d, c1.center.y + along * dy / d)


def predict_zone(a: Position2D, b: Position2D) -> Zone:
    """Full integrated-zone construction from the last two fixes a (older) and b.

    The forward circle anticipates continued straight motion; the turn
    circle (radius d/2 at b) anticipates sharp turns and slow-downs; the
    final circle keeps the forward radius but is centered on the radical
    point of the two, which always lies between their centers because
    (1/sqrt(3) - 1/2) d < d < (1/sqrt(3) + 1/2) d.
    """
    motion_line = fit_line(a, b)
    forward = zone_forward_circle(a, b)
    d = a.distance_to(b)
    turn = Circle(b, d / 2.0)
    p = radical_point(forward, turn)
    final = Circle(p, forward.radius)
    return Zone(
        motion_line=motion_line,
        forward_circle=forward,
        turn_circle=turn,
        radical_point=p,
        final_circle=final,
        step_distance=d,
    )


def required_beamwidth(zone_radius: float, transmitter_distance: float) -> float:
    """Smallest beamwidth whose sector at the given distance covers the zone circle.

    Returns 2*arcsin(zone_radius / transmitter_distance) in (0, pi].
    """
    if not (zone_radius > 0.0 and math.isfinite(zone_radius)):
        raise ValueError(f"zone radius must be positive and finite, got {zone_radius}")
    if not (transmitter_distance > 0.0 and math.isfinite(transmitter_distance)):
        raise ValueError(
            f"transmitter distance must be positive and finite, got {transmitter_distance}"
        )
    if zone_radius > transmitter_distance:
        raise ZoneBeyondRange(
            f"zone radius {zone_radius} exceeds transmitter distance {transmitter_distance}"
        )
    return 2.0 * math.asin(zone_radius / transmitter_distance)


def quantize_beamwidth(alpha: float, ladder: BeamwidthLadder) -> float:
    """Smallest ladder width >= alpha, capped at the widest rung."""
    widths = ladder.widths
    idx = bisect_left(widths, alpha)
    if idx >= len(widths):
        return widths[-1]
    return widths[idx]
