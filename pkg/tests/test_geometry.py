import math

import numpy as np
import pytest

from tracksim.errors import (
    ConcentricCircles,
    ContainedCircles,
    CoincidentPoints,
    DisjointCircles,
    ParallelBearings,
    VerticalBearing,
    ZoneBeyondRange,
)
from tracksim.geometry import (
    DEFAULT_LADDER,
    BeamwidthLadder,
    Bearing,
    Circle,
    Line,
    Position2D,
    fit_line,
    predict_zone,
    quantize_beamwidth,
    radical_point,
    required_beamwidth,
    triangulate,
    zone_forward_circle,
)

from oracles import brute_force_radical_point, analytic_circle_intersections, intersect_lines_parametric

P = Position2D
deg = Bearing.from_degrees


class TestTriangulate:
    def test_symmetric_isosceles(self):
        p = triangulate(P(0, 0), P(10, 0), deg(45), deg(135))
        assert p.x == pytest.approx(5.0, abs=1e-9)
        assert p.y == pytest.approx(5.0, abs=1e-9)

    def test_against_parametric_solver(self):
        p = triangulate(P(0, 0), P(8, 0), deg(60), deg(120))
        expected = intersect_lines_parametric((0, 0), math.radians(60), (8, 0), math.radians(120))
        assert p.x == pytest.approx(expected[0], abs=1e-9)
        assert p.y == pytest.approx(expected[1], abs=1e-9)
        assert p.y == pytest.approx(6.9282, abs=1e-4)

    def test_parallel_bearings_rejected(self):
        with pytest.raises(ParallelBearings):
            triangulate(P(0, 0), P(10, 0), deg(30), deg(30))

    def test_vertical_bearing_rejected(self):
        with pytest.raises(VerticalBearing):
            triangulate(P(0, 0), P(10, 0), deg(90), deg(45))

    def test_point_lies_on_both_bearing_lines(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            r = P(*rng.uniform(-100, 100, 2))
            s = P(*rng.uniform(-100, 100, 2))
            a, b = rng.uniform(-1.2, 1.2, 2)
            if abs(math.tan(a) - math.tan(b)) < 1e-3:
                continue
            p = triangulate(r, s, Bearing(a), Bearing(b))
            assert abs((p.y - r.y) - math.tan(a) * (p.x - r.x)) < 1e-6
            assert abs((p.y - s.y) - math.tan(b) * (p.x - s.x)) < 1e-6

    def test_round_trip_random_instances(self):
        # Recover a known target from analytically computed bearings.
        rng = np.random.default_rng(7)
        for _ in range(2000):
            target = rng.uniform(-200, 200, 2)
            r = rng.uniform(-200, 200, 2)
            s = rng.uniform(-200, 200, 2)
            alpha = math.atan2(target[1] - r[1], target[0] - r[0])
            beta = math.atan2(target[1] - s[1], target[0] - s[0])
            try:
                p = triangulate(P(*r), P(*s), Bearing(alpha), Bearing(beta))
            except (ParallelBearings, VerticalBearing):
                continue
            assert math.hypot(p.x - target[0], p.y - target[1]) < 1e-6

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            r = rng.uniform(-50, 50, 2)
            s = rng.uniform(-50, 50, 2)
            a, b = 0.4, -0.9
            phi = rng.uniform(0, 2 * math.pi)
            baseline = triangulate(P(*r), P(*s), Bearing(a), Bearing(b))
            rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
            try:
                rotated = triangulate(
                    P(*(rot @ r)), P(*(rot @ s)), Bearing(a + phi), Bearing(b + phi)
                )
            except (ParallelBearings, VerticalBearing):
                continue
            expected = rot @ np.array([baseline.x, baseline.y])
            assert math.hypot(rotated.x - expected[0], rotated.y - expected[1]) < 1e-6


class TestBearing:
    def test_angle_wraps_into_half_open_interval(self):
        assert Bearing(3 * math.pi).angle == pytest.approx(math.pi)
        assert Bearing(-math.pi).angle == pytest.approx(math.pi)
        assert Bearing(math.pi / 4).angle == pytest.approx(math.pi / 4)

    def test_tangent_of_vertical_raises(self):
        with pytest.raises(VerticalBearing):
            _ = deg(90).tangent
        with pytest.raises(VerticalBearing):
            _ = deg(-90).tangent


class TestFitLine:
    def test_line_through_origin(self):
        line = fit_line(P(0, 0), P(2, 4))
        assert line.slope == pytest.approx(2.0)
        assert line.intercept == pytest.approx(0.0)

    def test_both_points_satisfy_equation(self):
        a, b = P(1, 1), P(3, 5)
        line = fit_line(a, b)
        assert line.slope == pytest.approx(2.0)
        assert line.intercept == pytest.approx(-1.0)
        assert line.residual(a) < 1e-9
        assert line.residual(b) < 1e-9

    def test_vertical_representation(self):
        line = fit_line(P(2, 0), P(2, 7))
        assert line.is_vertical
        assert line.x_vertical == pytest.approx(2.0)

    def test_coincident_points_rejected(self):
        with pytest.raises(CoincidentPoints):
            fit_line(P(1, 2), P(1, 2))

    def test_exactly_one_representation(self):
        with pytest.raises(ValueError):
            Line(slope=1.0, intercept=0.0, x_vertical=2.0)
        with pytest.raises(ValueError):
            Line()


class TestForwardCircle:
    def test_advance_by_step_distance(self):
        # Unit-direction advance by d=5 beyond (3,4), radius 5/sqrt(3).
        c = zone_forward_circle(P(0, 0), P(3, 4))
        assert (c.center.x, c.center.y) == pytest.approx((6.0, 8.0))
        assert c.radius == pytest.approx(5 / math.sqrt(3), abs=1e-4)

    def test_unit_radius_case(self):
        c = zone_forward_circle(P(0, 0), P(math.sqrt(3), 0))
        assert c.center.x == pytest.approx(2 * math.sqrt(3))
        assert c.radius == pytest.approx(1.0)

    def test_vertical_motion(self):
        # Vector arithmetic: direction (0,1), advance 2 beyond (0,2).
        c = zone_forward_circle(P(0, 0), P(0, 2))
        assert (c.center.x, c.center.y) == pytest.approx((0.0, 4.0))
        assert c.radius == pytest.approx(2 / math.sqrt(3), abs=1e-4)

    def test_center_on_motion_line(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a = P(*rng.uniform(-50, 50, 2))
            b = P(*rng.uniform(-50, 50, 2))
            if a == b:
                continue
            c = zone_forward_circle(a, b)
            assert fit_line(a, b).residual(c.center) < 1e-9 * max(1.0, abs(c.center.x))


class TestRadicalPoint:
    def test_equal_radii_midpoint(self):
        p = radical_point(Circle(P(0, 0), 1), Circle(P(2, 0), 1))
        assert (p.x, p.y) == pytest.approx((1.0, 0.0))

    def test_matches_brute_force_oracle(self):
        p = radical_point(Circle(P(0, 0), 2), Circle(P(3, 0), 1))
        ref = brute_force_radical_point((0, 0), 2, (3, 0), 1)
        assert (p.x, p.y) == pytest.approx(tuple(ref), abs=1e-6)
        assert (p.x, p.y) == pytest.approx((2.0, 0.0))

    def test_zone_circles_against_oracle(self):
        p = radical_point(Circle(P(6, 8), 2.8868), Circle(P(3, 4), 2.5))
        ref = brute_force_radical_point((6, 8), 2.8868, (3, 4), 2.5)
        assert (p.x, p.y) == pytest.approx(tuple(ref), abs=1e-6)
        assert (p.x, p.y) == pytest.approx((4.375, 5.8333), abs=1e-3)

    def test_disjoint_contained_concentric(self):
        with pytest.raises(DisjointCircles):
            radical_point(Circle(P(0, 0), 1), Circle(P(5, 0), 1))
        with pytest.raises(ContainedCircles):
            radical_point(Circle(P(0, 0), 5), Circle(P(1, 0), 1))
        with pytest.raises(ConcentricCircles):
            radical_point(Circle(P(0, 0), 2), Circle(P(0, 0), 1))

    def test_chord_geometry(self):
        # Intersection points are equidistant from the radical point and
        # the chord is perpendicular to the center line.
        rng = np.random.default_rng(5)
        for _ in range(200):
            c1 = rng.uniform(-20, 20, 2)
            r1 = rng.uniform(0.5, 10)
            angle = rng.uniform(0, 2 * math.pi)
            r2 = rng.uniform(0.5, 10)
            d = rng.uniform(abs(r1 - r2) + 0.05, r1 + r2 - 0.05)
            if d <= 0.05:
                continue
            c2 = c1 + d * np.array([math.cos(angle), math.sin(angle)])
            p = radical_point(Circle(P(*c1), r1), Circle(P(*c2), r2))
            q1, q2 = analytic_circle_intersections(c1, r1, c2, r2)
            d1 = math.hypot(p.x - q1[0], p.y - q1[1])
            d2 = math.hypot(p.x - q2[0], p.y - q2[1])
            assert abs(d1 - d2) < 1e-6
            chord = q2 - q1
            axis = c2 - c1
            assert abs(float(chord @ axis)) < 1e-6 * max(1.0, d)


class TestPredictZone:
    def test_composed_example(self):
        z = predict_zone(P(0, 0), P(3, 4))
        assert (z.final_circle.center.x, z.final_circle.center.y) == pytest.approx(
            (4.375, 5.8333), abs=1e-3
        )
        assert z.final_circle.radius == pytest.approx(2.8868, abs=1e-4)
        assert (z.turn_circle.center.x, z.turn_circle.center.y) == pytest.approx((3.0, 4.0))
        assert z.turn_circle.radius == pytest.approx(2.5)

    def test_horizontal_motion_stays_on_axis(self):
        z = predict_zone(P(0, 0), P(1, 0))
        for c in (z.forward_circle, z.turn_circle, z.final_circle):
            assert c.center.y == pytest.approx(0.0, abs=1e-12)
        assert z.radical_point.y == pytest.approx(0.0, abs=1e-12)

    def test_radius_ratio_forced_by_construction(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            a = P(*rng.uniform(-100, 100, 2))
            b = P(*rng.uniform(-100, 100, 2))
            if a == b:
                continue
            z = predict_zone(a, b)
            assert z.turn_circle.radius / z.forward_circle.radius == pytest.approx(
                math.sqrt(3) / 2
            )

    def test_zone_invariants(self):
        rng = np.random.default_rng(29)
        for _ in range(300):
            a = P(*rng.uniform(-500, 500, 2))
            b = P(*rng.uniform(-500, 500, 2))
            if a == b:
                continue
            z = predict_zone(a, b)
            d = z.step_distance
            assert d == pytest.approx(a.distance_to(b))
            # forward center on the motion line, one step past b
            assert z.motion_line.residual(z.forward_circle.center) < 1e-9 * max(1.0, d)
            assert z.forward_circle.center.distance_to(b) == pytest.approx(d, rel=1e-12)
            assert abs(z.forward_circle.radius - d / math.sqrt(3)) < 1e-12 * max(1.0, d)
            assert z.final_circle.radius == z.forward_circle.radius
            assert z.turn_circle.center == b
            # the two circles always intersect: |r_i - r_j| < d < r_i + r_j
            ri, rj = z.forward_circle.radius, z.turn_circle.radius
            assert abs(ri - rj) < d < ri + rj
            # radical point between the centers
            seg = z.forward_circle.center.distance_to(b)
            t = z.radical_point.distance_to(z.forward_circle.center) / seg
            assert 0.0 < t < 1.0
            line_residual = abs(
                (z.radical_point.x - b.x) * (z.forward_circle.center.y - b.y)
                - (z.radical_point.y - b.y) * (z.forward_circle.center.x - b.x)
            )
            assert line_residual < 1e-6 * max(1.0, d * d)

    def test_vertical_motion_line(self):
        z = predict_zone(P(2, 0), P(2, 7))
        assert z.motion_line.is_vertical
        assert z.forward_circle.center.x == pytest.approx(2.0)
        assert z.final_circle.center.x == pytest.approx(2.0)


class TestBeamwidth:
    def test_half_angle_geometry(self):
        assert required_beamwidth(1.0, 2.0) == pytest.approx(math.radians(60))

    def test_chord_cross_check(self):
        # A sector of the returned width just covers the zone circle: the
        # chord subtended at distance D has half-length D*sin(width/2).
        width = required_beamwidth(2.8868, 10.0)
        assert width == pytest.approx(math.radians(33.557), abs=1e-4)
        assert 10.0 * math.sin(width / 2) == pytest.approx(2.8868, abs=1e-9)

    def test_zone_beyond_range(self):
        with pytest.raises(ZoneBeyondRange):
            required_beamwidth(3.0, 2.0)

    def test_monotone_in_radius_and_distance(self):
        widths = [required_beamwidth(r, 50.0) for r in np.linspace(0.5, 49.0, 40)]
        assert all(b > a for a, b in zip(widths, widths[1:]))
        widths = [required_beamwidth(5.0, d) for d in np.linspace(5.0, 100.0, 40)]
        assert all(b < a for a, b in zip(widths, widths[1:]))

    def test_quantize_rules(self):
        ladder = BeamwidthLadder.from_degrees((10, 20, 30))
        assert quantize_beamwidth(math.radians(15), ladder) == pytest.approx(math.radians(20))
        assert quantize_beamwidth(math.radians(35), ladder) == pytest.approx(math.radians(30))
        assert quantize_beamwidth(math.radians(10), ladder) == pytest.approx(math.radians(10))

    def test_quantize_never_below_alpha_or_cap(self):
        rng = np.random.default_rng(31)
        for _ in range(500):
            alpha = rng.uniform(0.001, math.pi)
            got = quantize_beamwidth(alpha, DEFAULT_LADDER)
            assert got in DEFAULT_LADDER.widths
            assert got >= min(alpha, DEFAULT_LADDER.widths[-1]) - 1e-12

    def test_ladder_validation(self):
        with pytest.raises(ValueError):
            BeamwidthLadder(())
        with pytest.raises(ValueError):
            BeamwidthLadder.from_degrees((10, 10, 20))
        with pytest.raises(ValueError):
            BeamwidthLadder.from_degrees((0, 10))
