"""Rounding construction, Gauss points, orbit families, and CZ splits."""
import math
import random
from fractions import Fraction

import pytest

from toricap import (
    LatticeDirection,
    ReebOrbitFamily,
    SlopeConditionUnreachable,
    capacity_via_spectrum,
    flat_torus_geodesic_spectrum,
    gauss_point,
    gh_capacity_toric4,
    make_polygon_domain,
    orbit_families,
    reeb_angular_velocity,
    round_domain,
    split_family,
    support,
    support_smooth,
)
from toricap.rounding_reeb import AxisPoint, _rates_from, boundary_polyline

TAU = 1e-3
V = 1.0 / 32.0


@pytest.fixture(scope="module")
def rounded_tri11():
    return round_domain(make_polygon_domain([(0, 1), (1, 0)]), TAU, V)


@pytest.fixture(scope="module")
def rounded_tri12():
    return round_domain(make_polygon_domain([(0, 2), (1, 0)]), TAU, V)


@pytest.fixture(scope="module")
def rounded_pentagon():
    return round_domain(make_polygon_domain([(0, 2), (1, Fraction(3, 2)), (2, 0)]), TAU, V)


class TestRounding:
    def test_invariants_hold_on_fixtures(self, rounded_tri11, rounded_tri12, rounded_pentagon):
        for smooth in (rounded_tri11, rounded_tri12, rounded_pentagon):
            assert -smooth.v <= smooth.derivative(0.0) < 0.0
            assert smooth.derivative(smooth.x_max) < -1.0 / smooth.v
            assert abs(smooth.b_prime - float(smooth.source.y_extent)) <= smooth.hausdorff_bound
            assert 0.0 <= smooth.value(smooth.x_max) <= smooth.hausdorff_bound

    def test_hausdorff_bound_scales_with_tau(self):
        tri = make_polygon_domain([(0, 1), (1, 0)])
        bounds = [round_domain(tri, tau, V).hausdorff_bound for tau in (1e-2, 1e-3, 1e-4)]
        assert bounds[0] > bounds[1] > bounds[2]
        assert bounds[1] / bounds[0] == pytest.approx(0.1, rel=1e-6)

    def test_containment_on_grid(self, rounded_pentagon):
        domain = rounded_pentagon.source
        a = float(domain.x_extent)
        for i in range(257):
            x = a * i / 256
            fx = float(domain.boundary_value(Fraction(x).limit_denominator(10**12)))
            assert rounded_pentagon.value(x) >= fx - 1e-9

    def test_derivative_approaches_edge_slopes(self):
        # away from the corners the boundary slope converges to the
        # polygon's edge slopes as tau shrinks
        tri = make_polygon_domain([(0, 2), (1, 0)])
        for tau, tol in ((1e-3, 1e-3), (1e-4, 1e-4)):
            smooth = round_domain(tri, tau, V)
            assert smooth.derivative(0.5) == pytest.approx(-2.0, abs=tol)

    def test_square_rounds_cleanly(self):
        square = make_polygon_domain([(0, 1), (1, 1), (1, 0)])
        smooth = round_domain(square, 1e-2, 0.1)
        assert smooth.x_max > 1.0  # the vertical drop needs a short extension
        assert smooth.value(1.0) >= 1.0 - 1e-9  # the corner (1, 1) stays inside

    def test_unreachable_parameters_raise(self):
        tri = make_polygon_domain([(0, 1), (1, 0)])
        with pytest.raises(SlopeConditionUnreachable):
            round_domain(tri, 0.5, 0.5)
        with pytest.raises(SlopeConditionUnreachable):
            round_domain(tri, 1e-3, 1.5)

    def test_concavity_of_derivative_samples(self, rounded_pentagon):
        xs = [rounded_pentagon.x_max * i / 512 for i in range(513)]
        slopes = [rounded_pentagon.derivative(x) for x in xs]
        assert all(s < 0 for s in slopes)
        for s0, s1 in zip(slopes, slopes[1:]):
            assert s1 <= s0 + 1e-9 * (1 + abs(s0))
        assert slopes[-1] < slopes[0]

    def test_polyline_output(self, rounded_tri11):
        pts = boundary_polyline(rounded_tri11, samples=64)
        assert len(pts) == 64
        assert pts[0][0] == 0.0 and pts[-1][0] == pytest.approx(rounded_tri11.x_max)
        ys = [y for _, y in pts]
        assert all(y0 > y1 for y0, y1 in zip(ys, ys[1:]))


class TestGaussPoint:
    def test_symmetric_direction_on_round_ball(self, rounded_tri11):
        point = gauss_point(rounded_tri11, LatticeDirection(1, 1))
        assert point is not None
        x, y = point
        assert x == pytest.approx(0.5, abs=0.1)
        assert y == pytest.approx(0.5, abs=0.1)
        assert rounded_tri11.derivative(x) == pytest.approx(-1.0, abs=1e-6)

    def test_axis_direction_returns_none(self, rounded_tri11):
        assert gauss_point(rounded_tri11, LatticeDirection(1, 0)) is None
        assert gauss_point(rounded_tri11, LatticeDirection(0, 3)) is None

    def test_out_of_slope_range_returns_none(self):
        smooth = round_domain(make_polygon_domain([(0, 1), (1, 0)]), 1e-3, 0.25)
        # l/m = 1/100 is shallower than g'(0) >= -0.25 allows
        assert gauss_point(smooth, LatticeDirection(1, 100)) is None

    def test_action_equals_support(self, rounded_tri12):
        point = gauss_point(rounded_tri12, LatticeDirection(2, 1))
        assert rounded_tri12.derivative(point[0]) == pytest.approx(-2.0, abs=1e-6)
        action = 2 * point[0] + point[1]
        assert action == pytest.approx(support_smooth(rounded_tri12, 2, 1), abs=1e-11)
        # and within the perturbation budget of the exact support 2
        tol = rounded_tri12.hausdorff_bound * math.hypot(2, 1)
        assert abs(action - 2.0) <= 2 * tol


class TestReebRates:
    def test_round_ball_symmetric_point(self, rounded_tri11):
        point = gauss_point(rounded_tri11, LatticeDirection(1, 1))
        r1, r2 = reeb_angular_velocity(rounded_tri11, point)
        assert r1 == pytest.approx(r2, rel=1e-12)
        # rates are 2*pi/action; the action is 1 + O(hausdorff)
        action = point[0] + point[1]
        assert r1 == pytest.approx(2 * math.pi / action, rel=1e-12)
        assert abs(r1 - 2 * math.pi) <= 4 * math.pi * rounded_tri11.hausdorff_bound

    def test_axis_point_rejected(self, rounded_tri11):
        with pytest.raises(AxisPoint):
            reeb_angular_velocity(rounded_tri11, (0.0, rounded_tri11.b_prime))

    def test_rate_homogeneity(self):
        gauss_vec = (3.0 / 5.0, 4.0 / 5.0)
        w = (0.7, 0.4)
        c = 3.7
        base = _rates_from(gauss_vec, w)
        scaled = _rates_from(gauss_vec, (c * w[0], c * w[1]))
        assert scaled[0] == pytest.approx(base[0] / c, rel=1e-12)
        assert scaled[1] == pytest.approx(base[1] / c, rel=1e-12)


class TestOrbitFamilies:
    def test_round_ball_low_cutoff(self, rounded_tri11):
        fams = orbit_families(rounded_tri11, 1.05)
        dirs = [f.direction.as_pair() for f in fams]
        assert dirs == [(1, 0), (0, 1), (1, 1)]
        for f in fams:
            assert f.action == pytest.approx(1.0, abs=3 * rounded_tri11.hausdorff_bound)

    def test_e12_low_cutoff(self, rounded_tri12):
        fams = orbit_families(rounded_tri12, 1.5)
        assert [f.direction.as_pair() for f in fams] == [(1, 0)]

    def test_below_min_action_is_empty(self, rounded_tri11):
        assert orbit_families(rounded_tri11, 0.5) == []

    def test_sorted_by_action(self, rounded_pentagon):
        fams = orbit_families(rounded_pentagon, 6.0)
        actions = [f.action for f in fams]
        assert actions == sorted(actions)

    def test_multiplicity_is_gcd_and_action_scales(self, rounded_tri12):
        fams = {f.direction.as_pair(): f for f in orbit_families(rounded_tri12, 9.0)}
        base = fams[(2, 1)]
        cover = fams[(4, 2)]
        assert base.multiplicity == 1 and cover.multiplicity == 2
        assert cover.underlying_simple.as_pair() == (2, 1)
        assert cover.action == pytest.approx(2 * base.action, rel=1e-9)

    def test_action_matches_support_of_rounded_domain(self, rounded_pentagon):
        for fam in orbit_families(rounded_pentagon, 8.0):
            if fam.point is None:
                continue
            l, m = fam.direction.as_pair()
            assert abs(fam.action - support_smooth(rounded_pentagon, l, m)) <= 1e-9 * (1 + fam.action)

    def test_support_perturbation_bound(self, rounded_pentagon):
        domain = rounded_pentagon.source
        rng = random.Random(41)
        for _ in range(100):
            l, m = rng.randint(0, 6), rng.randint(0, 6)
            if (l, m) == (0, 0):
                l = 1
            exact = float(support(domain, (l, m)))
            smooth_val = support_smooth(rounded_pentagon, l, m)
            assert 0 <= smooth_val - exact <= rounded_pentagon.hausdorff_bound * math.hypot(l, m) + 1e-9


class TestSplitAndCapacity:
    def test_cz_table(self):
        def split(l, m):
            g = math.gcd(l, m)
            family = ReebOrbitFamily(
                LatticeDirection(l, m), None, 1.0, g, LatticeDirection(l // g, m // g)
            )
            return split_family(family)

        assert (split(1, 0).elliptic_cz, split(1, 0).hyperbolic_cz) == (3, 2)
        assert (split(1, 1).elliptic_cz, split(1, 1).hyperbolic_cz) == (5, 4)
        assert (split(2, 3).elliptic_cz, split(2, 3).hyperbolic_cz) == (11, 10)

    def test_parity_invariant(self, rounded_pentagon):
        for fam in orbit_families(rounded_pentagon, 6.0):
            split = split_family(fam)
            assert split.elliptic_cz % 2 == 1
            assert split.elliptic_cz - split.hyperbolic_cz == 1
            assert split.elliptic_action == split.hyperbolic_action == fam.action

    def test_capacity_via_spectrum_converges(self):
        tri = make_polygon_domain([(0, 1), (1, 0)])
        for tau in (1e-2, 1e-3, 1e-4):
            smooth = round_domain(tri, tau, V)
            for k in range(1, 11):
                spectral = capacity_via_spectrum(smooth, k)
                exact = float(gh_capacity_toric4(tri, k).value)
                assert abs(spectral - exact) <= 2 * smooth.hausdorff_bound * k

    def test_capacity_via_spectrum_k1(self, rounded_tri12):
        value = capacity_via_spectrum(rounded_tri12, 1)
        assert value == pytest.approx(1.0, abs=2 * rounded_tri12.hausdorff_bound)


class TestFlatTorus:
    def test_unit_lattice_cutoff_one(self):
        spectrum = flat_torus_geodesic_spectrum(2, [1.0, 1.0], 1.0)
        classes = {cls for cls, _ in spectrum}
        assert classes == {(1, 0), (-1, 0), (0, 1), (0, -1)}
        assert all(length == pytest.approx(1.0) for _, length in spectrum)

    def test_cutoff_adds_diagonal_classes(self):
        spectrum = flat_torus_geodesic_spectrum(2, [1.0, 1.0], 1.5)
        classes = {cls for cls, _ in spectrum}
        assert (1, 1) in classes and (-1, 1) in classes
        assert len(classes) == 8

    def test_below_min_length_is_empty(self):
        assert flat_torus_geodesic_spectrum(2, [1.0, 2.0], 0.9) == []

    def test_anisotropic_lengths(self):
        spectrum = flat_torus_geodesic_spectrum(3, [1.0, 2.0, 5.0], 2.1)
        lengths = [length for _, length in spectrum]
        assert lengths == sorted(lengths)
        assert {cls for cls, _ in spectrum} == {
            (1, 0, 0), (-1, 0, 0), (2, 0, 0), (-2, 0, 0), (0, 1, 0), (0, -1, 0)
        }
