"""Capacity computations against brute-force oracles."""
import math
import random
from fractions import Fraction

import pytest

from toricap import (
    Ball,
    Cylinder,
    Ellipsoid4,
    EllipsoidSpec,
    GenericToric,
    LowerBound,
    Polydisk,
    ProjectiveSpace,
    UnsupportedShape,
    diagonal,
    find_k_equal_diagonal,
    gh_capacity_toric4,
    gh_spectrum_ellipsoid,
    gw_tangency_count,
    lagrangian_capacity,
    make_polygon_domain,
    support,
    torus_descendant,
)
from toricap.capacities import AxisMultiple, LengthMismatch, equal_diagonal_k_hint


def merged_multiples(a, b, count):
    """Oracle: materialize the first ``count`` entries of the sorted
    multiset {i*a} union {j*b}."""
    values = [i * a for i in range(1, count + 1)] + [j * b for j in range(1, count + 1)]
    return sorted(values)[:count]


def toric_min_max(domain, k):
    """Oracle: direct min over the k+1 pairs, recomputing the support."""
    return min(support(domain, (l, k - l)) for l in range(k + 1))


def random_ellipsoid(rng, cap=50):
    a = Fraction(rng.randint(1, cap), rng.randint(1, cap))
    b = Fraction(rng.randint(1, cap), rng.randint(1, cap))
    return EllipsoidSpec((min(a, b), max(a, b)))


class TestToricPath:
    def test_e12_k3(self, tri12):
        report = gh_capacity_toric4(tri12, 3)
        assert report.value == 2
        assert report.minimizer.as_pair() == (2, 1)

    def test_ball_closed_form(self, tri11):
        for k in range(1, 51):
            assert gh_capacity_toric4(tri11, k).value == math.ceil(k / 2)

    def test_k1_gives_min_extent(self, square, pentagon, tri12):
        for domain in (square, pentagon, tri12):
            expected = min(domain.x_extent, domain.y_extent)
            assert gh_capacity_toric4(domain, 1).value == expected

    def test_tie_breaks_lexicographically(self, tri11):
        report = gh_capacity_toric4(tri11, 7)
        assert report.value == 4
        assert report.minimizer.as_pair() == (3, 4)

    def test_matches_direct_min_max(self, pentagon, square):
        for domain in (pentagon, square):
            for k in range(1, 21):
                assert gh_capacity_toric4(domain, k).value == toric_min_max(domain, k)

    def test_monotone_in_k(self, pentagon, square, tri12):
        for domain in (pentagon, square, tri12):
            values = [gh_capacity_toric4(domain, k).value for k in range(1, 31)]
            assert all(x <= y for x, y in zip(values, values[1:]))

    def test_monotone_in_domain(self, tri11, square):
        assert square.includes_domain(tri11)
        for k in range(1, 31):
            assert gh_capacity_toric4(tri11, k).value <= gh_capacity_toric4(square, k).value

    def test_scaling(self, pentagon):
        c = Fraction(5, 7)
        scaled = pentagon.scaled(c)
        for k in range(1, 21):
            assert gh_capacity_toric4(scaled, k).value == c * gh_capacity_toric4(pentagon, k).value


class TestSpectrumPath:
    def test_e12_first_five(self, e12):
        values = [gh_spectrum_ellipsoid(e12, k).value for k in range(1, 6)]
        assert values == [1, 2, 2, 3, 4]

    def test_round_ball_repetition(self, e11):
        for k in range(1, 41):
            assert gh_spectrum_ellipsoid(e11, k).value == math.ceil(k / 2)

    def test_matches_merge_oracle(self):
        rng = random.Random(23)
        for _ in range(25):
            e = random_ellipsoid(rng, cap=20)
            expected = merged_multiples(e.axes[0], e.axes[1], 40)
            got = [gh_spectrum_ellipsoid(e, k).value for k in range(1, 41)]
            assert got == expected

    def test_minimizer_descriptor(self, e12):
        r3 = gh_spectrum_ellipsoid(e12, 3)
        assert isinstance(r3.minimizer, AxisMultiple)
        axis = e12.axes[r3.minimizer.axis]
        assert axis * r3.minimizer.multiple == r3.value

    def test_large_k_is_fast(self, e12):
        assert gh_spectrum_ellipsoid(e12, 10**6).value == Fraction(666667)

    def test_cross_oracle_with_toric(self, e12):
        tri = e12.simplex_domain()
        for k in range(1, 31):
            assert gh_spectrum_ellipsoid(e12, k).value == gh_capacity_toric4(tri, k).value


class TestEqualDiagonalIndex:
    def test_examples(self):
        assert find_k_equal_diagonal(EllipsoidSpec((Fraction(1), Fraction(2)))) == 3
        assert find_k_equal_diagonal(EllipsoidSpec((Fraction(1), Fraction(1)))) == 2
        assert find_k_equal_diagonal(EllipsoidSpec((Fraction(2), Fraction(3)))) == 5

    def test_identity_holds_at_returned_k(self):
        rng = random.Random(29)
        for _ in range(40):
            e = random_ellipsoid(rng, cap=12)
            k = find_k_equal_diagonal(e)
            assert gh_spectrum_ellipsoid(e, k).value == k * diagonal(e)
            for smaller in range(1, k):
                assert gh_spectrum_ellipsoid(e, smaller).value != smaller * diagonal(e)

    def test_smallest_k_is_p_plus_q(self):
        rng = random.Random(31)
        for _ in range(40):
            e = random_ellipsoid(rng, cap=12)
            assert find_k_equal_diagonal(e) == equal_diagonal_k_hint(e)


class TestLagrangianCapacity:
    def test_ball(self):
        assert lagrangian_capacity(Ball(capacity=Fraction(1), n=3)) == Fraction(1, 3)
        assert lagrangian_capacity(Ball(capacity=Fraction(5, 2), n=5)) == Fraction(1, 2)

    def test_projective_space(self):
        assert lagrangian_capacity(ProjectiveSpace(n=2)) == Fraction(1, 3)
        assert lagrangian_capacity(ProjectiveSpace(n=1)) == Fraction(1, 2)

    def test_ellipsoid4_equals_diagonal(self):
        assert lagrangian_capacity(Ellipsoid4(a=Fraction(3), b=Fraction(6))) == 2

    def test_cylinder(self):
        assert lagrangian_capacity(Cylinder(k=1, m=4)) == 1
        assert lagrangian_capacity(Cylinder(k=3, m=0)) == Fraction(1, 3)

    def test_polydisk(self):
        assert lagrangian_capacity(Polydisk(radii=(Fraction(1), Fraction(7, 2)))) == 1
        with pytest.raises(UnsupportedShape):
            lagrangian_capacity(Polydisk(radii=(Fraction(1, 2),)))

    def test_generic_toric_lower_bound(self, square):
        value = lagrangian_capacity(GenericToric(domain=square))
        assert isinstance(value, LowerBound)
        assert value.value == 1


class TestCounts:
    def test_gw_tangency(self):
        assert gw_tangency_count(1) == 1
        assert gw_tangency_count(3) == 2
        assert gw_tangency_count(6) == 120
        for n in range(1, 9):
            assert gw_tangency_count(n) == math.factorial(n - 1)

    def test_descendant_zero_sum(self):
        assert torus_descendant(4, [(1, 0), (0, 1), (-1, 0), (0, -1)]) == 2
        assert torus_descendant(2, [(1, 1), (-1, -1)]) == 1

    def test_descendant_nonzero_sum(self):
        assert torus_descendant(3, [(1, 0), (0, 1), (0, 0)]) == 0

    def test_descendant_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            torus_descendant(3, [(1, 0), (-1, 0)])
        with pytest.raises(LengthMismatch):
            torus_descendant(2, [(1, 0), (-1,)])
