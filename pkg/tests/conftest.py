from fractions import Fraction

import pytest

from toricap import EllipsoidSpec, make_polygon_domain


@pytest.fixture
def tri11():
    """Moment simplex of the unit ball."""
    return make_polygon_domain([(0, 1), (1, 0)])


@pytest.fixture
def tri12():
    """Moment simplex of E(1, 2)."""
    return make_polygon_domain([(0, 2), (1, 0)])


@pytest.fixture
def square():
    """Moment image of the unit bidisk."""
    return make_polygon_domain([(0, 1), (1, 1), (1, 0)])


@pytest.fixture
def pentagon():
    """A three-edge concave graph used as a generic fixture."""
    return make_polygon_domain([(0, 2), (1, Fraction(3, 2)), (2, 0)])


@pytest.fixture
def e12():
    return EllipsoidSpec((Fraction(1), Fraction(2)))


@pytest.fixture
def e11():
    return EllipsoidSpec((Fraction(1), Fraction(1)))
