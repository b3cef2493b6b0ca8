"""Exact-arithmetic moment domains and geometric predicates.

A 4-dimensional convex toric domain is described by its moment polygon:
the region under the graph of a piecewise-linear, concave, non-increasing
function f on [0, a] with f(0) = b and final height 0.  All arithmetic in
this module is exact rational (``fractions.Fraction``); no floats enter.

Everything here is an immutable value; all operations are pure functions
and safe to call concurrently.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

RationalLike = Union[int, str, Fraction]


class DomainValidationError(ValueError):
    """Base class for moment-polygon invariant violations."""


class NonConcave(DomainValidationError):
    """Consecutive edge slopes fail to decrease strictly."""


class NotMonotone(DomainValidationError):
    """Boundary graph is not the graph of a non-increasing function."""


class BadEndpoints(DomainValidationError):
    """First vertex must sit on the y-axis, last on the x-axis, both extents positive."""


class ZeroDirection(ValueError):
    """Support direction must be nonzero with non-negative components."""


class PreconditionViolated(ValueError):
    """Operation called outside its documented precondition."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions, and 'p/q' or decimal strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact-arithmetic inputs; pass a string or Fraction")
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def format_rational(value: Fraction) -> str:
    """Canonical lowest-terms rendering: '2', '-1/3', '7/5'."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LatticeDirection:
    """Non-negative integer direction (l, m), not both zero."""

    l: int
    m: int

    def __post_init__(self):
        if not (isinstance(self.l, int) and isinstance(self.m, int)):
            raise TypeError("lattice components must be integers")
        if self.l < 0 or self.m < 0:
            raise ZeroDirection("lattice direction components must be non-negative")
        if self.l == 0 and self.m == 0:
            raise ZeroDirection("lattice direction must be nonzero")

    @property
    def coprime(self) -> bool:
        return math.gcd(self.l, self.m) == 1

    @property
    def gcd(self) -> int:
        return math.gcd(self.l, self.m)

    def as_pair(self) -> tuple[int, int]:
        return (self.l, self.m)


@dataclass(frozen=True)
class MomentDomain2D:
    """Moment polygon of a compact convex 4-dimensional toric domain.

    ``vertices`` lists the boundary graph from (0, b) to the x-axis.  The
    x-coordinates increase strictly, except that a single final vertical
    edge (dropping to the axis at x = a) is allowed, so products such as
    the unit square are representable.  The region itself is
    {(x, y) : 0 <= x <= a, 0 <= y <= f(x)}.
    """

    vertices: tuple[Point, ...]

    @property
    def x_extent(self) -> Fraction:
        """Horizontal extent a."""
        return self.vertices[-1][0]

    @property
    def y_extent(self) -> Fraction:
        """Vertical extent b = f(0)."""
        return self.vertices[0][1]

    def edges(self) -> list[tuple[Point, Point]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def boundary_value(self, x: Fraction) -> Fraction:
        """Exact value of the upper boundary function f at x in [0, a]."""
        x = as_rational(x)
        if x < 0 or x > self.x_extent:
            raise ValueError("x outside [0, a]")
        for (x1, y1), (x2, y2) in self.edges():
            if x1 <= x <= x2 and x2 > x1:
                return y1 + (y2 - y1) * (x - x1) / (x2 - x1)
        raise AssertionError("non-vertical edges cover [0, a]")  # pragma: no cover

    def contains_point(self, p: Sequence[RationalLike]) -> bool:
        x, y = as_rational(p[0]), as_rational(p[1])
        if x < 0 or y < 0 or x > self.x_extent:
            return False
        return y <= self.boundary_value(x)

    def scaled(self, c: RationalLike) -> "MomentDomain2D":
        c = as_rational(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return MomentDomain2D(tuple((c * x, c * y) for x, y in self.vertices))

    def includes_domain(self, other: "MomentDomain2D") -> bool:
        """Vertexwise inclusion test: every vertex of ``other`` lies in this domain."""
        return all(self.contains_point(p) for p in other.vertices)


@dataclass(frozen=True)
class EllipsoidSpec:
    """Ellipsoid with positive rational semi-axes a_1 <= ... <= a_n (capacity units)."""

    axes: tuple[Fraction, ...]

    def __post_init__(self):
        axes = tuple(as_rational(a) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        if not axes:
            raise ValueError("ellipsoid needs at least one axis")
        if any(a <= 0 for a in axes):
            raise ValueError("ellipsoid axes must be positive")
        if any(axes[i] > axes[i + 1] for i in range(len(axes) - 1)):
            raise ValueError("ellipsoid axes must be sorted non-decreasing")

    @property
    def dim(self) -> int:
        return len(self.axes)

    def simplex_domain(self) -> MomentDomain2D:
        """Moment polygon of a 4-dimensional ellipsoid: the triangle with
        x-intercept axes[0] and y-intercept axes[1]."""
        if self.dim != 2:
            raise ValueError("simplex_domain is defined for n = 2 only")
        a, b = self.axes
        return make_polygon_domain([(0, b), (a, 0)])


def ball(capacity: RationalLike, n: int) -> EllipsoidSpec:
    """Round ball of the given capacity in dimension 2n, as an ellipsoid."""
    c = as_rational(capacity)
    return EllipsoidSpec(tuple([c] * n))


def make_polygon_domain(vertices: Iterable[Sequence[RationalLike]]) -> MomentDomain2D:
    """Validate a vertex list and return the moment polygon.

    Raises BadEndpoints, NotMonotone, or NonConcave naming the violated
    invariant.  Slopes must be <= 0 and strictly decreasing; one vertical
    edge is permitted as the final drop to the x-axis.
    """
    pts = [(as_rational(p[0]), as_rational(p[1])) for p in vertices]
    if len(pts) < 2:
        raise BadEndpoints("at least two vertices are required")
    if pts[0][0] != 0:
        raise BadEndpoints("first vertex must have x = 0")
    if pts[-1][1] != 0:
        raise BadEndpoints("last vertex must have y = 0")
    if pts[0][1] <= 0:
        raise BadEndpoints("height b = f(0) must be positive")
    if pts[-1][0] <= 0:
        raise BadEndpoints("width a must be positive")

    prev_slope: Optional[Fraction] = None  # None means "no edge yet"
    n_edges = len(pts) - 1
    for i, ((x1, y1), (x2, y2)) in enumerate(zip(pts, pts[1:])):
        dx, dy = x2 - x1, y2 - y1
        if dx < 0:
            raise NotMonotone("x-coordinates must be non-decreasing")
        if dx == 0:
            if dy == 0:
                raise NotMonotone("zero-length edge")
            if dy > 0:
                raise NotMonotone("vertical edge must descend")
            if i != n_edges - 1:
                raise NotMonotone("a vertical edge is only allowed as the final drop to the x-axis")
            continue  # slope -infinity, strictly below any finite slope
        slope = dy / dx
        if slope > 0:
            raise NotMonotone(f"edge {i} has positive slope {format_rational(slope)}")
        if prev_slope is not None and slope >= prev_slope:
            raise NonConcave(
                f"edge {i} slope {format_rational(slope)} does not strictly decrease "
                f"from {format_rational(prev_slope)}"
            )
        prev_slope = slope
    return MomentDomain2D(tuple(pts))


def diagonal(domain: Union[MomentDomain2D, EllipsoidSpec]) -> Fraction:
    """sup{t > 0 : (t, ..., t) lies in the moment region}.

    For an ellipsoid the closed form (sum 1/a_i)^(-1) is used; for a
    polygon the unique crossing of the boundary graph with y = x is
    solved edge by edge.
    """
    if isinstance(domain, EllipsoidSpec):
        return 1 / sum(1 / a for a in domain.axes)
    for (x1, y1), (x2, y2) in domain.edges():
        if x1 == x2:
            # final vertical edge: diagonal exits at (a, a) if the edge spans it
            if y2 <= x1 <= y1:
                return x1
            continue
        s = (y2 - y1) / (x2 - x1)
        t = (y1 - s * x1) / (1 - s)
        if x1 <= t <= x2:
            return t
    raise AssertionError("valid domains always meet the diagonal")  # pragma: no cover


def cylinders_union_diagonal(r: RationalLike, n: int) -> Fraction:
    """Diagonal of the non-disjoint union of cylinders of size r in C^n.

    The moment region is {x >= 0 : x_i <= r for some i}, so (t, ..., t)
    belongs to it exactly when t <= r.  The domain is non-convex for
    n >= 2; only its diagonal is in scope here.
    """
    r = as_rational(r)
    if r <= 0:
        raise ValueError("r must be positive")
    if n < 1:
        raise ValueError("n must be at least 1")
    return r


DirectionLike = Union[LatticeDirection, Sequence[RationalLike]]


def _direction_components(v: DirectionLike) -> tuple[Fraction, Fraction]:
    if isinstance(v, LatticeDirection):
        return Fraction(v.l), Fraction(v.m)
    vx, vy = as_rational(v[0]), as_rational(v[1])
    if vx < 0 or vy < 0:
        raise ZeroDirection("direction components must be non-negative")
    if vx == 0 and vy == 0:
        raise ZeroDirection("direction must be nonzero")
    return vx, vy


def support(domain: MomentDomain2D, v: DirectionLike) -> Fraction:
    """Exact maximum of <v, w> over the moment region, attained at a vertex."""
    vx, vy = _direction_components(v)
    return max(vx * x + vy * y for x, y in domain.vertices)


def included_in_ellipsoid(domain: MomentDomain2D, e: EllipsoidSpec) -> bool:
    """True iff every vertex (x, y) satisfies x/a + y/b <= 1.

    Vertex checks suffice: the constraint is a half-plane and the region
    is the convex hull of its vertices (plus the axis corners, which
    satisfy it automatically).  axes[0] is the x-intercept.
    """
    if e.dim != 2:
        raise ValueError("inclusion test requires a 4-dimensional ellipsoid")
    a, b = e.axes
    return all(x / a + y / b <= 1 for x, y in domain.vertices)


@dataclass(frozen=True)
class EnclosingEllipsoid:
    """One equal-diagonal enclosing ellipsoid, with the vertices that touch it."""

    x_axis: Fraction
    y_axis: Fraction
    touching_vertices: tuple[Point, ...]


@dataclass(frozen=True)
class EnclosureSearch:
    """Feasible x-intercepts a for equal-diagonal enclosing ellipsoids E(a, b(a)).

    The family is one-parameter: b(a) = a*d/(a - d) keeps the diagonal
    equal to d.  Inclusion of each polygon vertex is a linear constraint
    in a, so the feasible set is an exact interval.
    """

    diagonal: Fraction
    lower: Optional[Fraction]         # None when infeasible
    upper: Optional[Fraction]         # None means unbounded above
    lower_attained: bool
    pairs: tuple[EnclosingEllipsoid, ...]

    @property
    def feasible(self) -> bool:
        return self.lower is not None


def _paired_axis(a: Fraction, d: Fraction) -> Fraction:
    return a * d / (a - d)


def _touching(domain: MomentDomain2D, a: Fraction, b: Fraction) -> tuple[Point, ...]:
    return tuple((x, y) for x, y in domain.vertices if x / a + y / b == 1)


def equal_diagonal_enclosing_ellipsoids(
    domain: MomentDomain2D,
    grid: int = 16,
    a_max_factor: RationalLike = 10,
) -> EnclosureSearch:
    """All ellipsoids E(a, b) with X_Omega inside E and equal diagonals.

    Writing b = a*d/(a-d), each vertex (x, y) imposes a constraint linear
    in a, so the feasible a-set is computed exactly as an interval and no
    resolution is lost.  ``grid`` only controls how many interior sample
    pairs are reported in addition to the exact interval endpoints; the
    symmetric branch (x-intercept exceeding y-intercept) is part of the
    same parameter interval.
    """
    if grid < 1:
        raise ValueError("grid must be positive")
    d = diagonal(domain)
    a_max = d * as_rational(a_max_factor)
    if a_max <= d:
        raise ValueError("a_max_factor must exceed 1")

    # vertex (x, y) inside E(a, b(a))  <=>  a*(y - d) <= d*(y - x)
    lower = None  # in addition to the open bound a > d
    upper = None
    for x, y in domain.vertices:
        if y == d:
            if x > d:
                return EnclosureSearch(d, None, None, False, ())
            continue
        bound = d * (y - x) / (y - d)
        if y > d:
            upper = bound if upper is None else min(upper, bound)
        else:
            lower = bound if lower is None else max(lower, bound)

    lo = lower if (lower is not None and lower > d) else None  # None => infimum d, open
    hi = upper
    lo_eff = lo if lo is not None else d
    if hi is not None and hi < lo_eff:
        return EnclosureSearch(d, None, None, False, ())
    if hi is not None and hi <= d:
        return EnclosureSearch(d, None, None, False, ())

    hi_eff = min(hi, a_max) if hi is not None else a_max
    if hi_eff < lo_eff or (lo is None and hi_eff <= d):
        return EnclosureSearch(d, None, None, False, ())

    candidates: list[Fraction] = []
    if lo is not None:
        candidates.append(lo)
    if hi is not None and hi <= a_max:
        candidates.append(hi)
    else:
        candidates.append(a_max)  # truncation point of an unbounded interval
    symmetric = 2 * d  # the a = b member of the family
    if lo_eff <= symmetric <= hi_eff:
        candidates.append(symmetric)
    # geometric grid over the (possibly open) interval interior
    start = lo if lo is not None else d + (hi_eff - d) / (grid * 4)
    if start < hi_eff:
        log_lo, log_hi = math.log(float(start)), math.log(float(hi_eff))
        for i in range(1, grid):
            t = Fraction(round(math.exp(log_lo + (log_hi - log_lo) * i / grid) * 10**9), 10**9)
            if start <= t < hi_eff:
                candidates.append(t)

    pairs = []
    seen = set()
    for a in sorted(set(candidates)):
        if a <= d or a in seen:
            continue
        seen.add(a)
        b = _paired_axis(a, d)
        if all(x / a + y / b <= 1 for x, y in domain.vertices):
            pairs.append(EnclosingEllipsoid(a, b, _touching(domain, a, b)))

    return EnclosureSearch(
        diagonal=d,
        lower=lo if lo is not None else d,
        upper=hi,
        lower_attained=lo is not None,
        pairs=tuple(pairs),
    )


class DiagonalContact(Enum):
    """How the diagonal point (d, d) sits in the boundary intersection."""

    ISOLATED = "Isolated"
    SEGMENT = "Segment"
    NOT_ON_BOUNDARY = "NotOnBoundary"


def diagonal_intersection_isolated(domain: MomentDomain2D, e: EllipsoidSpec) -> DiagonalContact:
    """Classify (d, d) inside the intersection of the two boundaries.

    Precondition (PreconditionViolated otherwise): the domain is included
    in the ellipsoid and the diagonals agree.  Returns SEGMENT when an
    edge through (d, d) lies inside the tangent line x/a + y/b = 1,
    ISOLATED when every such edge crosses it transversally.
    """
    if e.dim != 2:
        raise PreconditionViolated("classification requires a 4-dimensional ellipsoid")
    if not included_in_ellipsoid(domain, e):
        raise PreconditionViolated("domain is not included in the ellipsoid")
    d = diagonal(domain)
    if d != diagonal(e):
        raise PreconditionViolated("diagonals differ")
    a, b = e.axes
    dd = (d, d)

    def on_segment(p: Point, q: Point, r: Point) -> bool:
        (x1, y1), (x2, y2), (x, y) = p, q, r
        cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
        if cross != 0:
            return False
        return min(x1, x2) <= x <= max(x1, x2) and min(y1, y2) <= y <= max(y1, y2)

    containing = [(p, q) for p, q in domain.edges() if on_segment(p, q, dd)]
    if not containing:
        return DiagonalContact.NOT_ON_BOUNDARY
    for (x1, y1), (x2, y2) in containing:
        direction_in_line = b * (x2 - x1) + a * (y2 - y1) == 0
        point_on_line = b * x1 + a * y1 == a * b
        if direction_in_line and point_on_line:
            return DiagonalContact.SEGMENT
    return DiagonalContact.ISOLATED


# ---------------------------------------------------------------------------
# JSON / CSV interchange


def domain_to_json(domain: Union[MomentDomain2D, EllipsoidSpec]) -> str:
    if isinstance(domain, MomentDomain2D):
        payload = {
            "type": "polygon",
            "vertices": [[format_rational(x), format_rational(y)] for x, y in domain.vertices],
        }
    else:
        payload = {"type": "ellipsoid", "axes": [format_rational(a) for a in domain.axes]}
    return json.dumps(payload)


def domain_from_json(text: str) -> Union[MomentDomain2D, EllipsoidSpec]:
    payload = json.loads(text)
    kind = payload.get("type")
    if kind == "polygon":
        return make_polygon_domain(payload["vertices"])
    if kind == "ellipsoid":
        return EllipsoidSpec(tuple(as_rational(a) for a in payload["axes"]))
    raise ValueError(f"unknown domain type {kind!r}")


def boundary_polyline_csv(domain: Union[MomentDomain2D, EllipsoidSpec], samples: int = 512) -> str:
    """Region outline as 'x,y' rows (floats) for external plotting."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["x", "y"])
    if isinstance(domain, EllipsoidSpec):
        if domain.dim != 2:
            raise ValueError("polyline output is for 4-dimensional domains")
        domain = domain.simplex_domain()
    pts: list[tuple[float, float]] = [(0.0, 0.0)]
    a = domain.x_extent
    n_inner = max(2, samples - 3)
    for i in range(n_inner + 1):
        x = a * i / n_inner
        pts.append((float(x), float(domain.boundary_value(x))))
    pts.append((float(a), 0.0))
    pts.append((0.0, 0.0))
    for x, y in pts:
        writer.writerow([f"{x:.12g}", f"{y:.12g}"])
    return buf.getvalue()
