"""Boundary rounding and the resulting Reeb orbit spectrum.

A moment polygon is replaced by a slightly larger smooth domain whose
boundary graph g is strictly decreasing and strictly concave, with a
nearly flat start (-v <= g'(0) < 0) and a steep finish (g'(x_max) < -1/v).
The closed-form construction is a shifted soft-minimum of the supporting
lines of the polygon plus two linear caps:

    g(x) = shift - tau * log( sum_i exp(-f_i(x) / tau) )

Soft-minimum of affine functions is smooth and strictly concave, lies
within tau*log(N) below the true minimum, and the shift is chosen large
enough to absorb both that gap and the caps' dips, so the polygon is
contained in the rounded domain with an explicit reported Hausdorff
bound.  Shallow edges are pre-tilted by a slope floor of order tau so
that g is strictly decreasing even for product domains, and domains whose
boundary ends in a vertical drop get a short horizontal extension so the
steep cap can clear the corner.

Every family of closed Reeb orbits on the rounded boundary sits over a
boundary point whose outward normal is a positive multiple of an integer
pair (l, m); its action equals the support value in that direction, its
multiplicity is gcd(l, m), and after the non-degenerate perturbation it
splits into an elliptic orbit of Conley-Zehnder index 2(l+m)+1 and a
hyperbolic one of index 2(l+m).  The perturbed actions are identified
with the unperturbed ones throughout.

SmoothDomain2D is immutable; the spectrum operations are pure functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .moment_domain import LatticeDirection, MomentDomain2D

_X_BISECT_TOL = 1e-12
_GOLDEN_TOL = 1e-10
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class SlopeConditionUnreachable(ValueError):
    """The requested (tau, v) cannot produce a valid rounded boundary."""


class AxisPoint(ValueError):
    """Rotation rates are undefined where a moment coordinate vanishes."""


@dataclass(frozen=True)
class _Line:
    """Affine function c + s*x."""

    c: float
    s: float

    def at(self, x: float) -> float:
        return self.c + self.s * x


@dataclass(frozen=True)
class SmoothDomain2D:
    """Rounded domain with evaluable boundary function and derivative."""

    source: MomentDomain2D
    tau: float
    v: float
    lines: tuple[_Line, ...]
    shift: float
    x_max: float
    hausdorff_bound: float

    def value(self, x: float) -> float:
        """g(x), evaluated with a stabilized log-sum-exp."""
        vals = [ln.at(x) for ln in self.lines]
        lowest = min(vals)
        total = sum(math.exp(-(val - lowest) / self.tau) for val in vals)
        return self.shift + lowest - self.tau * math.log(total)

    def derivative(self, x: float) -> float:
        """g'(x), a weighted average of the line slopes."""
        vals = [ln.at(x) for ln in self.lines]
        lowest = min(vals)
        weights = [math.exp(-(val - lowest) / self.tau) for val in vals]
        total = sum(weights)
        return sum(w * ln.s for w, ln in zip(weights, self.lines)) / total

    @property
    def b_prime(self) -> float:
        return self.value(0.0)


@dataclass(frozen=True)
class ReebOrbitFamily:
    """One S^1-family of closed orbits over the torus fiber at ``point``."""

    direction: LatticeDirection
    point: Optional[tuple[float, float]]  # None for axis families
    action: float
    multiplicity: int
    underlying_simple: LatticeDirection


@dataclass(frozen=True)
class OrbitSplit:
    """The elliptic/hyperbolic pair a family resolves into."""

    elliptic_cz: int
    hyperbolic_cz: int
    elliptic_action: float
    hyperbolic_action: float


def _edge_lines(domain: MomentDomain2D, slope_floor: float) -> tuple[list[_Line], float]:
    """Supporting lines of the boundary graph, with shallow slopes tilted
    down to ``-slope_floor`` about the edge's left endpoint.  Returns the
    lines and the largest amount any tilted line dips below the graph."""
    lines: list[_Line] = []
    worst_tilt_dip = 0.0
    a = float(domain.x_extent)
    for (x1, y1), (x2, y2) in domain.edges():
        if x2 == x1:
            continue  # final vertical drop, handled by the steep cap
        s = float((y2 - y1) / (x2 - x1))
        c = float(y1) - s * float(x1)
        if s > -slope_floor:
            s_t = -slope_floor
            c_t = float(y1) - s_t * float(x1)
            worst_tilt_dip = max(worst_tilt_dip, (s - s_t) * (a - float(x1)))
            lines.append(_Line(c_t, s_t))
        else:
            lines.append(_Line(c, s))
    return lines, worst_tilt_dip


def round_domain(domain: MomentDomain2D, tau: float, v: float) -> SmoothDomain2D:
    """Round a moment polygon at smoothing scale tau with slope bound v.

    Raises SlopeConditionUnreachable when the grid verification of the
    boundary invariants fails, which happens when v is too small (or tau
    too large) for the requested polygon.
    """
    if not (tau > 0.0):
        raise ValueError("tau must be positive")
    if not (0.0 < v < 1.0):
        raise SlopeConditionUnreachable("v must lie strictly between 0 and 1")

    a = float(domain.x_extent)
    b = float(domain.y_extent)
    f_end = float(domain.boundary_value(domain.x_extent))  # > 0 iff vertical drop

    slope_floor = tau / max(a, 1.0)
    if slope_floor >= v / 2.0:
        raise SlopeConditionUnreachable("tau too large relative to v for a slope floor")
    edge_lines, tilt_dip = _edge_lines(domain, slope_floor)

    steepest = max(abs(ln.s) for ln in edge_lines)
    s_cap1 = -max(2.0 / v, 2.0 * steepest)
    n_lines = len(edge_lines) + 2
    margin = tau * math.log(8.0 * n_lines * (abs(s_cap1) + 1.0) / v)

    first_slope = edge_lines[0].s
    s_cap0 = -v / 2.0 if first_slope < -v / 2.0 else first_slope
    cap0 = _Line(b - margin, s_cap0)

    if f_end > 0.0:
        x_max = a + (f_end + 2.0 * margin) / abs(s_cap1)
    else:
        x_max = a
    cap1 = _Line(-margin + abs(s_cap1) * x_max, s_cap1)

    lines = tuple(edge_lines + [cap0, cap1])

    # largest dip of any line below the graph; the gap is piecewise linear
    # in x, so checking the kinks is exact
    sample_xs = sorted({x for x, _ in domain.vertices} | {Fraction(0), domain.x_extent})
    max_dip = tilt_dip
    for x_frac in sample_xs:
        fx = float(domain.boundary_value(x_frac))
        lowest = min(ln.at(float(x_frac)) for ln in lines)
        max_dip = max(max_dip, fx - lowest)
    shift = tau * math.log(n_lines) + max_dip
    hausdorff = shift + (x_max - a)

    smooth = SmoothDomain2D(
        source=domain,
        tau=tau,
        v=v,
        lines=lines,
        shift=shift,
        x_max=x_max,
        hausdorff_bound=hausdorff,
    )
    _verify(smooth)
    return smooth


def _verify(smooth: SmoothDomain2D, grid: int = 1024) -> None:
    """Grid verification of the rounded-boundary invariants."""
    domain, tau, v = smooth.source, smooth.tau, smooth.v
    a = float(domain.x_extent)
    b = float(domain.y_extent)

    d0 = smooth.derivative(0.0)
    if not (-v <= d0 < 0.0):
        raise SlopeConditionUnreachable(f"g'(0) = {d0:.6g} is outside [-v, 0) for v = {v:.6g}")
    d1 = smooth.derivative(smooth.x_max)
    if not (d1 < -1.0 / v):
        raise SlopeConditionUnreachable(f"g'(x_max) = {d1:.6g} is not below -1/v = {-1.0 / v:.6g}")

    if abs(smooth.value(0.0) - b) > smooth.hausdorff_bound * (1.0 + 1e-9):
        raise SlopeConditionUnreachable("g(0) strays from b beyond the reported bound")
    g_end = smooth.value(smooth.x_max)
    if not (-1e-9 <= g_end <= smooth.hausdorff_bound * (1.0 + 1e-9)):
        raise SlopeConditionUnreachable("g(x_max) is not within the reported bound of 0")

    xs = [smooth.x_max * i / grid for i in range(grid + 1)]
    kink_xs = [float(x) for x, _ in domain.vertices]
    prev_slope = None
    for x in sorted(set(xs + kink_xs)):
        slope = smooth.derivative(x)
        if slope >= 0.0:
            raise SlopeConditionUnreachable("g is not strictly decreasing")
        if prev_slope is not None and slope > prev_slope + 1e-9 * (1.0 + abs(prev_slope)):
            raise SlopeConditionUnreachable("g' fails to be non-increasing on the grid")
        prev_slope = slope
        if x <= a:
            x_frac = min(Fraction(x).limit_denominator(10**15), domain.x_extent)
            if x_frac < 0:
                x_frac = Fraction(0)
            fx = float(domain.boundary_value(x_frac))
            gx = smooth.value(x)
            if gx < fx - 1e-9 * (1.0 + abs(fx)):
                raise SlopeConditionUnreachable("containment failed: g dips below the polygon boundary")
            if gx - fx > smooth.shift * (1.0 + 1e-9) + 1e-12:
                raise SlopeConditionUnreachable("vertical gap exceeds the reported bound")


def gauss_point(smooth: SmoothDomain2D, d: LatticeDirection) -> Optional[tuple[float, float]]:
    """Boundary point whose outward normal is parallel to (l, m).

    Solves g'(x) = -l/m by bisection (g' is strictly monotone).  Returns
    None for axis directions (l = 0 or m = 0, whose families live over
    the boundary axes) and when -l/m falls outside the slope range, which
    cannot happen for directions with v <= m/l and l/m <= 1/v.
    """
    if d.l == 0 or d.m == 0:
        return None
    target = -d.l / d.m
    if not (smooth.derivative(smooth.x_max) < target < smooth.derivative(0.0)):
        return None

    def bisect(keep_left) -> float:
        lo, hi = 0.0, smooth.x_max
        while hi - lo > _X_BISECT_TOL:
            mid = 0.5 * (lo + hi)
            if keep_left(smooth.derivative(mid)):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    # when the direction is normal to a flat stretch, g' sits at the target
    # over a plateau (up to float resolution); report its midpoint
    left = bisect(lambda s: s > target)
    right = bisect(lambda s: s >= target)
    x = 0.5 * (left + right)
    return (x, smooth.value(x))


def _rates_from(gauss_vec: tuple[float, float], w: tuple[float, float]) -> tuple[float, float]:
    denom = gauss_vec[0] * w[0] + gauss_vec[1] * w[1]
    factor = 2.0 * math.pi / denom
    return (factor * gauss_vec[0], factor * gauss_vec[1])


def reeb_angular_velocity(smooth: SmoothDomain2D, w: Sequence[float]) -> tuple[float, float]:
    """Angular rotation rates (radians per unit time) of the Reeb flow
    over the boundary point w = (x, g(x)); both coordinates must be positive."""
    x, y = float(w[0]), float(w[1])
    if x <= 0.0 or y <= 0.0:
        raise AxisPoint("rotation rates need both moment coordinates positive")
    if abs(y - smooth.value(x)) > 1e-9 * (1.0 + abs(y)):
        raise ValueError("w does not lie on the rounded boundary graph")
    slope = smooth.derivative(x)
    norm = math.hypot(slope, 1.0)
    gauss_vec = (-slope / norm, 1.0 / norm)
    return _rates_from(gauss_vec, (x, y))


def support_smooth(smooth: SmoothDomain2D, l: int, m: int) -> float:
    """max over the rounded region of l*x + m*g(x), by golden-section on
    the strictly concave objective (axis directions in closed form)."""
    if l < 0 or m < 0 or (l == 0 and m == 0):
        raise ValueError("direction must be nonzero with non-negative components")
    if m == 0:
        return l * smooth.x_max
    if l == 0:
        return m * smooth.value(0.0)

    def h(x: float) -> float:
        return l * x + m * smooth.value(x)

    lo, hi = 0.0, smooth.x_max
    tol = _GOLDEN_TOL * max(1.0, smooth.x_max)
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    hc, hd = h(c), h(d)
    while hi - lo > tol:
        if hc >= hd:
            hi, d, hd = d, c, hc
            c = hi - _INV_PHI * (hi - lo)
            hc = h(c)
        else:
            lo, c, hc = c, d, hd
            d = lo + _INV_PHI * (hi - lo)
            hd = h(d)
    xm = 0.5 * (lo + hi)
    return max(h(xm), h(0.0), h(smooth.x_max))


def orbit_families(smooth: SmoothDomain2D, cutoff: float) -> list[ReebOrbitFamily]:
    """All orbit families of action at most the cutoff.

    Interior families are enumerated over integer pairs (l, m) with both
    components positive; the search box is finite because the action is
    at least l*x* + m*y* for any interior point (x*, y*).  Axis families
    (l, 0) and (0, m) carry actions l*x_max and m*g(0).  Sorted by action,
    ties by (l, m).
    """
    if cutoff <= 0.0:
        raise ValueError("cutoff must be positive")
    families: list[ReebOrbitFamily] = []

    a_ext = smooth.x_max
    b_ext = smooth.value(0.0)
    l_axis = 1
    while l_axis * a_ext <= cutoff * (1.0 + 1e-12):
        families.append(
            ReebOrbitFamily(
                direction=LatticeDirection(l_axis, 0),
                point=None,
                action=l_axis * a_ext,
                multiplicity=l_axis,
                underlying_simple=LatticeDirection(1, 0),
            )
        )
        l_axis += 1
    m_axis = 1
    while m_axis * b_ext <= cutoff * (1.0 + 1e-12):
        families.append(
            ReebOrbitFamily(
                direction=LatticeDirection(0, m_axis),
                point=None,
                action=m_axis * b_ext,
                multiplicity=m_axis,
                underlying_simple=LatticeDirection(0, 1),
            )
        )
        m_axis += 1

    x_star = float(smooth.source.x_extent) / 2.0
    y_star = smooth.value(x_star)
    l_max = int(cutoff / x_star) + 1
    m_max = int(cutoff / y_star) + 1
    for l in range(1, l_max + 1):
        for m in range(1, m_max + 1):
            point = gauss_point(smooth, LatticeDirection(l, m))
            if point is None:
                continue
            action = l * point[0] + m * point[1]
            if action <= cutoff * (1.0 + 1e-12):
                g = math.gcd(l, m)
                families.append(
                    ReebOrbitFamily(
                        direction=LatticeDirection(l, m),
                        point=point,
                        action=action,
                        multiplicity=g,
                        underlying_simple=LatticeDirection(l // g, m // g),
                    )
                )
    families.sort(key=lambda fam: (fam.action, fam.direction.as_pair()))
    return families


def split_family(family: ReebOrbitFamily) -> OrbitSplit:
    """Resolve a family into its elliptic/hyperbolic orbit pair.

    Indices are 2(l+m)+1 and 2(l+m); the actions stay equal to the family
    action under the identification of perturbed and unperturbed actions.
    """
    total = family.direction.l + family.direction.m
    return OrbitSplit(
        elliptic_cz=2 * total + 1,
        hyperbolic_cz=2 * total,
        elliptic_action=family.action,
        hyperbolic_action=family.action,
    )


def capacity_via_spectrum(smooth: SmoothDomain2D, k: int) -> float:
    """Minimum action over directions summing to k, the spectral reading
    of the k-th capacity on the rounded domain."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return min(support_smooth(smooth, l, k - l) for l in range(k + 1))


def boundary_polyline(smooth: SmoothDomain2D, samples: int = 512) -> list[tuple[float, float]]:
    """Sampled rounded boundary graph, for plotting."""
    if samples < 2:
        raise ValueError("need at least two samples")
    return [
        (x, smooth.value(x))
        for x in (smooth.x_max * i / (samples - 1) for i in range(samples))
    ]


def flat_torus_geodesic_spectrum(
    n: int, lattice_lengths: Sequence[float], cutoff: float
) -> list[tuple[tuple[int, ...], float]]:
    """Closed geodesics of the flat n-torus with cell lengths L_i.

    Homotopy classes are nonzero integer vectors; the geodesic in class m
    has length ||(m_1 L_1, ..., m_n L_n)||_2 and flat-metric Morse index 0.
    Returns (class, length) pairs with length <= cutoff, sorted by length.
    """
    if n < 1 or len(lattice_lengths) != n:
        raise ValueError("need one positive length per dimension")
    lengths = [float(L) for L in lattice_lengths]
    if any(L <= 0.0 for L in lengths):
        raise ValueError("lattice lengths must be positive")
    if cutoff <= 0.0:
        return []
    bounds = [int(cutoff / L) for L in lengths]
    out: list[tuple[tuple[int, ...], float]] = []

    def rec(i: int, prefix: tuple[int, ...], partial_sq: float) -> None:
        if i == n:
            if any(prefix):
                length = math.sqrt(partial_sq)
                if length <= cutoff:
                    out.append((prefix, length))
            return
        for mi in range(-bounds[i], bounds[i] + 1):
            step = (mi * lengths[i]) ** 2
            if partial_sq + step <= cutoff * cutoff * (1.0 + 1e-12):
                rec(i + 1, prefix + (mi,), partial_sq + step)

    rec(0, (), 0.0)
    out.sort(key=lambda item: (item[1], item[0]))
    return out
