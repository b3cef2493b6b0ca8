"""Integer and rational bookkeeping for punctured spheres and buildings.

Everything here is an identity, not an estimate: Fredholm indices of
constrained punctured spheres, the Conley-Zehnder/Morse conversion in the
zero-Maslov trivialization, the forced-structure solvers (minimal numbers
of positive punctures, forced Morse indices, forced energy partitions),
and a structural validator for two-level genus-zero buildings.  All
arithmetic is exact; no floats.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .moment_domain import RationalLike, as_rational, format_rational


class NotSupported(ValueError):
    """Conversion requested outside the zero-Maslov trivialization."""


class NegativePunctureUnsupported(ValueError):
    """The closed-form index is implemented for all-positive punctures only."""


class EpsilonTooLarge(ValueError):
    """The partition conclusion requires epsilon < 1/n."""


def cz_from_morse(morse: int, adjust_to_zero_maslov: bool = True) -> int:
    """Conley-Zehnder index of the orbit over a closed geodesic of the
    given Morse index, in the trivialization adjusted so the Maslov term
    vanishes (where the two indices agree)."""
    if morse < 0:
        raise ValueError("Morse index must be non-negative")
    if not adjust_to_zero_maslov:
        raise NotSupported("only the zero-Maslov trivialization is supported")
    return morse


@dataclass(frozen=True)
class SpherePuncture:
    cz: int
    action: Fraction
    sign: str  # 'positive' | 'negative'

    def __post_init__(self):
        if self.sign not in ("positive", "negative"):
            raise ValueError("puncture sign must be 'positive' or 'negative'")
        object.__setattr__(self, "action", as_rational(self.action))


@dataclass(frozen=True)
class PuncturedSphereData:
    """A punctured sphere in the cotangent level with a point constraint
    of contact order tangency_order + 1."""

    n: int
    punctures: tuple[SpherePuncture, ...]
    tangency_order: int = 0
    maslov_sum_zero: bool = True

    def __post_init__(self):
        if not self.punctures:
            raise ValueError("nonconstant curves carry at least one puncture")
        if self.tangency_order < 0:
            raise ValueError("tangency order must be non-negative")


def sphere_data(n: int, cz_list: Sequence[int], tangency_order: int = 0) -> PuncturedSphereData:
    """Convenience constructor: all-positive punctures with the given CZ values."""
    return PuncturedSphereData(
        n=n,
        punctures=tuple(SpherePuncture(cz=c, action=Fraction(1), sign="positive") for c in cz_list),
        tangency_order=tangency_order,
    )


def punctured_sphere_index(data: PuncturedSphereData) -> int:
    """Fredholm index of a genus-zero curve with l positive punctures and
    a point constraint of contact order k = tangency_order + 1:

        (n - 3)(2 - l) + sum CZ - 2n + 2 - 2 * tangency_order
    """
    if any(p.sign == "negative" for p in data.punctures):
        raise NegativePunctureUnsupported("this closed form covers positive punctures only")
    l = len(data.punctures)
    cz_sum = sum(p.cz for p in data.punctures)
    return (data.n - 3) * (2 - l) + cz_sum - 2 * data.n + 2 - 2 * data.tangency_order


def min_positive_punctures(n: int, tangency_order: int, morse_bound: int) -> int:
    """Smallest number of positive punctures admitting a non-negative index.

    The index is increasing in each CZ entry, so the best assignment is
    all entries equal to the Morse bound; under the usual hypotheses the
    answer is tangency_order + 2, i.e. k + 1 for contact order k.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if tangency_order < 0 or morse_bound < 0:
        raise ValueError("tangency order and Morse bound must be non-negative")
    l = 1
    while True:
        best = punctured_sphere_index(sphere_data(n, [morse_bound] * l, tangency_order))
        if best >= 0:
            return l
        l += 1


def forced_morse_indices(n: int) -> list[int]:
    """The unique (n+1)-tuple of Morse indices in [0, n-1] whose sum meets
    the index bound n^2 - 1, found by exhaustive search with sound
    pruning (a prefix is abandoned once even all-maximal completions fall
    short).  The answer is all entries equal to n - 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    slots, cap, target = n + 1, n - 1, n * n - 1
    solutions: list[tuple[int, ...]] = []

    def search(prefix: tuple[int, ...], total: int) -> None:
        remaining = slots - len(prefix)
        if total + remaining * cap < target:
            return
        if remaining == 0:
            if total >= target:
                solutions.append(prefix)
            return
        for value in range(cap + 1):
            search(prefix + (value,), total + value)

    search((), 0)
    if len(solutions) != 1:
        raise AssertionError("the index bound must force a unique tuple")  # pragma: no cover
    return list(solutions[0])


@dataclass(frozen=True)
class PartitionReport:
    valid: bool
    violations: tuple[str, ...]


def energy_partition_check(
    n: int, epsilon: RationalLike, areas: Sequence[RationalLike]
) -> PartitionReport:
    """Check the forced partition: first n areas equal 1/n, last equals
    epsilon.  Requires epsilon < 1/n (EpsilonTooLarge otherwise)."""
    if n < 1:
        raise ValueError("n must be positive")
    eps = as_rational(epsilon)
    if eps >= Fraction(1, n):
        raise EpsilonTooLarge(f"epsilon must be below 1/{n}")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    vals = [as_rational(x) for x in areas]
    violations: list[str] = []
    if len(vals) != n + 1:
        violations.append(f"expected {n + 1} areas, got {len(vals)}")
        return PartitionReport(False, tuple(violations))
    for i, x in enumerate(vals):
        if x <= 0:
            violations.append(f"area {i} is not positive ({format_rational(x)})")
    share = Fraction(1, n)
    for i, x in enumerate(vals[:-1]):
        if x != share:
            violations.append(f"area {i} is {format_rational(x)}, expected {format_rational(share)}")
    if vals[-1] != eps:
        violations.append(
            f"final area is {format_rational(vals[-1])}, expected epsilon = {format_rational(eps)}"
        )
    return PartitionReport(not violations, tuple(violations))


def energy_partition_solve(n: int, epsilon: RationalLike) -> list[tuple[Fraction, ...]]:
    """All candidate partitions under the constraints alone: n areas in
    {1/n, 2/n, ...}, a final positive area, total 1 + epsilon.

    Partitions are returned as non-increasing multiple lists plus the
    final area.  Exactly one candidate exists when epsilon < 1/n; larger
    epsilon may admit more, which is the point of the hypothesis, so no
    epsilon cap is imposed here.
    """
    if n < 1:
        raise ValueError("n must be positive")
    eps = as_rational(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    total = 1 + eps
    # the n multiples m_i >= 1 must satisfy sum(m_i)/n < 1 + eps
    results: list[tuple[Fraction, ...]] = []

    def partitions(remaining: int, parts: int, bound: int, prefix: tuple[int, ...]) -> None:
        if parts == 0:
            if remaining == 0:
                last = total - Fraction(sum(prefix), n)
                if last > 0:
                    results.append(tuple(Fraction(m, n) for m in prefix) + (last,))
            return
        for m in range(min(bound, remaining - (parts - 1)), 0, -1):
            partitions(remaining - m, parts - 1, m, prefix + (m,))

    s = n
    while Fraction(s, n) < total:
        partitions(s, n, s, ())
        s += 1
    results.sort()
    return results


# ---------------------------------------------------------------------------
# Holomorphic buildings


@dataclass(frozen=True)
class Puncture:
    cz: int
    action: Fraction
    sign: str  # 'positive' | 'negative'
    paired_with: Optional[tuple[str, int]] = None  # (node id, puncture index)

    def __post_init__(self):
        if self.sign not in ("positive", "negative"):
            raise ValueError("puncture sign must be 'positive' or 'negative'")
        object.__setattr__(self, "action", as_rational(self.action))


@dataclass(frozen=True)
class CurveNode:
    id: str
    level: int
    kind: str  # 'cotangent' | 'symplectization' | 'top'
    index: int
    energy: Fraction
    punctures: tuple[Puncture, ...]
    divisor_hits: int = 0

    def __post_init__(self):
        if self.kind not in ("cotangent", "symplectization", "top"):
            raise ValueError(f"unknown node kind {self.kind!r}")
        object.__setattr__(self, "energy", as_rational(self.energy))

    def is_trivial_cylinder(self) -> bool:
        """Index 0, energy 0, one positive and one negative puncture on
        identical orbit data."""
        if self.index != 0 or self.energy != 0 or len(self.punctures) != 2:
            return False
        pos = [p for p in self.punctures if p.sign == "positive"]
        neg = [p for p in self.punctures if p.sign == "negative"]
        if len(pos) != 1 or len(neg) != 1:
            return False
        return pos[0].cz == neg[0].cz and pos[0].action == neg[0].action


@dataclass(frozen=True)
class Building:
    """Genus-zero leveled tree of curve nodes.

    Node energies are inputs; the validator checks pairings, index and
    energy totals, and structural constraints, never the decomposition of
    a single curve's energy across its ends.
    """

    nodes: tuple[CurveNode, ...]
    total_index: int = 0
    energy_budget: Optional[Fraction] = None

    def __post_init__(self):
        if self.energy_budget is not None:
            object.__setattr__(self, "energy_budget", as_rational(self.energy_budget))

    def node(self, node_id: str) -> CurveNode:
        for nd in self.nodes:
            if nd.id == node_id:
                return nd
        raise KeyError(node_id)


@dataclass(frozen=True)
class CheckResult:
    check: str
    status: str  # 'pass' | 'fail'
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    results: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def failed(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "fail"]


def building_validate(b: Building, check_unpaired_parity: bool = False) -> ValidationReport:
    """Run the structural checks; every violation lands in the report
    rather than raising.

    Checks: (tree) the pairing graph is a connected tree; (pairing)
    paired punctures are mutual, oppositely signed, one level apart, and
    agree in CZ and action; (index-total) node indices sum to the
    declared total; (energy-positivity) energies are non-negative and
    positive except on trivial cylinders, which carry exactly zero;
    (energy-budget) energies sum to at most the declared budget;
    (divisor-budget) at most one divisor hit across top nodes;
    (stability) no symplectization level is made of trivial cylinders
    only; (levels) occupied levels are contiguous.  With
    check_unpaired_parity, unpaired ends must carry odd CZ (elliptic
    asymptotics).
    """
    results: list[CheckResult] = []
    ids = [nd.id for nd in b.nodes]

    def add(check: str, ok: bool, detail: str = "") -> None:
        results.append(CheckResult(check, "pass" if ok else "fail", detail))

    if len(set(ids)) != len(ids) or not b.nodes:
        add("structure", False, "node ids must be unique and nonempty")
        return ValidationReport(tuple(results))
    add("structure", True)

    # pairing consistency
    pairing_ok, pairing_detail = True, ""
    edges: set[frozenset[str]] = set()
    for nd in b.nodes:
        for i, p in enumerate(nd.punctures):
            if p.paired_with is None:
                continue
            other_id, j = p.paired_with
            try:
                other = b.node(other_id)
                q = other.punctures[j]
            except (KeyError, IndexError):
                pairing_ok, pairing_detail = False, f"{nd.id}[{i}] points at a missing puncture"
                break
            if q.paired_with != (nd.id, i):
                pairing_ok, pairing_detail = False, f"{nd.id}[{i}] is not reciprocally paired"
                break
            if q.sign == p.sign:
                pairing_ok, pairing_detail = False, f"{nd.id}[{i}] pairs equal signs"
                break
            upper = nd if p.sign == "negative" else other
            lower = other if p.sign == "negative" else nd
            if upper.level != lower.level + 1:
                pairing_ok, pairing_detail = (
                    False,
                    f"{lower.id} (level {lower.level}) must pair one level below {upper.id} (level {upper.level})",
                )
                break
            if q.cz != p.cz or q.action != p.action:
                pairing_ok, pairing_detail = False, f"{nd.id}[{i}] pairs mismatched orbit data"
                break
            edges.add(frozenset((nd.id, other_id)))
        if not pairing_ok:
            break
    add("pairing", pairing_ok, pairing_detail)

    # genus zero: the node/edge graph is a tree
    adjacency: dict[str, set[str]] = {i: set() for i in ids}
    for e in edges:
        u, w = tuple(e)
        adjacency[u].add(w)
        adjacency[w].add(u)
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        for nb in adjacency[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    connected = len(seen) == len(ids)
    is_tree = connected and len(edges) == len(ids) - 1
    add(
        "tree",
        is_tree,
        "" if is_tree else f"{len(ids)} nodes, {len(edges)} pairing edges, connected={connected}",
    )

    total = sum(nd.index for nd in b.nodes)
    add("index-total", total == b.total_index, f"sum of indices is {total}, declared {b.total_index}")

    energy_ok, energy_detail = True, ""
    for nd in b.nodes:
        if nd.energy < 0:
            energy_ok, energy_detail = False, f"{nd.id} has negative energy"
            break
        if nd.is_trivial_cylinder():
            continue
        if nd.energy == 0:
            energy_ok, energy_detail = False, f"{nd.id} is nonconstant but has zero energy"
            break
    add("energy-positivity", energy_ok, energy_detail)

    if b.energy_budget is not None:
        total_energy = sum((nd.energy for nd in b.nodes), Fraction(0))
        add(
            "energy-budget",
            total_energy <= b.energy_budget,
            f"total {format_rational(total_energy)} vs budget {format_rational(b.energy_budget)}",
        )

    hits = sum(nd.divisor_hits for nd in b.nodes if nd.kind == "top")
    add("divisor-budget", hits <= 1 and all(nd.divisor_hits >= 0 for nd in b.nodes), f"{hits} hits across top nodes")

    levels = sorted({nd.level for nd in b.nodes})
    contiguous = levels == list(range(levels[0], levels[-1] + 1))
    add("levels", contiguous, f"occupied levels {levels}")

    stability_ok, stability_detail = True, ""
    for level in levels:
        at_level = [nd for nd in b.nodes if nd.level == level]
        if all(nd.kind == "symplectization" for nd in at_level) and all(
            nd.is_trivial_cylinder() for nd in at_level
        ):
            stability_ok, stability_detail = (
                False,
                f"level {level} consists solely of trivial cylinders",
            )
            break
    add("stability", stability_ok, stability_detail)

    if check_unpaired_parity:
        parity_ok, parity_detail = True, ""
        for nd in b.nodes:
            for i, p in enumerate(nd.punctures):
                if p.paired_with is None and p.cz % 2 == 0:
                    parity_ok, parity_detail = False, f"unpaired end {nd.id}[{i}] has even CZ {p.cz}"
        add("unpaired-parity", parity_ok, parity_detail)

    return ValidationReport(tuple(results))


def canonical_ball_building(n: int, epsilon: RationalLike) -> Building:
    """The forced two-level building for the unit-ball argument.

    Bottom level: one sphere with n+1 positive punctures of CZ n-1 and a
    maximal point constraint, index 0.  Top level: n planes of energy 1/n
    on orbits of action 1/n, plus one plane of energy epsilon on an orbit
    of action 1 that carries the single divisor hit.  All indices vanish
    and the declared budget is the exact energy total.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    eps = as_rational(epsilon)
    if not (0 < eps < Fraction(1, n)):
        raise EpsilonTooLarge(f"epsilon must lie in (0, 1/{n})")
    cz = n - 1
    share = Fraction(1, n)
    bottom_punctures = []
    planes = []
    for i in range(n):
        bottom_punctures.append(
            Puncture(cz=cz, action=share, sign="positive", paired_with=(f"plane_{i}", 0))
        )
        planes.append(
            CurveNode(
                id=f"plane_{i}",
                level=1,
                kind="top",
                index=0,
                energy=share,
                punctures=(Puncture(cz=cz, action=share, sign="negative", paired_with=("bottom", i)),),
            )
        )
    bottom_punctures.append(
        Puncture(cz=cz, action=Fraction(1), sign="positive", paired_with=("plane_last", 0))
    )
    planes.append(
        CurveNode(
            id="plane_last",
            level=1,
            kind="top",
            index=0,
            energy=eps,
            punctures=(Puncture(cz=cz, action=Fraction(1), sign="negative", paired_with=("bottom", n)),),
            divisor_hits=1,
        )
    )
    bottom = CurveNode(
        id="bottom",
        level=0,
        kind="cotangent",
        index=0,
        energy=Fraction(1) + share * n,  # sum of its positive-end actions
        punctures=tuple(bottom_punctures),
    )
    nodes = (bottom, *planes)
    budget = sum((nd.energy for nd in nodes), Fraction(0))
    return Building(nodes=nodes, total_index=0, energy_budget=budget)


# ---------------------------------------------------------------------------
# JSON interchange


def building_to_json(b: Building) -> str:
    payload = {
        "nodes": [
            {
                "id": nd.id,
                "level": nd.level,
                "kind": nd.kind,
                "index": nd.index,
                "energy": format_rational(nd.energy),
                "punctures": [
                    {
                        "cz": p.cz,
                        "action": format_rational(p.action),
                        "sign": p.sign,
                        "paired_with": list(p.paired_with) if p.paired_with else None,
                    }
                    for p in nd.punctures
                ],
                "divisor_hits": nd.divisor_hits,
            }
            for nd in b.nodes
        ],
        "total_index": b.total_index,
        "energy_budget": format_rational(b.energy_budget) if b.energy_budget is not None else None,
    }
    return json.dumps(payload, indent=2)


def building_from_json(text: str) -> Building:
    payload = json.loads(text)
    nodes = []
    for nd in payload["nodes"]:
        punctures = tuple(
            Puncture(
                cz=int(p["cz"]),
                action=as_rational(p["action"]),
                sign=p["sign"],
                paired_with=tuple(p["paired_with"]) if p.get("paired_with") else None,
            )
            for p in nd.get("punctures", [])
        )
        nodes.append(
            CurveNode(
                id=nd["id"],
                level=int(nd["level"]),
                kind=nd["kind"],
                index=int(nd["index"]),
                energy=as_rational(nd["energy"]),
                punctures=punctures,
                divisor_hits=int(nd.get("divisor_hits", 0)),
            )
        )
    budget = payload.get("energy_budget")
    return Building(
        nodes=tuple(nodes),
        total_index=int(payload.get("total_index", 0)),
        energy_budget=as_rational(budget) if budget is not None else None,
    )


def report_to_json(report: ValidationReport) -> str:
    return json.dumps(
        [{"check": r.check, "status": r.status, "detail": r.detail} for r in report.results],
        indent=2,
    )
