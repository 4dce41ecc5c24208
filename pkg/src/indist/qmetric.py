"""Quasi-metric spaces, graded indistinguishability, and [0,1] Heyting logic.

A quasi-metric space is a carrier of model terms plus a distance table whose
zero set must coincide with the indistinguishability relation (that is the
axiom that separates it from an ordinary metric space, where d = 0 forces
identity).  The axioms checked here:

    QM1  carrier is nonempty
    QM2  d is a total function into the reals (entries finite)
    QM3  d(a, b) >= 0
    QM4  d(a, b) = 0  iff  a and b are indistinguishable
    QM5  d(a, b) = d(b, a)
    QM6  d(a, c) <= d(a, b) + d(b, c)

plus the congruence that makes d a quasi-function: indistinguishable points
must sit at equal distance from everything.

A differentiation space restricts distances to [0, 1] so that

    r = 1 - d(a, b)

reads as the degree to which a and b are indistinguishable; r = 1 recovers
the two-valued relation.  Degrees compose under the Heyting operations of
the linearly ordered [0, 1] lattice (min, max, and the implication that is
1 when a <= b and b otherwise), under which double negation does not return
the starting value: the logic of degrees is intuitionistic, not classical.

``from_pid_table`` bridges interferometry into this picture: a symmetric
table of pairwise indistinguishability degrees between sources becomes a
candidate differentiation space with d = 1 - degree, and the axiom report
answers whether the physical numbers actually form one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .quasiset import (
    MICRO,
    Atom,
    AxiomReport,
    RelationFn,
    Universe,
    indist,
)

DEFAULT_TOL = 1e-12


class IncompleteTable(ValueError):
    """Distance table is missing an ordered carrier pair."""


class NotInCarrier(ValueError):
    """Term is not an element of the space's carrier."""


class AxiomsViolated(ValueError):
    """Operation requires a space whose axiom report is clean."""


class MalformedTable(ValueError):
    """Degree table is not square/symmetric/unit-diagonal/in-range."""


class OutOfRange(ValueError):
    """Heyting operand outside the [0, 1] interval."""


@dataclass(frozen=True)
class QuasiMetricSpace:
    """Carrier terms plus a distance table indexed by ordered pairs.

    The table may violate any of QM1-QM6; :func:`verify_qm_axioms` is the
    judge, not the constructor.
    """

    carrier: tuple[str, ...]
    distances: Mapping[tuple[str, str], float]

    def distance(self, a: str, b: str) -> float:
        if a not in self.carrier or b not in self.carrier:
            raise NotInCarrier(f"({a!r}, {b!r}) not in carrier")
        try:
            return self.distances[(a, b)]
        except KeyError:
            raise IncompleteTable(f"no distance entry for ({a!r}, {b!r})") from None


@dataclass(frozen=True)
class DifferentiationSpace:
    """Quasi-metric space with distances in [0, 1], plus its axiom audit."""

    base: QuasiMetricSpace
    universe: Universe
    axiom_reports: tuple[AxiomReport, ...] = field(default_factory=tuple)

    @property
    def axioms_hold(self) -> bool:
        return all(r.holds for r in self.axiom_reports)


def verify_qm_axioms(
    space: QuasiMetricSpace,
    universe: Universe,
    tol: float = DEFAULT_TOL,
    relation: Optional[RelationFn] = None,
) -> list[AxiomReport]:
    """Check QM1-QM6 and distance congruence, one report per axiom.

    ``relation`` defaults to the model's indistinguishability; swapping in
    uid equality turns QM4 into the ordinary metric-space axiom.  Numeric
    comparisons use ``tol``.  Raises IncompleteTable when an ordered pair
    has no entry.
    """
    rel = relation if relation is not None else indist
    carrier = space.carrier

    table: dict[tuple[str, str], float] = {}
    for a in carrier:
        for b in carrier:
            table[(a, b)] = space.distance(a, b)

    reports = [AxiomReport("QM1", len(carrier) > 0, None if carrier else ())]

    qm2 = AxiomReport("QM2", True)
    qm3 = AxiomReport("QM3", True)
    qm4 = AxiomReport("QM4", True)
    qm5 = AxiomReport("QM5", True)
    for a in carrier:
        for b in carrier:
            d = table[(a, b)]
            if qm2.holds and not math.isfinite(d):
                qm2 = AxiomReport("QM2", False, counterexample=(a, b))
            if qm3.holds and d < -tol:
                qm3 = AxiomReport("QM3", False, counterexample=(a, b))
            if qm4.holds and math.isfinite(d) and (abs(d) <= tol) != bool(rel(universe, a, b)):
                qm4 = AxiomReport("QM4", False, counterexample=(a, b))
            if qm5.holds and not (
                math.isfinite(d)
                and math.isfinite(table[(b, a)])
                and abs(d - table[(b, a)]) <= tol
            ):
                qm5 = AxiomReport("QM5", False, counterexample=(a, b))

    qm6 = AxiomReport("QM6", True)
    for a in carrier:
        for b in carrier:
            for c in carrier:
                if table[(a, c)] > table[(a, b)] + table[(b, c)] + tol:
                    qm6 = AxiomReport("QM6", False, counterexample=(a, b, c))
                    break
            if not qm6.holds:
                break
        if not qm6.holds:
            break

    congruence = AxiomReport("congruence", True)
    for a in carrier:
        for a2 in carrier:
            if a == a2 or not rel(universe, a, a2):
                continue
            for b in carrier:
                if abs(table[(a, b)] - table[(a2, b)]) > tol:
                    congruence = AxiomReport("congruence", False, counterexample=(a, a2, b))
                    break
            if not congruence.holds:
                break
        if not congruence.holds:
            break

    reports.extend([qm2, qm3, qm4, qm5, qm6, congruence])
    return reports


def differentiation_space(
    base: QuasiMetricSpace,
    universe: Universe,
    tol: float = DEFAULT_TOL,
) -> DifferentiationSpace:
    """Wrap a [0,1]-valued space together with its verified axiom reports."""
    for a in base.carrier:
        for b in base.carrier:
            d = base.distance(a, b)
            if math.isfinite(d) and not (-tol <= d <= 1.0 + tol):
                raise OutOfRange(f"distance d({a!r}, {b!r}) = {d!r} outside [0, 1]")
    reports = tuple(verify_qm_axioms(base, universe, tol=tol))
    return DifferentiationSpace(base=base, universe=universe, axiom_reports=reports)


def degree(space: DifferentiationSpace, a: str, b: str) -> float:
    """Degree of indistinguishability r = 1 - d(a, b), in [0, 1].

    Only meaningful on a space whose axiom report is clean; degree 1 is then
    equivalent to plain indistinguishability, and any other degree certifies
    the pair distinguishable.
    """
    if not space.axioms_hold:
        failing = [r.axiom for r in space.axiom_reports if not r.holds]
        raise AxiomsViolated(f"space violates {', '.join(failing)}")
    return 1.0 - space.base.distance(a, b)


def degree_relation_holds(space: DifferentiationSpace, a: str, b: str, r: float) -> bool:
    """Whether a and b are indistinguishable exactly to degree r."""
    return abs(r - degree(space, a, b)) <= DEFAULT_TOL


def degree_assignment(space: DifferentiationSpace) -> dict[tuple[str, str], float]:
    """The full pair -> degree table of the space."""
    carrier = space.base.carrier
    return {(a, b): degree(space, a, b) for a in carrier for b in carrier}


def from_pid_table(
    sources: Sequence[str],
    pid: Sequence[Sequence[float]],
    tol: float = DEFAULT_TOL,
) -> tuple[DifferentiationSpace, list[AxiomReport]]:
    """Build a differentiation space from pairwise indistinguishability degrees.

    ``pid`` must be symmetric with unit diagonal and values in [0, 1];
    distances are d = 1 - pid.  Each source is assigned to a species by the
    transitive closure of the zero-distance pairs, so species equality can
    only match d = 0 when those pairs already form an equivalence; a
    "zero-transitivity" report (with a witnessing chain) plus the QM axiom
    reports convey any failure.  Nothing beyond table shape raises: whether
    physical degree tables form such spaces is exactly the question the
    report answers.
    """
    names = list(sources)
    n = len(names)
    if n == 0:
        raise MalformedTable("no sources")
    if len(set(names)) != n:
        raise MalformedTable("duplicate source names")
    if len(pid) != n or any(len(row) != n for row in pid):
        raise MalformedTable(f"table must be {n}x{n}")
    for i in range(n):
        for j in range(n):
            v = float(pid[i][j])
            if not math.isfinite(v) or v < -tol or v > 1.0 + tol:
                raise MalformedTable(f"value {v!r} at ({i}, {j}) outside [0, 1]")
            if abs(v - pid[j][i]) > tol:
                raise MalformedTable(f"asymmetry at ({i}, {j})")
        if abs(pid[i][i] - 1.0) > tol:
            raise MalformedTable(f"diagonal entry {pid[i][i]!r} at ({i}, {i}) is not 1")

    distances = {
        (names[i], names[j]): 1.0 - float(pid[i][j]) for i in range(n) for j in range(n)
    }

    # Species = connected components of the zero-distance graph.
    parent = {name: name for name in names}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    adjacency: dict[str, list[str]] = {name: [] for name in names}
    for i in range(n):
        for j in range(i + 1, n):
            if distances[(names[i], names[j])] <= tol:
                adjacency[names[i]].append(names[j])
                adjacency[names[j]].append(names[i])
                ra, rb = find(names[i]), find(names[j])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    species_of = {name: find(name) for name in names}
    zero_report = _zero_transitivity_report(names, distances, adjacency, species_of, tol)

    universe = Universe(
        species=sorted(set(species_of.values())),
        atoms=[Atom(name, MICRO, species_of[name]) for name in names],
    )
    base = QuasiMetricSpace(carrier=tuple(names), distances=distances)
    space = differentiation_space(base, universe, tol=tol)
    return space, [zero_report] + list(space.axiom_reports)


def _zero_transitivity_report(
    names: Sequence[str],
    distances: Mapping[tuple[str, str], float],
    adjacency: Mapping[str, Sequence[str]],
    species_of: Mapping[str, str],
    tol: float,
) -> AxiomReport:
    # A witness is a zero-distance chain whose endpoints are a positive
    # distance apart; replaying the chain against the table re-derives it.
    for a in names:
        for b in names:
            if a < b and species_of[a] == species_of[b] and distances[(a, b)] > tol:
                return AxiomReport(
                    "zero-transitivity", False, counterexample=_zero_path(adjacency, a, b)
                )
    return AxiomReport("zero-transitivity", True)


def _zero_path(adjacency: Mapping[str, Sequence[str]], start: str, goal: str) -> tuple:
    seen = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        if node == goal:
            path = []
            trace: Optional[str] = node
            while trace is not None:
                path.append(trace)
                trace = seen[trace]
            return tuple(reversed(path))
        for nxt in sorted(adjacency[node]):
            if nxt not in seen:
                seen[nxt] = node
                queue.append(nxt)
    return (start, goal)


# -- Heyting operations on the [0, 1] chain ---------------------------------

def _check_unit(*values: float) -> None:
    for v in values:
        if not (math.isfinite(v) and 0.0 <= v <= 1.0):
            raise OutOfRange(f"value {v!r} outside [0, 1]")


def heyting_meet(a: float, b: float) -> float:
    _check_unit(a, b)
    return min(a, b)


def heyting_join(a: float, b: float) -> float:
    _check_unit(a, b)
    return max(a, b)


def heyting_implies(a: float, b: float) -> float:
    """Relative pseudo-complement of the linear order: 1 if a <= b, else b."""
    _check_unit(a, b)
    return 1.0 if a <= b else b


def heyting_not(a: float) -> float:
    """Pseudo-complement, i.e. a => 0.  Not an involution: ~~0.5 = 1."""
    return heyting_implies(a, 0.0)


def identity_semantic_value(space: DifferentiationSpace, a: str, b: str) -> float:
    """Semantic value of the identity statement "a = b" in the [0,1] algebra.

    The value is the pair's degree of indistinguishability; composite
    formulas over such atomic identities evaluate with the Heyting
    operations.
    """
    return degree(space, a, b)
