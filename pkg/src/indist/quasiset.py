"""Finite models of a set theory with primitive indistinguishability.

Terms of a :class:`Universe` are micro-atoms (which carry a species but no
observable identity), macro-atoms (ordinary individuals), and qsets (finite
collections given by the names of their members).  Two relations drive
everything:

* ``indist`` (the primitive ``x == y``-replacement): micro-atoms of the same
  species are indistinguishable; macro-atoms are indistinguishable exactly
  when they are extensionally identical; qsets are indistinguishable when
  they contain the same quantities of each indistinguishable kind of
  element, computed hereditarily (weak extensionality).
* ``ext_identity`` (the defined, stricter relation): qsets with the same
  members, or macro-atoms belonging to exactly the same qsets of the
  universe.  Micro-atoms are never extensionally identical to anything,
  which is the point of having them.

Every atom and qset carries a uid so that a computer can store the model.
No observational operation lets a micro-atom's uid leak into a boolean or a
count; the test suite checks this by relabeling uids and comparing results.

Anywhere a "term" is expected, a string names an atom or qset registered in
the universe, and a set/frozenset of such names denotes an anonymous qset of
those members (handy for derived collections such as ``x - z1``).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Union

MICRO = "micro"
MACRO = "macro"

Term = Union[str, frozenset, set]


class UnknownTerm(ValueError):
    """Name does not refer to any atom or qset of the universe."""


class NotAQset(ValueError):
    """Operation needs a qset but was handed an atom."""


class EmptyClass(ValueError):
    """No indistinguishable partner exists to choose from."""


class NotSingleton(ValueError):
    """Operation needs a one-element qset."""


class PreconditionViolated(ValueError):
    """A theorem hypothesis does not hold for the given instance."""


class MalformedUniverse(ValueError):
    """Universe description is internally inconsistent."""


@dataclass(frozen=True)
class Atom:
    """Atomic term: kind is exactly one of micro/macro, species micro-only."""

    uid: str
    kind: str
    species: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in (MICRO, MACRO):
            raise MalformedUniverse(f"atom {self.uid!r} has unknown kind {self.kind!r}")
        if self.kind == MICRO and self.species is None:
            raise MalformedUniverse(f"micro-atom {self.uid!r} needs a species")
        if self.kind == MACRO and self.species is not None:
            raise MalformedUniverse(f"macro-atom {self.uid!r} must not carry a species")


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of one checked axiom or theorem instance.

    ``holds`` false comes with a counterexample tuple that can be replayed
    against the same universe to re-derive the failure.
    """

    axiom: str
    holds: bool
    counterexample: Optional[tuple] = None


class Universe:
    """Immutable finite model: species registry, atoms, and named qsets.

    ``qsets`` maps a name to the collection of member names; members may be
    atoms or previously meaningful qsets, but cycles are rejected.
    """

    def __init__(
        self,
        species: Iterable[str] = (),
        atoms: Iterable[Atom] = (),
        qsets: Optional[Mapping[str, Iterable[str]]] = None,
    ) -> None:
        self.species = frozenset(species)
        self.atoms: dict[str, Atom] = {}
        for atom in atoms:
            if atom.uid in self.atoms:
                raise MalformedUniverse(f"duplicate atom uid {atom.uid!r}")
            if atom.kind == MICRO and atom.species not in self.species:
                raise MalformedUniverse(
                    f"micro-atom {atom.uid!r} has unregistered species {atom.species!r}"
                )
            self.atoms[atom.uid] = atom

        self.qsets: dict[str, frozenset[str]] = {}
        if qsets:
            for name, members in qsets.items():
                if name in self.atoms or name in self.qsets:
                    raise MalformedUniverse(f"duplicate term name {name!r}")
                self.qsets[name] = frozenset(members)
        for name, members in self.qsets.items():
            for m in members:
                if m not in self.atoms and m not in self.qsets:
                    raise MalformedUniverse(f"qset {name!r} references unknown term {m!r}")
        self._check_acyclic()

        self._macro_fingerprint: dict[str, frozenset[str]] = {}
        self._macro_rep: dict[str, str] = {}
        self._index_macros()

        self._sig: dict[str, tuple] = {}
        for name in list(self.atoms) + list(self.qsets):
            self._signature_of(name)

    def _check_acyclic(self) -> None:
        state: dict[str, int] = {}  # 1 visiting, 2 done

        def visit(name: str) -> None:
            if state.get(name) == 2 or name in self.atoms:
                return
            if state.get(name) == 1:
                raise MalformedUniverse(f"qset {name!r} contains itself (directly or transitively)")
            state[name] = 1
            for m in self.qsets[name]:
                visit(m)
            state[name] = 2

        for name in self.qsets:
            visit(name)

    def _index_macros(self) -> None:
        # Macro-atoms sharing exactly the same memberships are extensionally
        # identical; they share one canonical representative so that
        # indistinguishability never separates an ext-identical pair.
        by_fingerprint: dict[frozenset[str], list[str]] = {}
        for uid, atom in self.atoms.items():
            if atom.kind != MACRO:
                continue
            fp = frozenset(name for name, members in self.qsets.items() if uid in members)
            self._macro_fingerprint[uid] = fp
            by_fingerprint.setdefault(fp, []).append(uid)
        for group in by_fingerprint.values():
            rep = min(group)
            for uid in group:
                self._macro_rep[uid] = rep

    def _signature_of(self, name: str) -> tuple:
        cached = self._sig.get(name)
        if cached is not None:
            return cached
        atom = self.atoms.get(name)
        if atom is not None:
            if atom.kind == MICRO:
                sig = ("m", atom.species)
            else:
                sig = ("M", self._macro_rep[name])
        else:
            sig = self._collection_signature(self.qsets[name])
        self._sig[name] = sig
        return sig

    def _collection_signature(self, members: frozenset[str]) -> tuple:
        counts = Counter(self._signature_of(m) for m in members)
        return ("q", tuple(sorted(counts.items())))

    # -- lookups ------------------------------------------------------------

    def __contains__(self, name: str) -> bool:
        return name in self.atoms or name in self.qsets

    def terms(self) -> tuple[str, ...]:
        """All term names, atoms then qsets, in sorted order."""
        return tuple(sorted(self.atoms)) + tuple(sorted(self.qsets))

    def is_atom(self, name: str) -> bool:
        return name in self.atoms

    def is_micro(self, name: str) -> bool:
        a = self.atoms.get(name)
        return a is not None and a.kind == MICRO

    def is_macro(self, name: str) -> bool:
        a = self.atoms.get(name)
        return a is not None and a.kind == MACRO

    def is_qset(self, name: str) -> bool:
        return name in self.qsets

    def macro_fingerprint(self, uid: str) -> frozenset[str]:
        return self._macro_fingerprint[uid]


def _members(u: Universe, x: Term) -> frozenset[str]:
    """Member names of a qset term (named or anonymous)."""
    if isinstance(x, str):
        if x in u.qsets:
            return u.qsets[x]
        if x in u.atoms:
            raise NotAQset(f"{x!r} is an atom, not a qset")
        raise UnknownTerm(f"unknown term {x!r}")
    ms = frozenset(x)
    for m in ms:
        if not isinstance(m, str) or m not in u:
            raise UnknownTerm(f"unknown term {m!r} in anonymous qset")
    return ms


def _is_qset_like(u: Universe, x: Term) -> bool:
    return not isinstance(x, str) or x in u.qsets


def _signature(u: Universe, x: Term) -> tuple:
    if isinstance(x, str):
        if x not in u:
            raise UnknownTerm(f"unknown term {x!r}")
        return u._signature_of(x)
    return u._collection_signature(_members(u, x))


def indist(u: Universe, x: Term, y: Term) -> bool:
    """The primitive indistinguishability relation of the model.

    Same-species micro-atoms, ext-identical macro-atoms, and qsets with equal
    hereditary species-count signatures are indistinguishable; a qset is
    never indistinguishable from an atom.
    """
    return _signature(u, x) == _signature(u, y)


def ext_identity(u: Universe, x: Term, y: Term) -> bool:
    """Extensional identity: same members (qsets) or same memberships (macros).

    Micro-atoms are never extensionally identical to anything, themselves
    included.
    """
    x_qset = _is_qset_like(u, x)
    y_qset = _is_qset_like(u, y)
    if x_qset and y_qset:
        return _members(u, x) == _members(u, y)
    if x_qset or y_qset:
        return False
    # both atom names
    for name in (x, y):
        if name not in u:
            raise UnknownTerm(f"unknown term {name!r}")
    if u.is_macro(x) and u.is_macro(y):
        return u.macro_fingerprint(x) == u.macro_fingerprint(y)
    return False


def quasi_cardinality(u: Universe, x: Term) -> int:
    """Number of members of a qset, at uid level and top level only."""
    return len(_members(u, x))


def indist_class(u: Universe, z: Term) -> frozenset[str]:
    """The qset [z] of all universe terms indistinguishable from z."""
    z_sig = _signature(u, z)
    return frozenset(t for t in u.terms() if u._signature_of(t) == z_sig)


def singleton_sub(u: Universe, z: Term, x: Optional[Term] = None) -> frozenset[str]:
    """A one-element qset {t} with t indistinguishable from z.

    When ``x`` is supplied the element is chosen from x.  The chooser is
    deterministic over uid order; callers needing every admissible choice
    should use :func:`singleton_sub_choices`.
    """
    choices = singleton_sub_choices(u, z, x)
    if not choices:
        raise EmptyClass("no indistinguishable partner available to choose")
    return choices[0]


def singleton_sub_choices(
    u: Universe, z: Term, x: Optional[Term] = None
) -> tuple[frozenset[str], ...]:
    """All one-element qsets {t} with t = z up to indistinguishability."""
    pool = indist_class(u, z)
    if x is not None:
        pool = pool & _members(u, x)
    return tuple(frozenset((t,)) for t in sorted(pool))


def qset_union(u: Universe, x: Term, y: Term) -> frozenset[str]:
    """Union of two qsets at uid level."""
    return _members(u, x) | _members(u, y)


def qset_difference(u: Universe, x: Term, z1: Term) -> frozenset[str]:
    """Remove the single element of z1 from x, at uid level."""
    xm = _members(u, x)
    z1m = _members(u, z1)
    if len(z1m) != 1:
        raise NotSingleton(f"z1 has quasi-cardinality {len(z1m)}, expected 1")
    (elem,) = z1m
    if elem not in xm:
        raise ValueError(f"element {elem!r} of z1 is not a member of x")
    return xm - {elem}


def permutation_theorem_check(u: Universe, x: Term, z: str, w: str) -> AxiomReport:
    """Brute-force one instance of the permutation theorem.

    Hypotheses: x is a finite qset not extensionally identical to [z]; z is a
    micro-atom member of x; w is indistinguishable from z and not in x.  The
    check then ranges over every admissible removal z1 (one-element subset of
    both [z] and x) and searches, per removal, all one-element qsets w1 of
    terms indistinguishable from w for one with (x - z1) + w1 = x up to
    indistinguishability.  A failing removal is the counterexample.
    """
    xm = _members(u, x)
    if not (isinstance(z, str) and u.is_micro(z)):
        raise PreconditionViolated(f"z = {z!r} is not a micro-atom of the universe")
    if z not in xm:
        raise PreconditionViolated(f"z = {z!r} is not a member of x")
    z_class = indist_class(u, z)
    if xm == z_class:
        raise PreconditionViolated("x is extensionally identical to the class [z]")
    if not (isinstance(w, str) and u.is_atom(w)):
        raise PreconditionViolated(f"w = {w!r} is not an atom of the universe")
    if not indist(u, w, z):
        raise PreconditionViolated(f"w = {w!r} is not indistinguishable from z = {z!r}")
    if w in xm:
        raise PreconditionViolated(f"w = {w!r} already belongs to x")

    x_sig = _signature(u, xm)
    w_class = sorted(indist_class(u, w))
    for removal in sorted(t for t in xm if t in z_class):
        reduced = xm - {removal}
        found = any(
            _signature(u, reduced | {s}) == x_sig for s in w_class
        )
        if not found:
            return AxiomReport("permutation", False, counterexample=(removal,))
    return AxiomReport("permutation", True)


RelationFn = Callable[[Universe, Term, Term], bool]


def check_equivalence_axioms(
    u: Universe, relation: Optional[RelationFn] = None
) -> list[AxiomReport]:
    """Verify reflexivity (Q1), symmetry (Q2), transitivity (Q3) of a relation.

    Defaults to the model's ``indist``; tests can inject a corrupted relation
    to confirm counterexamples are found and reported.
    """
    rel = relation if relation is not None else indist
    terms = u.terms()

    q1 = AxiomReport("Q1", True)
    for t in terms:
        if not rel(u, t, t):
            q1 = AxiomReport("Q1", False, counterexample=(t,))
            break

    q2 = AxiomReport("Q2", True)
    for a in terms:
        for b in terms:
            if rel(u, a, b) != rel(u, b, a):
                q2 = AxiomReport("Q2", False, counterexample=(a, b))
                break
        if not q2.holds:
            break

    q3 = AxiomReport("Q3", True)
    for a in terms:
        for b in terms:
            if not rel(u, a, b):
                continue
            for c in terms:
                if rel(u, b, c) and not rel(u, a, c):
                    q3 = AxiomReport("Q3", False, counterexample=(a, b, c))
                    break
            if not q3.holds:
                break
        if not q3.holds:
            break

    return [q1, q2, q3]


def check_substitutivity_surrogate(u: Universe, x: Term, y: Term) -> AxiomReport:
    """Check that an extensionally identical pair agrees on every observation.

    The schema behind substitutivity ranges over all formulas and is not
    finitely checkable; the surrogate compares the model-definable
    observations: membership in each qset of the universe, quasi-cardinality
    (for qsets), and the indistinguishability class.
    """
    if not ext_identity(u, x, y):
        raise PreconditionViolated("substitutivity applies only to extensionally identical terms")

    for q in sorted(u.qsets):
        x_in = isinstance(x, str) and x in u.qsets[q]
        y_in = isinstance(y, str) and y in u.qsets[q]
        if x_in != y_in:
            return AxiomReport("Q4-surrogate", False, counterexample=("membership", q))

    if _is_qset_like(u, x) and _is_qset_like(u, y):
        if quasi_cardinality(u, x) != quasi_cardinality(u, y):
            return AxiomReport("Q4-surrogate", False, counterexample=("quasi_cardinality",))

    if indist_class(u, x) != indist_class(u, y):
        return AxiomReport("Q4-surrogate", False, counterexample=("indist_class",))

    return AxiomReport("Q4-surrogate", True)


def quasi_function_check(
    u: Universe,
    pairs: Iterable[tuple[Term, Term]],
    domain: Term,
    codomain: Term,
) -> AxiomReport:
    """Check the quasi-function laws for a pairing between two qsets.

    (i) every domain element has an image; (ii) indistinguishable domain
    elements have indistinguishable images.  ``pairs`` is assumed to lie in
    domain x codomain.
    """
    pair_list = list(pairs)
    dom = _members(u, domain)

    mapped = {a for a, _ in pair_list if isinstance(a, str)}
    for a in sorted(dom):
        if a not in mapped:
            return AxiomReport("quasi-function", False, counterexample=("totality", a))

    for i, (a, b) in enumerate(pair_list):
        for a2, b2 in pair_list[i:]:
            if indist(u, a, a2) and not indist(u, b, b2):
                return AxiomReport(
                    "quasi-function", False, counterexample=("congruence", a, b, a2, b2)
                )

    return AxiomReport("quasi-function", True)


def is_classical_qset(u: Universe, x: Term) -> bool:
    """True when the qset contains no micro-atoms, hereditarily.

    Such collections behave exactly like ordinary sets with urelements; the
    flag is only used for reporting.
    """
    for m in _members(u, x):
        if u.is_micro(m):
            return False
        if u.is_qset(m) and not is_classical_qset(u, m):
            return False
    return True
