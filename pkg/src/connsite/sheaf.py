"""Finite presheaves of sets on a connectivity structure, and the sheaf condition for J."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .core import ConnectivityStructure, hasse_edges, is_subset
from .errors import DomainError, EnumerationCapError, MalformedInputError
from .site import DEFAULT_CAP, CoveringTable, Sieve


@dataclass(frozen=True, eq=False)
class Presheaf:
    """Section sets per connected part, with restriction maps on Hasse edges only.

    ``restrictions[(A, B)]`` maps every section over ``A`` to one over ``B``
    for each Hasse edge ``B ⊊ A``.  Longer restrictions are composites; see
    :func:`validate_presheaf` for the path-independence check.
    """

    structure: ConnectivityStructure
    sections: Mapping[int, tuple[str, ...]]
    restrictions: Mapping[tuple[int, int], Mapping[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "sections", {A: tuple(s) for A, s in self.sections.items()})
        object.__setattr__(self, "restrictions", {e: dict(m) for e, m in self.restrictions.items()})

    @cached_property
    def _composites(self) -> dict[int, dict[int, dict[str, str]]]:
        maps, _ = _compose_all(self)
        return maps

    def restrict(self, x: str, A: int, B: int) -> str:
        if A == B:
            return x
        try:
            return self._composites[A][B][x]
        except KeyError:
            g = self.structure.ground
            raise DomainError(f"no restriction of {x!r} from {g.fmt(A)} to {g.fmt(B)}") from None


@dataclass(frozen=True)
class FunctorialityViolation:
    upper: int
    lower: int
    path1: tuple[int, ...]
    path2: tuple[int, ...]
    section: str
    image1: str
    image2: str


@dataclass(frozen=True)
class PresheafReport:
    violations: tuple[FunctorialityViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_shape(F: Presheaf) -> None:
    K = F.structure
    g = K.ground
    for A in K.family:
        if A not in F.sections:
            raise MalformedInputError(f"no section set for {g.fmt(A)}")
        if len(set(F.sections[A])) != len(F.sections[A]):
            raise MalformedInputError(f"duplicate section labels over {g.fmt(A)}")
    for A, B in hasse_edges(K):
        m = F.restrictions.get((A, B))
        if m is None:
            raise MalformedInputError(f"no restriction map {g.fmt(A)} -> {g.fmt(B)}")
        target = set(F.sections[B])
        for x in F.sections[A]:
            if x not in m:
                raise MalformedInputError(f"restriction {g.fmt(A)} -> {g.fmt(B)} undefined on {x!r}")
            if m[x] not in target:
                raise MalformedInputError(
                    f"restriction {g.fmt(A)} -> {g.fmt(B)} sends {x!r} to unknown section {m[x]!r}"
                )


def _compose_all(F: Presheaf):
    """Composite restriction maps by dynamic programming over Hasse edges.

    Every path from A down to C starts with some Hasse edge A -> B, so comparing
    the routes through each lower cover B checks path independence.
    """
    _check_shape(F)
    K = F.structure
    covers: dict[int, list[int]] = {A: [] for A in K.family}
    for A, B in hasse_edges(K):
        covers[A].append(B)
    maps: dict[int, dict[int, dict[str, str]]] = {}
    paths: dict[int, dict[int, tuple[int, ...]]] = {}
    violations = []
    for A in K.family:
        secs = F.sections[A]
        maps[A] = {A: {x: x for x in secs}}
        paths[A] = {A: (A,)}
        for B in covers[A]:
            edge = F.restrictions[(A, B)]
            for C, below in maps[B].items():
                composite = {x: below[edge[x]] for x in secs}
                route = (A,) + paths[B][C]
                if C not in maps[A]:
                    maps[A][C] = composite
                    paths[A][C] = route
                    continue
                known = maps[A][C]
                for x in secs:
                    if known[x] != composite[x]:
                        violations.append(
                            FunctorialityViolation(A, C, paths[A][C], route, x, known[x], composite[x])
                        )
                        break
    return maps, violations


def validate_presheaf(F: Presheaf) -> PresheafReport:
    _, violations = _compose_all(F)
    return PresheafReport(tuple(violations))


@dataclass(frozen=True, eq=False)
class MatchingFamily:
    sieve: Sieve
    assignment: Mapping[int, str]

    def __eq__(self, other):
        if not isinstance(other, MatchingFamily):
            return NotImplemented
        return self.sieve == other.sieve and dict(self.assignment) == dict(other.assignment)


def _maximal_members(c: Sieve) -> list[int]:
    ordered = c.ordered
    return [B for B in ordered if not any(B != C and is_subset(B, C) for C in ordered)]


def matching_families(F: Presheaf, c: Sieve, cap: int = DEFAULT_CAP) -> list[MatchingFamily]:
    """All compatible families of sections on the members of ``c``.

    Sections are chosen on the maximal members and pushed down by restriction;
    a choice is rejected as soon as it disagrees with an earlier one.
    """
    tops = _maximal_members(c)
    below = {M: [C for C in c.ordered if is_subset(C, M)] for M in tops}
    out: list[MatchingFamily] = []

    def extend(i: int, assignment: dict[int, str]):
        if i == len(tops):
            if len(out) >= cap:
                raise EnumerationCapError(cap, len(out), "matching families")
            out.append(MatchingFamily(c, dict(assignment)))
            return
        M = tops[i]
        for x in F.sections[M]:
            pushed = {C: F.restrict(x, M, C) for C in below[M]}
            if all(assignment.get(C, v) == v for C, v in pushed.items()):
                added = [C for C in pushed if C not in assignment]
                assignment.update((C, pushed[C]) for C in added)
                extend(i + 1, assignment)
                for C in added:
                    del assignment[C]

    extend(0, {})
    return out


def amalgamations(F: Presheaf, m: MatchingFamily) -> list[str]:
    A = m.sieve.base
    return [
        x for x in F.sections[A]
        if all(F.restrict(x, A, B) == v for B, v in m.assignment.items())
    ]


@dataclass(frozen=True)
class SheafCounterexample:
    obj: int
    sieve: Sieve
    family: MatchingFamily
    amalgamations: int


@dataclass(frozen=True)
class SheafVerdict:
    counterexample: SheafCounterexample | None = None

    @property
    def is_sheaf(self) -> bool:
        return self.counterexample is None


def is_sheaf(F: Presheaf, table: CoveringTable, cap: int = DEFAULT_CAP) -> SheafVerdict:
    """Check unique gluing for every covering sieve; the first failure in canonical order is returned."""
    if table.structure != F.structure:
        raise DomainError("covering table was computed for a different structure")
    for A in F.structure.family:
        for c in table[A]:
            for m in matching_families(F, c, cap):
                n = len(amalgamations(F, m))
                if n != 1:
                    return SheafVerdict(SheafCounterexample(A, c, m, n))
    return SheafVerdict()


def _from_section_rule(K: ConnectivityStructure, sections, restrict) -> Presheaf:
    secs = {A: tuple(sections(A)) for A in K.family}
    maps = {(A, B): {x: restrict(x, A, B) for x in secs[A]} for A, B in hasse_edges(K)}
    return Presheaf(K, secs, maps)


def constant_presheaf(K: ConnectivityStructure, labels: Sequence[str]) -> Presheaf:
    return _from_section_rule(K, lambda A: labels, lambda x, A, B: x)


def terminal_presheaf(K: ConnectivityStructure) -> Presheaf:
    return constant_presheaf(K, ("*",))


def _function_label(pairs: Iterable[tuple[str, str]]) -> str:
    return "{" + ",".join(f"{k}={v}" for k, v in pairs) + "}"


def maps_presheaf(K: ConnectivityStructure, values: Sequence[str] = ("0", "1")) -> Presheaf:
    """Sections over A are the functions A -> values; restriction is restriction of the domain."""
    g = K.ground

    def sections(A):
        labels = g.labels_of(A)
        return [_function_label(zip(labels, vs)) for vs in product(values, repeat=len(labels))]

    def restrict(x, A, B):
        keep = set(g.labels_of(B))
        pairs = [p.split("=", 1) for p in x[1:-1].split(",") if p]
        return _function_label((k, v) for k, v in pairs if k in keep)

    return _from_section_rule(K, sections, restrict)
