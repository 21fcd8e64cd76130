"""Sieves on the inclusion poset of a connectivity structure, and the covering topology J.

A sieve on ``A`` is stored as the set of domains of its arrows: a
downward-closed set of connected parts of ``A``.  A sieve covers ``A`` when
the structure it generates is all of ``K|A``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .core import ConnectivityStructure, canonical, canonical_key, closure, is_subset
from .errors import DomainError, EnumerationCapError

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class Sieve:
    base: int
    members: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    @property
    def ordered(self) -> tuple[int, ...]:
        return canonical(self.members)

    def sort_key(self):
        return (len(self.members), tuple(canonical_key(m) for m in self.ordered))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members


def maximal_sieve(K: ConnectivityStructure, A: int) -> Sieve:
    K.require(A)
    return Sieve(A, K.below(A))


def is_sieve(K: ConnectivityStructure, base: int, members: Iterable[int]) -> bool:
    members = set(members)
    if not all(m in K and is_subset(m, base) for m in members):
        return False
    return all(C in members for B in members for C in K.below(B))


def restrict_sieve(K: ConnectivityStructure, c: Sieve, B: int) -> Sieve:
    """Pull ``c`` back along the inclusion ``B ⊆ c.base``."""
    K.require(B)
    if not is_subset(B, c.base):
        raise DomainError(f"{K.ground.fmt(B)} is not contained in {K.ground.fmt(c.base)}")
    return Sieve(B, (C for C in c.members if is_subset(C, B)))


def is_covering(K: ConnectivityStructure, c: Sieve) -> bool:
    # the closure of a sieve always lies inside K|base, so comparing sizes is enough
    return len(closure(c.members)) == len(K.below(c.base))


class _Local:
    """The poset ``K|A`` with sieves encoded as bitmasks over its canonical indices."""

    def __init__(self, K: ConnectivityStructure, A: int):
        K.require(A)
        self.K = K
        self.A = A
        self.family = K.below(A)
        n = len(self.family)
        self.n = n
        self.full = (1 << n) - 1
        # down[i]: indices of members contained in family[i], itself included
        self.down = [0] * n
        for i, B in enumerate(self.family):
            d = 0
            for j in range(i + 1):
                if is_subset(self.family[j], B):
                    d |= 1 << j
            self.down[i] = d
        self._closure_size: dict[int, int] = {}
        self._profile: dict[int, int] = {}
        self._sieves: list[int] | None = None

    def masks(self, s: int) -> list[int]:
        fam = self.family
        out = []
        i = 0
        while s:
            if s & 1:
                out.append(fam[i])
            s >>= 1
            i += 1
        return out

    def encode(self, members: Iterable[int]) -> int:
        index = {m: i for i, m in enumerate(self.family)}
        s = 0
        for m in members:
            s |= 1 << index[m]
        return s

    def sieve(self, s: int) -> Sieve:
        return Sieve(self.A, self.masks(s))

    def sieves(self, cap: int) -> list[int]:
        if self._sieves is not None:
            if len(self._sieves) > cap:
                raise EnumerationCapError(cap, cap, "sieves", self.K.ground.fmt(self.A))
            return self._sieves
        n = self.n
        lower = [self.down[i] & ~(1 << i) for i in range(n)]
        out: list[int] = []
        # canonical order is a linear extension, so checking lower[i] against
        # the choices made so far keeps every branch downward closed
        stack = [(0, 0)]
        while stack:
            i, chosen = stack.pop()
            while i < n:
                if lower[i] & ~chosen == 0:
                    stack.append((i + 1, chosen | (1 << i)))
                i += 1
            if len(out) >= cap:
                raise EnumerationCapError(cap, len(out), "sieves", self.K.ground.fmt(self.A))
            out.append(chosen)
        self._sieves = out
        return out

    def closure_size(self, s: int) -> int:
        size = self._closure_size.get(s)
        if size is None:
            size = len(closure(self.masks(s)))
            self._closure_size[s] = size
        return size

    def covers(self, s: int) -> bool:
        return self.closure_size(s) == self.n

    def profile(self, s: int) -> int:
        """Bit ``k`` is set iff the restriction of ``s`` to ``family[k]`` covers ``family[k]``."""
        p = self._profile.get(s)
        if p is None:
            p = 0
            for k, d in enumerate(self.down):
                if self.closure_size(s & d) == d.bit_count():
                    p |= 1 << k
            self._profile[s] = p
        return p

    def covering(self, cap: int) -> list[int]:
        return [s for s in self.sieves(cap) if self.covers(s)]


def enumerate_sieves(K: ConnectivityStructure, A: int, cap: int = DEFAULT_CAP) -> list[Sieve]:
    """All sieves on ``A``, in enumeration order (the empty sieve first)."""
    if cap < 1:
        raise DomainError("cap must be at least 1")
    local = _Local(K, A)
    return [local.sieve(s) for s in local.sieves(cap)]


def covering_sieves(K: ConnectivityStructure, A: int, cap: int = DEFAULT_CAP) -> list[Sieve]:
    """J(A), ordered by member count and then canonical member order."""
    if cap < 1:
        raise DomainError("cap must be at least 1")
    local = _Local(K, A)
    return sorted((local.sieve(s) for s in local.covering(cap)), key=Sieve.sort_key)


@dataclass(frozen=True)
class CoveringTable:
    structure: ConnectivityStructure
    entries: dict[int, tuple[Sieve, ...]]

    def __getitem__(self, A: int) -> tuple[Sieve, ...]:
        return self.entries[A]

    def __iter__(self):
        return iter(self.entries)

    def counts(self) -> dict[int, int]:
        return {A: len(J) for A, J in self.entries.items()}


def covering_table(K: ConnectivityStructure, cap: int = DEFAULT_CAP) -> CoveringTable:
    entries = {}
    for A in K.family:
        try:
            entries[A] = tuple(covering_sieves(K, A, cap))
        except EnumerationCapError as exc:
            raise EnumerationCapError(cap, exc.partial_count, "sieves", K.ground.fmt(A)) from None
    return CoveringTable(K, entries)


def is_irreducible_via_J(K: ConnectivityStructure, A: int, cap: int = DEFAULT_CAP) -> bool:
    return len(covering_sieves(K, A, cap)) == 1


@dataclass(frozen=True)
class AxiomViolation:
    obj: int
    sieves: tuple[Sieve, ...]
    at: int | None = None


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    instances: int
    violations: tuple[AxiomViolation, ...]
    mode: str

    @property
    def passed(self) -> bool:
        return not self.violations


AXIOMS = ("maximality", "stability", "transitivity")


def verify_axioms(
    K: ConnectivityStructure,
    samples: int | None = None,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
) -> list[AxiomReport]:
    """Check the three topology axioms for J on ``K``.

    With ``samples=None`` every instance is checked.  Otherwise each axiom
    draws ``samples`` random instances from a ``random.Random(seed)``.
    """
    locals_: dict[int, _Local] = {}

    def local(A: int) -> _Local:
        if A not in locals_:
            loc = _Local(K, A)
            try:
                loc.sieves(cap)
            except EnumerationCapError as exc:
                raise EnumerationCapError(cap, exc.partial_count, "sieves", K.ground.fmt(A)) from None
            locals_[A] = loc
        return locals_[A]

    if samples is None:
        return _exhaustive(K, local, cap)
    return _randomized(K, local, cap, samples, seed)


def _exhaustive(K, local, cap) -> list[AxiomReport]:
    counts = dict.fromkeys(AXIOMS, 0)
    found: dict[str, list[AxiomViolation]] = {a: [] for a in AXIOMS}
    for A in K.family:
        loc = local(A)
        counts["maximality"] += 1
        if not loc.covers(loc.full):
            found["maximality"].append(AxiomViolation(A, (loc.sieve(loc.full),)))
        sieves = loc.sieves(cap)
        J = [s for s in sieves if loc.covers(s)]
        for c in J:
            p = loc.profile(c)
            counts["stability"] += loc.n
            for k in range(loc.n):
                if not p >> k & 1:
                    found["stability"].append(AxiomViolation(A, (loc.sieve(c),), loc.family[k]))
        profiles = [(d, loc.profile(d)) for d in sieves]
        for c in J:
            for d, p in profiles:
                counts["transitivity"] += 1
                if c & ~p == 0 and not p >> (loc.n - 1) & 1:
                    found["transitivity"].append(AxiomViolation(A, (loc.sieve(c), loc.sieve(d))))
    return [AxiomReport(a, counts[a], tuple(found[a]), "exhaustive") for a in AXIOMS]


def _randomized(K, local, cap, samples, seed) -> list[AxiomReport]:
    rng = random.Random(seed)
    mode = f"randomized(samples={samples}, seed={seed})"
    reports = []

    found = []
    for _ in range(samples):
        A = rng.choice(K.family)
        loc = local(A)
        if not loc.covers(loc.full):
            found.append(AxiomViolation(A, (loc.sieve(loc.full),)))
    reports.append(AxiomReport("maximality", samples, tuple(found), mode))

    found = []
    for _ in range(samples):
        A = rng.choice(K.family)
        loc = local(A)
        c = rng.choice(loc.covering(cap))
        k = rng.randrange(loc.n)
        if not loc.profile(c) >> k & 1:
            found.append(AxiomViolation(A, (loc.sieve(c),), loc.family[k]))
    reports.append(AxiomReport("stability", samples, tuple(found), mode))

    found = []
    for _ in range(samples):
        A = rng.choice(K.family)
        loc = local(A)
        c = rng.choice(loc.covering(cap))
        d = rng.choice(loc.sieves(cap))
        p = loc.profile(d)
        if c & ~p == 0 and not p >> (loc.n - 1) & 1:
            found.append(AxiomViolation(A, (loc.sieve(c), loc.sieve(d))))
    reports.append(AxiomReport("transitivity", samples, tuple(found), mode))
    return reports
