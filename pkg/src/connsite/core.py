"""Finite connectivity structures over a labelled ground set.

Subsets are plain ``int`` bitmasks: bit ``i`` stands for ``ground.names[i]``.
Families are kept in canonical order (popcount, then mask value), which is
also a linear extension of inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import InvalidStructureError, MalformedInputError, NotConnectedError

MAX_GROUND_SIZE = 64


def popcount(mask: int) -> int:
    return mask.bit_count()


def canonical_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


def canonical(masks: Iterable[int]) -> tuple[int, ...]:
    """Deduplicate and sort masks in canonical order."""
    return tuple(sorted(set(masks), key=canonical_key))


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class GroundSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not 1 <= len(names) <= MAX_GROUND_SIZE:
            raise MalformedInputError(
                f"ground set must have between 1 and {MAX_GROUND_SIZE} elements, got {len(names)}"
            )
        for name in names:
            if not isinstance(name, str) or not name:
                raise MalformedInputError(f"element labels must be nonempty strings, got {name!r}")
            if "," in name or "->" in name or "=" in name:
                # reserved by set keys, edge keys and function-section labels
                raise MalformedInputError(f"element label {name!r} contains a reserved character")
        if len(set(names)) != len(names):
            raise MalformedInputError("element labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.names)

    @cached_property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise MalformedInputError(f"unknown element {label!r}") from None

    def mask_of(self, labels: Iterable[str]) -> int:
        labels = list(labels)
        if len(set(labels)) != len(labels):
            raise MalformedInputError(f"duplicate label in set {labels!r}")
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return mask

    def labels_of(self, mask: int) -> tuple[str, ...]:
        self.check(mask)
        return tuple(self.names[i] for i in bits(mask))

    def key(self, mask: int) -> str:
        """Canonical set key: labels in ground order joined by commas, ``""`` for the empty set."""
        return ",".join(self.labels_of(mask))

    def from_key(self, key: str) -> int:
        if key == "":
            return 0
        return self.mask_of(key.split(","))

    def fmt(self, mask: int) -> str:
        return "{" + self.key(mask) + "}"

    def check(self, mask: int) -> int:
        if not isinstance(mask, int) or mask < 0 or mask & ~self.full:
            raise MalformedInputError(f"mask {mask!r} out of range for a ground set of size {self.size}")
        return mask


@dataclass(frozen=True)
class Violation:
    """A failed structure axiom: ``pair`` is ``None`` when the empty set is missing."""

    pair: tuple[int, int] | None
    missing: int

    def describe(self, ground: GroundSet) -> str:
        if self.pair is None:
            return "empty set missing"
        p, q = self.pair
        return f"{ground.fmt(p)} U {ground.fmt(q)} = {ground.fmt(self.missing)} missing"


@dataclass(frozen=True)
class StructureReport:
    ground: GroundSet
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> list[str]:
        return [v.describe(self.ground) for v in self.violations]


def validate_structure(family: Iterable[int], ground: GroundSet) -> StructureReport:
    """Check that ``family`` contains the empty set and is closed under unions of overlapping pairs."""
    fam = canonical(ground.check(m) for m in family)
    present = set(fam)
    violations = []
    if 0 not in present:
        violations.append(Violation(None, 0))
    for p, q in combinations(fam, 2):
        if p & q and (p | q) not in present:
            violations.append(Violation((p, q), p | q))
    return StructureReport(ground, tuple(violations))


@dataclass(frozen=True)
class ConnectivityStructure:
    """A ground set with a family of connected parts.

    The empty set is inserted if absent; the family must otherwise satisfy
    the chained-union axiom or :class:`InvalidStructureError` is raised.
    Integrality is not required.
    """

    ground: GroundSet
    family: tuple[int, ...]

    def __post_init__(self):
        fam = canonical([0, *(self.ground.check(m) for m in self.family)])
        report = validate_structure(fam, self.ground)
        if not report.ok:
            raise InvalidStructureError(report)
        object.__setattr__(self, "family", fam)

    @classmethod
    def _trusted(cls, ground: GroundSet, family: Iterable[int]) -> ConnectivityStructure:
        # family is known to be closed; skip the quadratic check
        self = object.__new__(cls)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "family", canonical([0, *family]))
        return self

    @classmethod
    def from_labels(cls, names: Sequence[str], sets: Iterable[Iterable[str]]) -> ConnectivityStructure:
        ground = GroundSet(tuple(names))
        return cls(ground, tuple(ground.mask_of(s) for s in sets))

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.family)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(self.family)

    def __len__(self) -> int:
        return len(self.family)

    def mask(self, labels: Iterable[str]) -> int:
        return self.ground.mask_of(labels)

    def require(self, mask: int) -> int:
        """Return ``mask`` if it is connected, else raise :class:`NotConnectedError`."""
        self.ground.check(mask)
        if mask not in self.members:
            raise NotConnectedError(f"{self.ground.fmt(mask)} is not connected")
        return mask

    def below(self, mask: int) -> tuple[int, ...]:
        """Connected parts contained in ``mask``, canonical order."""
        return tuple(m for m in self.family if m & ~mask == 0)


@dataclass(frozen=True)
class GeneratorFamily:
    ground: GroundSet
    generators: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "generators", frozenset(self.ground.check(m) for m in self.generators))


def closure(masks: Iterable[int]) -> set[int]:
    """Smallest family containing ``masks`` and the empty set, closed under unions of overlapping pairs.

    Every pair is examined once, when the later of the two is popped from the worklist.
    """
    result = {0, *masks}
    work = list(result)
    while work:
        x = work.pop()
        for y in list(result):
            if x & y:
                u = x | y
                if u not in result:
                    result.add(u)
                    work.append(u)
    return result


def generate_structure(gen: GeneratorFamily) -> ConnectivityStructure:
    return ConnectivityStructure._trusted(gen.ground, closure(gen.generators))


def induced_structure(K: ConnectivityStructure, A: int) -> ConnectivityStructure:
    """The structure ``{B in K : B ⊆ A}``, kept over the same ground set."""
    K.require(A)
    return ConnectivityStructure._trusted(K.ground, K.below(A))


def is_integral(K: ConnectivityStructure) -> bool:
    return all((1 << i) in K.members for i in range(K.ground.size))


def irreducible_by_definition(K: ConnectivityStructure, A: int) -> bool:
    """True iff ``A`` is not generated by its proper connected subsets."""
    K.require(A)
    return A not in closure(B for B in K.below(A) if B != A)


def irreducibles(K: ConnectivityStructure) -> tuple[int, ...]:
    return tuple(A for A in K.family if irreducible_by_definition(K, A))


def connected_vertex_sets(n: int, adjacency: Sequence[int]) -> set[int]:
    """Vertex masks of all nonempty connected induced subgraphs; ``adjacency[v]`` is the neighbour mask of ``v``."""
    found: set[int] = set()
    stack = [1 << v for v in range(n)]
    found.update(stack)
    while stack:
        cur = stack.pop()
        frontier = 0
        for v in bits(cur):
            frontier |= adjacency[v]
        frontier &= ~cur
        for v in bits(frontier):
            nxt = cur | (1 << v)
            if nxt not in found:
                found.add(nxt)
                stack.append(nxt)
    return found


def from_graph(vertices: Sequence[str], edges: Iterable[tuple[str, str]]) -> ConnectivityStructure:
    """Structure whose connected parts are the vertex sets of connected subgraphs, plus the empty set."""
    ground = GroundSet(tuple(vertices))
    adjacency = [0] * ground.size
    for u, v in edges:
        i, j = ground.index(u), ground.index(v)
        adjacency[i] |= 1 << j
        adjacency[j] |= 1 << i
    return ConnectivityStructure._trusted(ground, connected_vertex_sets(ground.size, adjacency))


def hasse_edges(K: ConnectivityStructure) -> list[tuple[int, int]]:
    """Covering pairs ``(A, B)`` with ``B ⊊ A`` and no connected part strictly between them."""
    edges = []
    for A in K.family:
        strictly_below = [B for B in K.below(A) if B != A]
        for B in strictly_below:
            if not any(B != C and is_subset(B, C) for C in strictly_below):
                edges.append((A, B))
    return edges
