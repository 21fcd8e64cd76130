"""Chain certificates for the covering of a real interval by its short subintervals.

Everything is exact: endpoints are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError, MalformedInputError

Rational = Union[int, Fraction, str]


def _q(value: Rational) -> Fraction:
    if isinstance(value, float):
        raise MalformedInputError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MalformedInputError(f"not a rational number: {value!r}") from exc


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval ``[lo, hi]``; both endpoints ``None`` means the empty interval."""

    lo: Fraction | None
    hi: Fraction | None

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise MalformedInputError("both endpoints or neither must be given")
        if self.lo is None:
            return
        lo, hi = _q(self.lo), _q(self.hi)
        if lo > hi:
            raise MalformedInputError(f"lo > hi in [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def empty(cls) -> RationalInterval:
        return cls(None, None)

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    @property
    def length(self) -> Fraction:
        return Fraction(0) if self.is_empty else self.hi - self.lo

    def contains(self, other: RationalInterval) -> bool:
        if other.is_empty:
            return True
        return not self.is_empty and self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: RationalInterval) -> bool:
        if self.is_empty or other.is_empty:
            return False
        return max(self.lo, other.lo) <= min(self.hi, other.hi)

    def __str__(self):
        return "[]" if self.is_empty else f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class ChainWitness:
    target: RationalInterval
    epsilon: Fraction
    pieces: tuple[RationalInterval, ...]


def build_witness(target: RationalInterval, epsilon: Rational) -> ChainWitness:
    """Overlapping pieces of length ``min(epsilon/2, length)`` at half-length stride.

    The last piece is right-aligned to ``target.hi``.
    """
    eps = _q(epsilon)
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    if target.is_empty:
        raise DomainError("the empty interval is covered by the empty sieve; there is no chain")
    lo, hi = target.lo, target.hi
    step = min(eps / 2, hi - lo)
    pieces = []
    if step < hi - lo:
        start = lo
        while start + step < hi:
            pieces.append(RationalInterval(start, start + step))
            start += step / 2
    pieces.append(RationalInterval(hi - step, hi))
    return ChainWitness(target, eps, tuple(pieces))


def verify_witness(w: ChainWitness) -> bool:
    """Check lengths, containment, consecutive overlaps and exact union."""
    t = w.target
    if t.is_empty or not w.pieces or w.epsilon <= 0:
        return False
    for p in w.pieces:
        if p.is_empty or p.length >= w.epsilon or not t.contains(p):
            return False
    for p, q in zip(w.pieces, w.pieces[1:]):
        if not p.intersects(q):
            return False
    # a chain of pairwise-overlapping consecutive intervals has an interval as union
    return min(p.lo for p in w.pieces) == t.lo and max(p.hi for p in w.pieces) == t.hi
