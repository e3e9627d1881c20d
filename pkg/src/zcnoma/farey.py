"""Exact Farey sequences, their reciprocal extension and interval partitions.

Everything here is integer arithmetic. ``Fraction(1, 0)`` is infinity and
compares greater than every finite fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, total_ordering
from math import gcd


class FareyError(ValueError):
    """Invalid order or threshold for a Farey construction."""


@total_ordering
@dataclass(frozen=True)
class Fraction:
    """Irreducible non-negative fraction ``num/den``; ``1/0`` is infinity."""

    num: int
    den: int

    def __post_init__(self):
        if self.num < 0 or self.den < 0:
            raise ValueError(f"negative term in {self.num}/{self.den}")
        if self.num == 0 and self.den == 0:
            raise ValueError("0/0 is not a fraction")
        if gcd(self.num, self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not irreducible")

    @classmethod
    def parse(cls, text: str) -> "Fraction":
        num, _, den = text.strip().partition("/")
        return cls(int(num), int(den) if den else 1)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def __lt__(self, other: "Fraction") -> bool:
        if not isinstance(other, Fraction):
            return NotImplemented
        # den >= 0 on both sides, so cross-multiplication keeps the order;
        # 1/0 works out as larger than anything finite.
        return self.num * other.den < other.num * self.den

    def __float__(self) -> float:
        return float("inf") if self.den == 0 else self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def reciprocal(self) -> "Fraction":
        return Fraction(self.den, self.num)


@dataclass(frozen=True)
class FareyInterval:
    """Open interval between two adjacent terms of an extended sequence."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def num_sum(self) -> int:
        return self.lo.num + self.hi.num

    @property
    def den_sum(self) -> int:
        return self.lo.den + self.hi.den

    def mediant(self) -> Fraction:
        return mediant(self.lo, self.hi)

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}"


@dataclass(frozen=True)
class IntervalPartition:
    """Split of the interval set by numerator sum against ``threshold``."""

    u_set: tuple[FareyInterval, ...]
    v_set: tuple[FareyInterval, ...]
    threshold: int


def _check_order(K: int) -> None:
    if isinstance(K, bool) or not isinstance(K, int) or K < 1:
        raise FareyError(f"Farey order must be a positive integer, got {K!r}")


@lru_cache(maxsize=64)
def _farey_terms(K: int) -> tuple[Fraction, ...]:
    # next-term recurrence: given consecutive a/b, c/d the successor is
    # (k*c - a)/(k*d - b) with k = (K + b) // d
    a, b, c, d = 0, 1, 1, K
    terms = [Fraction(a, b)]
    while c <= K:
        terms.append(Fraction(c, d))
        k = (K + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return tuple(terms)


def farey_sequence(K: int) -> tuple[Fraction, ...]:
    """Ascending irreducible fractions in [0, 1] with denominator <= K."""
    _check_order(K)
    return _farey_terms(K)


@lru_cache(maxsize=64)
def _extended_terms(K: int) -> tuple[Fraction, ...]:
    lower = _farey_terms(K)
    upper = tuple(f.reciprocal() for f in reversed(lower[:-1]))
    return lower + upper


def extended_farey_sequence(K: int) -> tuple[Fraction, ...]:
    """Farey sequence of order K followed by its reciprocals, up to 1/0."""
    _check_order(K)
    return _extended_terms(K)


@lru_cache(maxsize=64)
def _intervals(K: int) -> tuple[FareyInterval, ...]:
    seq = _extended_terms(K)
    return tuple(FareyInterval(lo, hi) for lo, hi in zip(seq, seq[1:]))


def farey_intervals(K: int) -> tuple[FareyInterval, ...]:
    """All Farey intervals of the extended sequence of order K, in order."""
    _check_order(K)
    return _intervals(K)


def partition_intervals(K: int, L: int) -> IntervalPartition:
    """Split the intervals into ``num_sum >= L`` (u_set) and the rest (v_set)."""
    _check_order(K)
    if isinstance(L, bool) or not isinstance(L, int) or not 1 <= L <= 2 * K:
        raise FareyError(f"threshold must lie in [1, {2 * K}], got {L!r}")
    u_set, v_set = [], []
    for iv in _intervals(K):
        (u_set if iv.num_sum >= L else v_set).append(iv)
    return IntervalPartition(tuple(u_set), tuple(v_set), L)


def mediant(lo: Fraction, hi: Fraction) -> Fraction:
    """Component-wise sum of a Farey pair; irreducible by unimodularity."""
    return Fraction(lo.num + hi.num, lo.den + hi.den)

