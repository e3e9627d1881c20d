"""Minimum Euclidean distances of the received constellations.

Distances are half-distances: for symbol differences ``s1 - s1' = 2n`` and
``s2' - s2 = 2m`` the D1 distance is ``|g11 w1 n - g21 w2 m|`` and the D2
distance is ``g22 w2 |m|``.

Two routes compute the D1 minimum: exhaustive search over the non-negative
quadrant of difference pairs, and the Farey route which only looks at the
two endpoints of the Farey interval holding ``r = g21 w2 / (g11 w1)``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import RealZcInstance
from .farey import FareyInterval, Fraction, extended_farey_sequence

REL_TOL = 1e-12


class DistanceError(ValueError):
    pass


class InapplicableBound(DistanceError):
    """Raised when the cross-link ratio is below the interval's numerator sum."""


@dataclass(frozen=True)
class DifferencePair:
    m: int
    n: int

    def __iter__(self):
        return iter((self.m, self.n))


@dataclass(frozen=True)
class DistanceReport:
    d1_min: float
    d1_argmin: DifferencePair
    d2_min: float
    objective: float
    interval: FareyInterval | None = None
    # which side of the mediant r falls on: "lo", "hi" or "mediant"
    side: str | None = None
    degenerate: bool = False

    def to_json(self) -> dict:
        out = {
            "d1_min": self.d1_min,
            "d1_argmin": [self.d1_argmin.m, self.d1_argmin.n],
            "d2_min": self.d2_min,
            "objective": self.objective,
            "degenerate": self.degenerate,
        }
        if self.interval is not None:
            out["interval"] = str(self.interval)
            out["side"] = self.side
        return out


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= REL_TOL * max(abs(x), abs(y))


def d1(inst: RealZcInstance, w1: float, w2: float, pair) -> float:
    m, n = pair
    if m == 0 and n == 0:
        raise DistanceError("difference pair (0, 0) is not a distance")
    return abs(inst.g11 * w1 * n - inst.g21 * w2 * m)


@lru_cache(maxsize=32)
def _quadrant(M: int) -> tuple[np.ndarray, np.ndarray]:
    # (m, n) in {0..M-1}^2 minus the origin, sorted by m then n so that the
    # first minimum found is the tie-break winner
    k = np.arange(M)
    m, n = np.meshgrid(k, k, indexing="ij")
    m, n = m.ravel()[1:], n.ravel()[1:]
    return m.astype(float), n.astype(float)


def min_distance_bruteforce(inst: RealZcInstance, w1: float, w2: float) -> DistanceReport:
    """Exhaustive D1 minimum over the non-negative quadrant of pairs.

    Sign flips never lower ``|a n - b m|`` for ``a, b >= 0``, so the quadrant
    gives the same minimum as the full difference set.
    """
    if not (w1 > 0 and w2 > 0):
        raise DistanceError("scalings must be positive")
    a = inst.g11 * w1
    b = inst.g21 * w2
    d2_min = inst.g22 * w2
    if inst.g21 == 0:
        # no cross link: D1 only resolves user 1
        return DistanceReport(a, DifferencePair(0, 1), d2_min, min(a, d2_min))
    m, n = _quadrant(inst.M)
    dist = np.abs(a * n - b * m)
    i = int(np.argmin(dist))
    d1_min = float(dist[i])
    return DistanceReport(d1_min, DifferencePair(int(m[i]), int(n[i])),
                          d2_min, min(d1_min, d2_min))


def min_distance_grid(inst: RealZcInstance, w1, w2, chunk: int = 4096) -> np.ndarray:
    """Vectorised exhaustive objective ``min(T1, T2)`` over arrays of scalings."""
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    w1, w2 = np.broadcast_arrays(w1, w2)
    a = (inst.g11 * w1).ravel()
    b = (inst.g21 * w2).ravel()
    t2 = inst.g22 * w2.ravel()
    if inst.g21 == 0:
        return np.minimum(a, t2).reshape(w1.shape)
    m, n = _quadrant(inst.M)
    t1 = np.empty_like(a)
    for lo in range(0, a.size, chunk):
        sl = slice(lo, lo + chunk)
        t1[sl] = np.abs(a[sl, None] * n - b[sl, None] * m).min(axis=1)
    return np.minimum(t1, t2).reshape(w1.shape)


def locate(seq: tuple[Fraction, ...], a: float, b: float) -> int:
    """Index j of the first term with ``b/a <= seq[j]`` (so r lies in
    ``(seq[j-1], seq[j]]``)."""
    keys = _TermKeys(seq, a, b)
    return bisect.bisect_left(keys, True)


class _TermKeys:
    # lazy boolean view "r <= seq[j]" for bisect, monotone in j
    def __init__(self, seq, a, b):
        self.seq, self.a, self.b = seq, a, b

    def __len__(self):
        return len(self.seq)

    def __getitem__(self, j):
        f = self.seq[j]
        return self.b * f.den <= self.a * f.num


def min_distance_farey(inst: RealZcInstance, w1: float, w2: float) -> DistanceReport:
    """D1 minimum from the two Farey neighbours of ``r = g21 w2 / (g11 w1)``."""
    if not (w1 > 0 and w2 > 0):
        raise DistanceError("scalings must be positive")
    a = inst.g11 * w1
    b = inst.g21 * w2
    d2_min = inst.g22 * w2
    if inst.g21 == 0:
        return DistanceReport(a, DifferencePair(0, 1), d2_min, min(a, d2_min))
    seq = extended_farey_sequence(inst.M - 1)
    j = locate(seq, a, b)
    lo, hi = seq[j - 1], seq[j]
    d_lo = abs(a * lo.num - b * lo.den)
    d_hi = abs(a * hi.num - b * hi.den)
    med = (lo.num + hi.num, lo.den + hi.den)
    # r vs mediant, i.e. b * med_den vs a * med_num
    lhs, rhs = b * med[1], a * med[0]
    if _close(lhs, rhs):
        side = "mediant"
    else:
        side = "lo" if lhs < rhs else "hi"
    if d_lo < d_hi or (d_lo == d_hi and lo.den <= hi.den):
        pair, best = DifferencePair(lo.den, lo.num), d_lo
    else:
        pair, best = DifferencePair(hi.den, hi.num), d_hi
    degenerate = _close(b * lo.den, a * lo.num) or _close(b * hi.den, a * hi.num)
    return DistanceReport(best, pair, d2_min, min(best, d2_min),
                          FareyInterval(lo, hi), side, degenerate)


def mediant_gap_bound(interval: FareyInterval, g21: float, g22: float) -> tuple[float, float, float]:
    """Ordered triple ``a'/b' + g22/(b' g21) <= (a+a')/(b+b') <= a/b - g22/(b g21)``.

    Here ``b/a`` and ``b'/a'`` are the interval's endpoints (numerator b).
    Only valid when ``g21 / g22 >= b + b'``.
    """
    b_lo, a_lo = interval.lo.num, interval.lo.den
    b_hi, a_hi = interval.hi.num, interval.hi.den
    if not (g21 > 0 and g21 >= g22 * (b_lo + b_hi)):
        raise InapplicableBound(
            f"g21/g22 below numerator sum {b_lo + b_hi} of {interval}")
    left = a_hi / b_hi + g22 / (b_hi * g21)
    mid = (a_lo + a_hi) / (b_lo + b_hi)
    right = float("inf") if b_lo == 0 else a_lo / b_lo - g22 / (b_lo * g21)
    return left, mid, right
