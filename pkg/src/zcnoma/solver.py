"""Closed-form max-min scaling factors for the real scalar Z-channel.

The ratio ``r = g21 w2 / (g11 w1)`` ranges over the positive axis, which the
extended Farey sequence of order M-1 cuts into finitely many intervals. On
each interval the problem has an explicit solution (``solve_interval``); the
scenario solvers pick the best interval directly from the channel gains.

Notation inside this module follows the Farey terms ``b/a``: ``b`` is the
numerator, ``a`` the denominator, so for an interval ``A = a_lo + a_hi`` and
``B = b_lo + b_hi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelError, ComplexZcChannel, RealZcInstance, decompose
from .distance import min_distance_bruteforce, min_distance_grid
from .farey import FareyInterval, farey_intervals, partition_intervals

WEAK, STRONG, VERY_STRONG = "weak", "strong", "very-strong"

AGREEMENT_RTOL = 1e-9


@dataclass(frozen=True)
class Scenario:
    tag: str
    ratio: float
    L: int | None = None

    def __str__(self):
        return f"{self.tag}(L={self.L})" if self.L is not None else self.tag


@dataclass(frozen=True)
class ScalingSolution:
    w1: float
    w2: float
    objective: float
    scenario: Scenario
    branch: str
    interval: FareyInterval | None = None
    trace: tuple = field(default=(), compare=False)

    def to_json(self, with_trace: bool = False) -> dict:
        out = {
            "w1": self.w1,
            "w2": self.w2,
            "objective": self.objective,
            "scenario": self.scenario.tag,
            "L": self.scenario.L,
            "interval": str(self.interval) if self.interval is not None else None,
            "branch": self.branch,
        }
        if with_trace:
            out["trace"] = [list(t) for t in self.trace]
        return out


def classify(inst: RealZcInstance) -> Scenario:
    """Weak for ``g21/g22 <= 1``, very strong for ``>= 2M``, strong otherwise."""
    ratio = inst.g21 / inst.g22
    if ratio <= 1:
        return Scenario(WEAK, ratio)
    if ratio < 2 * inst.M:
        return Scenario(STRONG, ratio, math.ceil(ratio))
    return Scenario(VERY_STRONG, ratio)


def _no_cross_link(inst: RealZcInstance, scenario: Scenario) -> ScalingSolution:
    # D1 sees only user 1: both users simply transmit at full power
    c1, c2 = inst.cap1, inst.cap2
    return ScalingSolution(c1, c2, min(inst.g11 * c1, inst.g22 * c2),
                           scenario, "no-cross-link")


def solve_interval(inst: RealZcInstance, interval: FareyInterval) -> ScalingSolution:
    """Best scalings with ``r`` restricted to ``(lo, hi]`` of one interval."""
    scenario = classify(inst)
    if inst.g21 == 0:
        return _no_cross_link(inst, scenario)
    g11, g21, g22 = inst.g11, inst.g21, inst.g22
    c1, c2 = inst.cap1, inst.cap2
    A, B = interval.den_sum, interval.num_sum
    if g21 <= g22 * B:
        # d1 balanced at the mediant; d2 has slack
        if g11 / g21 >= (c2 / c1) * A / B:
            return ScalingSolution(A * g21 / (B * g11) * c2, c2, g21 * c2 / B,
                                   scenario, "1a", interval)
        return ScalingSolution(c1, B * g11 / (A * g21) * c1, g11 * c1 / A,
                               scenario, "1b", interval)
    # d1 at the upper endpoint balanced against d2
    a, b = interval.hi.den, interval.hi.num
    if g11 / g21 >= (c2 / c1) * (a / b + g22 / (b * g21)):
        return ScalingSolution((a * g21 + g22) / (b * g11) * c2, c2, g22 * c2,
                               scenario, "2a", interval)
    return ScalingSolution(c1, b * g11 / (a * g21 + g22) * c1,
                           b * g11 * g22 / (a * g21 + g22) * c1,
                           scenario, "2b", interval)


def _argmin_first(values) -> int:
    return int(np.argmin(values))


def _mediant_family(inst, intervals, scenario, label):
    """Best interval when every interval is in the mediant-balanced regime.

    The thresholds ``A/B`` decrease along the list; interval k yields
    ``min(g11 c1 / A_k, g21 c2 / B_k)``.
    """
    g11, g21 = inst.g11, inst.g21
    c1, c2 = inst.cap1, inst.cap2
    A = [iv.den_sum for iv in intervals]
    B = [iv.num_sum for iv in intervals]
    t = (g11 * c1) / (g21 * c2)

    def via_d1(k, branch):
        iv = intervals[k]
        return ScalingSolution(c1, B[k] * g11 / (A[k] * g21) * c1, g11 * c1 / A[k],
                               scenario, branch, iv)

    def via_d2(k, branch):
        iv = intervals[k]
        return ScalingSolution(A[k] * g21 / (B[k] * g11) * c2, c2, g21 * c2 / B[k],
                               scenario, branch, iv)

    n = len(intervals)
    if t <= A[-1] / B[-1]:
        return via_d1(_argmin_first(A), f"{label}.low")
    if t >= A[0] / B[0]:
        return via_d2(_argmin_first(B), f"{label}.high")
    ell = sum(1 for k in range(n) if A[k] / B[k] > t)
    ka = _argmin_first(A[:ell])
    kb = ell + _argmin_first(B[ell:])
    if g11 / g21 >= (c2 / c1) * A[ka] / B[kb]:
        return via_d1(ka, f"{label}.mid-a")
    return via_d2(kb, f"{label}.mid-b")


def _endpoint_family(inst, intervals, scenario, label):
    """Best interval when every interval balances d2 against the upper
    endpoint distance.

    With ``c_k = a_k/b_k + g22/(b_k g21)`` at the upper endpoints, interval k
    yields ``min(g11 g22 c1 / (g21 c_k), g22 c2)``.
    """
    g11, g21, g22 = inst.g11, inst.g21, inst.g22
    c1, c2 = inst.cap1, inst.cap2
    his = [iv.hi for iv in intervals]
    c = [f.den / f.num + g22 / (f.num * g21) for f in his]
    t = (g11 * c1) / (g21 * c2)

    def via_d1(k, branch):
        a, b = his[k].den, his[k].num
        return ScalingSolution(c1, b * g11 / (a * g21 + g22) * c1,
                               b * g11 * g22 / (a * g21 + g22) * c1,
                               scenario, branch, intervals[k])

    if t <= c[-1]:
        return via_d1(len(his) - 1, f"{label}.low")
    j = next(k for k, ck in enumerate(c) if ck < t)
    if j > 0 and g11 / g21 >= (c2 / c1) * c[j - 1]:
        return via_d1(j - 1, f"{label}.mid-a")
    a, b = his[j].den, his[j].num
    return ScalingSolution((a * g21 + g22) / (b * g11) * c2, c2, g22 * c2,
                           scenario, f"{label}.mid-b", intervals[j])


def interval_best(inst: RealZcInstance) -> tuple[ScalingSolution, tuple]:
    """Maximum over all intervals of ``solve_interval`` plus the candidate list."""
    cands = [solve_interval(inst, iv) for iv in farey_intervals(inst.M - 1)]
    best = cands[0]
    for s in cands[1:]:
        if s.objective > best.objective:
            best = s
    return best, tuple((str(s.interval), s.branch, s.objective) for s in cands)


def solve(inst: RealZcInstance) -> ScalingSolution:
    """Optimal ``(w1, w2)`` for one real Z-channel."""
    scenario = classify(inst)
    if inst.g21 == 0:
        return _no_cross_link(inst, scenario)
    K = inst.M - 1
    intervals = farey_intervals(K)
    notes = []
    if scenario.tag == WEAK:
        sol = _mediant_family(inst, intervals, scenario, "weak")
    elif scenario.tag == VERY_STRONG:
        sol = _endpoint_family(inst, intervals, scenario, "very-strong")
    else:
        if scenario.L <= 2 * K:
            part = partition_intervals(K, scenario.L)
            u_set, v_set = part.u_set, part.v_set
        else:
            # numerator sums never reach L
            u_set, v_set = (), intervals
        cands = []
        if u_set:
            cands.append(_mediant_family(inst, u_set, scenario, "strong-u"))
        if v_set:
            cands.append(_endpoint_family(inst, v_set, scenario, "strong-v"))
        # compare on independently recomputed objectives; first wins ties
        scored = [(min_distance_bruteforce(inst, s.w1, s.w2).objective, s) for s in cands]
        for value, s in scored:
            notes.append(("candidate", s.branch, value))
        sol = max(scored, key=lambda vs: vs[0])[1]

    best, per_interval = interval_best(inst)
    trace = tuple(notes) + tuple(("interval",) + t for t in per_interval)
    achieved = min_distance_bruteforce(inst, sol.w1, sol.w2).objective
    if min(sol.objective, achieved) < best.objective * (1 - AGREEMENT_RTOL):
        trace += (("mismatch", sol.branch, achieved, best.objective),)
        return replace(best, branch=f"fallback:{best.branch}", trace=trace)
    return replace(sol, trace=trace)


def solve_complex(ch: ComplexZcChannel) -> tuple[ScalingSolution, ScalingSolution]:
    """Solve the in-phase and quadrature rails independently."""
    inphase, quad = decompose(ch)
    return solve(inphase), solve(quad)


def oracle_solve(inst: RealZcInstance, grid_points: int = 100_000) -> ScalingSolution:
    """Grid search along the two full-power edges of the feasible box.

    At an optimum one user is at its cap, so sweeping ``w2`` with ``w1`` at
    its cap and ``w1`` with ``w2`` at its cap covers the optimum; the
    objective is piecewise linear along each sweep.
    """
    if grid_points < 1000:
        raise ValueError("grid_points must be at least 1000")
    c1, c2 = inst.cap1, inst.cap2
    frac = np.arange(1, grid_points + 1) / grid_points
    w1 = np.concatenate([np.full(grid_points, c1), c1 * frac])
    w2 = np.concatenate([c2 * frac, np.full(grid_points, c2)])
    obj = min_distance_grid(inst, w1, w2)
    i = int(np.argmax(obj))
    return ScalingSolution(float(w1[i]), float(w2[i]), float(obj[i]),
                           classify(inst), "oracle")


__all__ = [
    "ChannelError", "Scenario", "ScalingSolution", "classify", "solve_interval",
    "solve", "solve_complex", "oracle_solve", "interval_best",
    "WEAK", "STRONG", "VERY_STRONG",
]
