import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zcnoma.channel import (
    ChannelError,
    ComplexZcChannel,
    NoiseModel,
    PamConstellation,
    RealZcInstance,
    allocate_power,
    decompose,
    pam_points,
    power_cap,
    sum_constellation,
)

orders = st.sampled_from([2, 4, 8, 16, 32])
pos = st.floats(1e-3, 1e3)
phase = st.floats(-math.pi, math.pi)


def test_pam_alphabet():
    assert pam_points(4).tolist() == [-3, -1, 1, 3]
    assert pam_points(2).tolist() == [-1, 1]
    assert PamConstellation(8).points.tolist() == [-7, -5, -3, -1, 1, 3, 5, 7]


@given(orders)
def test_pam_moments(M):
    s = pam_points(M)
    assert s.mean() == 0
    assert math.isclose((s ** 2).mean(), (M * M - 1) / 3)


@given(orders, pos)
def test_power_cap_meets_budget(M, p):
    w = power_cap(p, M)
    assert math.isclose(((w * pam_points(M)) ** 2).mean(), p)


@pytest.mark.parametrize("P,M,Mp,expected", [
    (1, 4, 4, (0.5, 0.5)), (1, 2, 2, (0.5, 0.5)), (1, 2, 4, (3 / 18, 15 / 18))])
def test_allocate_power_literals(P, M, Mp, expected):
    assert allocate_power(P, M, Mp) == pytest.approx(expected, rel=1e-15)


@given(pos, orders, orders)
def test_allocate_power_conserves_and_balances(P, M, Mp):
    p, pq = allocate_power(P, M, Mp)
    assert p + pq == pytest.approx(P, rel=1e-15)
    # equal minimum distance on both rails
    assert power_cap(p, M) == pytest.approx(power_cap(pq, Mp), rel=1e-12)


def test_decompose_real_symmetric():
    i, q = decompose(ComplexZcChannel(1, 0.5, 1, 2, 2, 4, 4))
    assert i == q == RealZcInstance(1, 0.5, 1, 1, 1, 4)


def test_decompose_absorbs_phase():
    i, _ = decompose(ComplexZcChannel(1j, 1, 1, 1, 1, 4, 4))
    assert (i.g11, i.g21, i.g22) == (1, 1, 1)


def test_decompose_magnitudes():
    i, q = decompose(ComplexZcChannel(3 + 4j, 1 - 1j, 2j, 2, 2, 4, 4))
    assert (i.g11, i.g21, i.g22) == pytest.approx((5, math.sqrt(2), 2))
    assert (i.p1, q.p1) == (1, 1)


def test_decompose_mixed_orders():
    i, q = decompose(ComplexZcChannel(1, 1, 1, 1, 1, 2, 4))
    assert (i.M, q.M) == (2, 4)
    assert (i.p1, q.p1) == pytest.approx((3 / 18, 15 / 18))


@given(pos, pos, pos, phase, phase, phase)
def test_decompose_phase_invariant(a, b, c, t1, t2, t3):
    base = decompose(ComplexZcChannel(a, b, c, 1, 1, 4, 4))
    rot = decompose(ComplexZcChannel(a * cmath.exp(1j * t1), b * cmath.exp(1j * t2),
                                     c * cmath.exp(1j * t3), 1, 1, 4, 4))
    for x, y in zip(base, rot):
        assert (x.g11, x.g21, x.g22) == pytest.approx((y.g11, y.g21, y.g22), rel=1e-12)


def test_huge_gains_do_not_overflow():
    i, _ = decompose(ComplexZcChannel(1e200 + 1e200j, 0, 1, 1, 1, 4, 4))
    assert math.isfinite(i.g11)


@pytest.mark.parametrize("kwargs", [
    dict(g11=0, g21=1, g22=1, p1=1, p2=1, M=4),
    dict(g11=1, g21=1, g22=0, p1=1, p2=1, M=4),
    dict(g11=1, g21=-1, g22=1, p1=1, p2=1, M=4),
    dict(g11=1, g21=1, g22=1, p1=0, p2=1, M=4),
    dict(g11=1, g21=float("nan"), g22=1, p1=1, p2=1, M=4),
    dict(g11=1, g21=1, g22=1, p1=1, p2=1, M=3),
    dict(g11=1, g21=1, g22=1, p1=1, p2=1, M=0),
])
def test_invalid_real_instances(kwargs):
    with pytest.raises(ChannelError):
        RealZcInstance(**kwargs)


def test_invalid_complex_channel():
    with pytest.raises(ChannelError):
        ComplexZcChannel(0, 1, 1, 1, 1, 4, 4)
    with pytest.raises(ChannelError):
        ComplexZcChannel(1, 1, 1, 1, 1, 4, 5)


def test_channel_json_round_trip():
    ch = ComplexZcChannel(3 + 4j, 1 - 1j, 2j, 2, 2, 4, 2)
    assert ComplexZcChannel.from_json(ch.to_json()) == ch


@given(st.floats(1e-6, 1e6))
def test_noise_model(rho):
    n = NoiseModel.from_rho(rho)
    assert n.rho * 2 * n.sigma2 == pytest.approx(1)
    assert NoiseModel.from_db(10 * math.log10(rho)).sigma2 == pytest.approx(n.sigma2)


def test_sum_constellation_literals():
    sc = sum_constellation(RealZcInstance(1, 0.25, 1, 1, 1, 2), 1, 1)
    assert sorted(sc.d1_points) == [-1.25, -0.75, 0.75, 1.25]
    sc = sum_constellation(RealZcInstance(1, 1, 1, 1, 1, 2), 1, 1)
    assert sorted(sc.d1_points) == [-2, 0, 0, 2]
    assert sc.d2.tolist() == [-1, 1]


def test_weak_optimum_gives_regular_grid():
    inst = RealZcInstance(1, 0.5, 1, 1, 1, 4)
    sc = sum_constellation(inst, math.sqrt(0.2), math.sqrt(0.05))
    pts = np.sort(sc.d1_points)
    assert len(np.unique(np.round(pts, 12))) == 16
    assert np.ptp(np.diff(pts)) < 1e-12


@given(orders, st.floats(0.01, 10), st.floats(0.01, 10))
def test_sum_constellation_cardinality(M, b, w):
    inst = RealZcInstance(1, b, 1, 1, 1, M)
    pts = sum_constellation(inst, 1, w).d1_points
    assert pts.size == M * M
    r = b * w
    collide = any(abs(n - r * m) <= 1e-9 * max(1, r * m)
                  for m in range(1, M) for n in range(0, M))
    distinct = len(np.unique(np.round(pts, 9)))
    if not collide:
        assert distinct == M * M
    assert distinct <= M * M
