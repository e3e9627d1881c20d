import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zcnoma.channel import RealZcInstance, pam_points
from zcnoma.sim import (
    CSV_HEADER,
    FadingSpec,
    SimConfig,
    gray,
    ml_detect_d1,
    ml_detect_d2,
    pam_ser,
    run_baseline,
    run_ber,
    trial_rng,
)
from zcnoma.solver import solve

WEAK = FadingSpec(gains=(1, 0.5, 1))
RAYLEIGH = FadingSpec(variances=(1, 1, 1))


def cfg(scheme="noma", snr=(10.0, 20.0), trials=20, symbols=500, seed=3, M=4, Mp=4):
    return SimConfig(scheme, M, Mp, tuple(snr), trials, symbols, seed)


# detectors

def test_d1_noise_free_identity():
    inst = RealZcInstance(1, 0.5, 1, 1, 1, 4)
    sol = solve(inst)
    s = pam_points(4)
    for s1, s2 in itertools.product(s, s):
        y = inst.g11 * sol.w1 * s1 + inst.g21 * sol.w2 * s2
        assert ml_detect_d1(y, inst, sol.w1, sol.w2) == (s1, s2)


def test_d1_tie_goes_to_smaller_pair():
    inst = RealZcInstance(1, 1, 1, 1, 1, 2)
    assert ml_detect_d1(0.0, inst, 1, 1) == (-1, 1)


def test_d1_nearest_of_sixteen():
    inst = RealZcInstance(1, 0.25, 1, 1, 1, 4)
    levels = {(a, b): a + 0.25 * b for a in pam_points(4) for b in pam_points(4)}
    best = min(levels, key=lambda k: abs(4.9 - levels[k]))
    assert ml_detect_d1(4.9, inst, 1, 1) == best == (3, 3)


def test_d2_rules():
    inst = RealZcInstance(1, 1, 2, 1, 1, 4)
    for s in pam_points(4):
        assert ml_detect_d2(2 * s, inst, 1) == s
    assert ml_detect_d2(0.0, inst, 1) == -1  # midpoint goes to the smaller symbol
    assert ml_detect_d2(3.9, inst, 1) == 1
    assert ml_detect_d2(4.1, inst, 1) == 3


def test_d1_matches_exhaustive_search():
    rng = np.random.default_rng(11)
    for M in (2, 4, 8):
        inst = RealZcInstance(1.3, 0.7, 1, 1, 1, M)
        w1, w2 = 0.3, 0.2
        y = rng.normal(0, M * 0.5, 10_000)
        s1, s2 = ml_detect_d1(y, inst, w1, w2)
        pts = [(a, b, inst.g11 * w1 * a + inst.g21 * w2 * b)
               for a in pam_points(M) for b in pam_points(M)]
        for k in range(0, 10_000, 97):
            a, b, _ = min(pts, key=lambda p: (abs(y[k] - p[2]), p[0], p[1]))
            assert (s1[k], s2[k]) == (a, b)


def test_gray_neighbours_differ_in_one_bit():
    g = gray(np.arange(256))
    assert len(set(g.tolist())) == 256
    assert all(bin(int(x ^ y)).count("1") == 1 for x, y in zip(g, g[1:]))


# configuration

def test_config_validation():
    with pytest.raises(ValueError):
        cfg(trials=1, symbols=100)
    with pytest.raises(ValueError):
        cfg(scheme="ofdm")
    with pytest.raises(ValueError):
        cfg(snr=(20.0, 10.0))
    with pytest.raises(ValueError):
        FadingSpec()
    with pytest.raises(ValueError):
        FadingSpec(variances=(1, 0, 1))
    with pytest.raises(ValueError):
        run_baseline(cfg("noma"), WEAK)


def test_trial_streams_are_independent_of_order():
    a = trial_rng(5, 3).standard_normal(4)
    trial_rng(5, 2).standard_normal(100)
    assert np.array_equal(a, trial_rng(5, 3).standard_normal(4))
    assert not np.array_equal(a, trial_rng(5, 4).standard_normal(4))


# simulation behaviour

def test_noise_free_weak_channel_is_error_free():
    c = run_ber(cfg(snr=(60.0,), trials=10, symbols=10_000), WEAK)
    assert c.errors.sum() == 0
    assert c.symbols[0, 0] == 2 * 10 * 10_000


@pytest.mark.parametrize("scheme", ["tdma", "fdma", "crnoma"])
def test_baselines_noise_free(scheme):
    c = run_baseline(cfg(scheme, snr=(80.0,), trials=10, symbols=1000), WEAK)
    assert c.errors.sum() == 0


def test_same_seed_same_counts():
    a = run_ber(cfg(), RAYLEIGH)
    b = run_ber(cfg(), RAYLEIGH)
    assert np.array_equal(a.errors, b.errors) and a.to_csv() == b.to_csv()
    c = run_ber(cfg(seed=4), RAYLEIGH)
    assert not np.array_equal(a.errors, c.errors)


def test_parallelism_does_not_change_results():
    a = run_ber(cfg(trials=30, symbols=400), RAYLEIGH, workers=1)
    b = run_ber(cfg(trials=30, symbols=400), RAYLEIGH, workers=3)
    assert a.to_csv() == b.to_csv()
    assert np.array_equal(a.trial_errors, b.trial_errors)


@pytest.mark.parametrize("M,Mp", [(4, 4), (2, 4), (8, 2)])
def test_stream_completeness(M, Mp):
    c = run_ber(cfg(M=M, Mp=Mp, trials=10, symbols=1000), RAYLEIGH)
    per_trial = 1000 * (math.log2(M) + math.log2(Mp))
    assert c.trial_bits.tolist() == [[per_trial] * 3] * 10
    assert c.bits.sum(axis=1).tolist() == [3 * 10 * per_trial] * 2


def test_zero_cross_link_drops_that_stream():
    c = run_ber(cfg(trials=10, symbols=1000), FadingSpec(gains=(1, 0, 1)))
    assert c.bits[0].tolist() == [40_000, 0, 40_000]


def test_fdma_equals_tdma_at_double_snr():
    snr = (5.0, 10.0, 15.0)
    f = run_baseline(cfg("fdma", snr=snr), RAYLEIGH)
    t = run_baseline(cfg("tdma", snr=tuple(s + 10 * math.log10(2) for s in snr)), RAYLEIGH)
    assert np.array_equal(f.errors, t.errors)


@settings(max_examples=5, deadline=None)
@given(st.sampled_from(["noma", "tdma", "fdma", "crnoma"]), st.integers(0, 2**32))
def test_ber_monotone_in_snr(scheme, seed):
    c = run_ber(cfg(scheme, snr=(0.0, 10.0, 20.0, 30.0), seed=seed), RAYLEIGH)
    se = c.standard_error()
    ber = c.ber
    for i in range(len(ber) - 1):
        assert ber[i] >= ber[i + 1] - 3 * math.hypot(se[i], se[i + 1])


def test_single_user_ser_matches_closed_form():
    inst = RealZcInstance(1, 0, 1, 0.5, 0.5, 4)
    w2 = solve(inst).w2
    snr = (8.0, 10.0, 12.0)
    c = run_ber(cfg(snr=snr, trials=20, symbols=5000), FadingSpec(gains=(1, 0, 1)))
    sigma = np.sqrt(1 / (2 * c.rho))
    expected = pam_ser(4, w2 / sigma)
    n = c.symbols[:, 2]
    sim = c.stream_ser("s2@D2")
    se = np.sqrt(expected * (1 - expected) / n)
    assert np.all(np.abs(sim - expected) <= 3 * se)


def test_csv_contract():
    c = run_ber(cfg(), WEAK)
    lines = c.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 3
    for line, ber, bits, errors in zip(lines[1:], c.ber, c.bits.sum(1), c.errors.sum(1)):
        fields = line.split(",")
        assert fields[0] == "noma"
        assert float(fields[3]) == ber == errors / bits
    meta = c.metadata()
    assert set(meta["streams"]) == {"s1@D1", "s2@D1", "s2@D2"}
