"""Monte Carlo bit-error-rate simulation of the proposed scheme and baselines.

All schemes are simulated in the phase-compensated real domain: transmitters
pre-rotate by the phase of their D1 link and D2 de-rotates by
``arg(h21/h22)``, so each rail sees the link magnitudes and i.i.d. real noise
of variance ``sigma^2 = 1/(2 rho)``.

Random numbers come from Philox4x64 (numpy ``Philox``), keyed by the seed,
with trial ``t`` starting at counter ``[0, 0, 0, t]``. Each trial draws in a
fixed order: channel (fading only), symbol indices, unit-variance noise. The
same draws are reused for every SNR point, and trials are independent, so
results do not depend on how trials are split across workers.

Three message streams are counted per rail: user 1 at D1, user 2 at D1 and
user 2 at D2. The reported average BER is total bit errors over total bits
across the three streams. A stream is skipped when its link gain is zero.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .channel import ComplexZcChannel, RealZcInstance, allocate_power, decompose, pam_points, power_cap
from .solver import solve

SCHEMES = ("noma", "tdma", "fdma", "crnoma")
STREAMS = ("s1@D1", "s2@D1", "s2@D2")
CSV_HEADER = ("scheme", "rho", "snr_db", "ber", "bits", "errors")
MIN_SYMBOLS_PER_POINT = 10_000


@dataclass(frozen=True)
class FadingSpec:
    """Either Rayleigh variances ``(d11, d21, d22)`` or fixed complex gains."""

    variances: tuple[float, float, float] | None = None
    gains: tuple[complex, complex, complex] | None = None

    def __post_init__(self):
        if (self.variances is None) == (self.gains is None):
            raise ValueError("give exactly one of variances or gains")
        if self.variances is not None and not all(v > 0 for v in self.variances):
            raise ValueError("fading variances must be positive")

    @property
    def deterministic(self) -> bool:
        return self.gains is not None

    def draw(self, rng: np.random.Generator) -> tuple[complex, complex, complex]:
        if self.gains is not None:
            return self.gains
        z = rng.standard_normal(6).reshape(3, 2)
        scale = np.sqrt(np.asarray(self.variances) / 2.0)
        h = (z[:, 0] + 1j * z[:, 1]) * scale
        return complex(h[0]), complex(h[1]), complex(h[2])


@dataclass(frozen=True)
class SimConfig:
    scheme: str
    M: int
    Mp: int
    snr_db: tuple[float, ...]
    trials: int
    symbols_per_trial: int
    seed: int
    P1: float = 1.0
    P2: float = 1.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.trials * self.symbols_per_trial < MIN_SYMBOLS_PER_POINT:
            raise ValueError(f"need at least {MIN_SYMBOLS_PER_POINT} symbols per SNR point")
        if not self.snr_db:
            raise ValueError("empty SNR grid")
        if list(self.snr_db) != sorted(self.snr_db):
            raise ValueError("SNR grid must be ascending")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    @property
    def rho(self) -> np.ndarray:
        return 10.0 ** (np.asarray(self.snr_db, dtype=float) / 10.0)


@dataclass
class BerCurve:
    """Error counts summed over trials, indexed [snr, stream]."""

    scheme: str
    snr_db: np.ndarray
    rho: np.ndarray
    bits: np.ndarray
    errors: np.ndarray
    symbols: np.ndarray
    symbol_errors: np.ndarray
    trial_errors: np.ndarray = field(repr=False)
    trial_bits: np.ndarray = field(repr=False)

    @property
    def ber(self) -> np.ndarray:
        """Average BER over the three streams, weighted by bit counts."""
        bits = self.bits.sum(axis=1)
        return self.errors.sum(axis=1) / bits

    def stream_ber(self, stream: str) -> np.ndarray:
        k = STREAMS.index(stream)
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.errors[:, k] / self.bits[:, k]

    def stream_ser(self, stream: str) -> np.ndarray:
        k = STREAMS.index(stream)
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.symbol_errors[:, k] / self.symbols[:, k]

    def standard_error(self) -> np.ndarray:
        """Standard error of the average BER treating trials as clusters.

        Errors inside one fading realisation are correlated, so the spread
        of per-trial error fractions is used rather than a binomial count.
        """
        e = self.trial_errors.sum(axis=2).astype(float)
        b = self.trial_bits.sum(axis=1).astype(float)[:, None]
        n = e.shape[0]
        ratio = e.sum(axis=0) / b.sum()
        resid = e - ratio[None, :] * b
        var = (resid ** 2).sum(axis=0) / (n - 1) if n > 1 else np.zeros_like(ratio)
        return np.sqrt(n * var) / b.sum()

    def rows(self):
        ber = self.ber
        for i in range(len(self.rho)):
            yield (self.scheme, float(self.rho[i]), float(self.snr_db[i]), float(ber[i]),
                   int(self.bits[i].sum()), int(self.errors[i].sum()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows():
            w.writerow([row[0]] + [repr(v) for v in row[1:]])
        return buf.getvalue()

    def metadata(self) -> dict:
        return {
            "scheme": self.scheme,
            "averaging": "bit-weighted mean over streams " + ", ".join(STREAMS),
            "streams": {
                s: {"bits": self.bits[:, k].tolist(), "errors": self.errors[:, k].tolist(),
                    "symbols": self.symbols[:, k].tolist(),
                    "symbol_errors": self.symbol_errors[:, k].tolist()}
                for k, s in enumerate(STREAMS)
            },
            "snr_db": self.snr_db.tolist(),
            "standard_error": self.standard_error().tolist(),
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, trial]))


def gray(idx: np.ndarray) -> np.ndarray:
    return idx ^ (idx >> 1)


def _bit_errors(tx: np.ndarray, rx: np.ndarray) -> np.ndarray:
    return np.bitwise_count(gray(tx) ^ gray(rx))


def ml_detect_d1(y1, inst: RealZcInstance, w1: float, w2: float):
    """Joint ML over both PAM alphabets; ties go to the lexicographically
    smaller ``(s1, s2)``. Returns PAM symbol values."""
    i1, i2 = _detect_joint_idx(np.asarray(y1, dtype=float), inst.g11 * w1, inst.g21 * w2, inst.M)
    s = pam_points(inst.M)
    return s[i1], s[i2]


def ml_detect_d2(y2, inst: RealZcInstance, w2: float):
    i = _detect_single_idx(np.asarray(y2, dtype=float), inst.g22 * w2, inst.M)
    return pam_points(inst.M)[i]


def _detect_joint_idx(y, a, b, M):
    s = pam_points(M)
    levels = (a * s[:, None] + b * s[None, :]).ravel()
    k = np.argmin(np.abs(y[..., None] - levels), axis=-1)
    return k // M, k % M


def _detect_single_idx(y, a, M):
    levels = a * pam_points(M)
    return np.argmin(np.abs(y[..., None] - levels), axis=-1)


class _Counter:
    def __init__(self, n_snr):
        shape = (n_snr, len(STREAMS))
        self.errors = np.zeros(shape, np.int64)
        self.bits = np.zeros(len(STREAMS), np.int64)
        self.symbol_errors = np.zeros(shape, np.int64)
        self.symbols = np.zeros(len(STREAMS), np.int64)

    def add(self, stream, tx, rx, bits_per_symbol):
        k = STREAMS.index(stream)
        self.errors[:, k] += _bit_errors(tx[None, :], rx).sum(axis=-1, dtype=np.int64)
        self.symbol_errors[:, k] += (tx[None, :] != rx).sum(axis=-1, dtype=np.int64)
        self.bits[k] += tx.size * bits_per_symbol
        self.symbols[k] += tx.size


def _log2(M):
    return int(M).bit_length() - 1


def _trial_noma(cfg, h, rng, sigma, counter):
    ch = ComplexZcChannel(*h, cfg.P1, cfg.P2, cfg.M, cfg.Mp)
    rails = decompose(ch)
    S = cfg.symbols_per_trial
    sols = [solve(inst) for inst in rails]
    idx = [rng.integers(0, inst.M, size=(2, S)) for inst in rails]
    noise = rng.standard_normal((2, 2, S))
    for r, (inst, sol) in enumerate(zip(rails, sols)):
        s = pam_points(inst.M)
        i1, i2 = idx[r]
        a, b, c = inst.g11 * sol.w1, inst.g21 * sol.w2, inst.g22 * sol.w2
        y1 = a * s[i1] + b * s[i2] + sigma[:, None] * noise[r, 0]
        y2 = c * s[i2] + sigma[:, None] * noise[r, 1]
        j1, j2 = _detect_joint_idx(y1, a, b, inst.M)
        k2 = _detect_single_idx(y2, c, inst.M)
        nb = _log2(inst.M)
        counter.add("s1@D1", i1, j1, nb)
        if inst.g21 > 0:
            counter.add("s2@D1", i2, j2, nb)
        counter.add("s2@D2", i2, k2, nb)


def _trial_orthogonal(cfg, h, rng, sigma, counter):
    # each user alone in its slot or band with the enlarged constellation
    orders = (cfg.M * cfg.M, cfg.Mp * cfg.Mp)
    p1 = allocate_power(cfg.P1, *orders)
    p2 = allocate_power(cfg.P2, *orders)
    S = cfg.symbols_per_trial
    idx = [rng.integers(0, Mr, size=(2, S)) for Mr in orders]
    noise = rng.standard_normal((2, 3, S))
    if cfg.scheme == "fdma":
        sigma = sigma / math.sqrt(2.0)
    g11, g21, g22 = abs(h[0]), abs(h[1]), abs(h[2])
    for r, Mr in enumerate(orders):
        s = pam_points(Mr)
        w1, w2 = power_cap(p1[r], Mr), power_cap(p2[r], Mr)
        i1, i2 = idx[r]
        nb = _log2(Mr)
        links = (("s1@D1", g11 * w1, i1), ("s2@D1", g21 * w2, i2), ("s2@D2", g22 * w2, i2))
        for k, (stream, gain, tx) in enumerate(links):
            if gain == 0:
                continue
            y = gain * s[tx] + sigma[:, None] * noise[r, k]
            counter.add(stream, tx, _detect_single_idx(y, gain, Mr), nb)


def _psk(N, offset=0.0):
    return np.exp(1j * (2 * np.pi * np.arange(N) + offset) / N)


def _trial_crnoma(cfg, h, rng, sigma, counter):
    N = cfg.M * cfg.Mp
    x1 = math.sqrt(cfg.P1) * _psk(N)
    x2 = math.sqrt(cfg.P2) * _psk(N, np.pi)
    g11, g21, g22 = abs(h[0]), abs(h[1]), abs(h[2])
    S = cfg.symbols_per_trial
    i1, i2 = rng.integers(0, N, size=(2, S))
    noise = rng.standard_normal((2, 2, S))
    n1 = noise[0, 0] + 1j * noise[0, 1]
    n2 = noise[1, 0] + 1j * noise[1, 1]
    nb = _log2(N)
    levels = (g11 * x1[:, None] + g21 * x2[None, :]).ravel()
    z1 = g11 * x1[i1] + g21 * x2[i2] + sigma[:, None] * n1
    k = np.argmin(np.abs(z1[..., None] - levels), axis=-1)
    counter.add("s1@D1", i1, k // N, nb)
    if g21 > 0:
        counter.add("s2@D1", i2, k % N, nb)
    z2 = g22 * x2[i2] + sigma[:, None] * n2
    k2 = np.argmin(np.abs(z2[..., None] - g22 * x2), axis=-1)
    counter.add("s2@D2", i2, k2, nb)


_TRIALS = {"noma": _trial_noma, "tdma": _trial_orthogonal,
           "fdma": _trial_orthogonal, "crnoma": _trial_crnoma}


def _run_trials(cfg: SimConfig, fading: FadingSpec, start: int, stop: int):
    sigma = np.sqrt(1.0 / (2.0 * cfg.rho))
    n = stop - start
    n_snr, n_st = len(cfg.snr_db), len(STREAMS)
    errors = np.zeros((n, n_snr, n_st), np.int64)
    sym_err = np.zeros((n, n_snr, n_st), np.int64)
    bits = np.zeros((n, n_st), np.int64)
    syms = np.zeros((n, n_st), np.int64)
    run = _TRIALS[cfg.scheme]
    for t in range(start, stop):
        rng = trial_rng(cfg.seed, t)
        h = fading.draw(rng)
        c = _Counter(n_snr)
        run(cfg, h, rng, sigma, c)
        errors[t - start], sym_err[t - start] = c.errors, c.symbol_errors
        bits[t - start], syms[t - start] = c.bits, c.symbols
    return errors, sym_err, bits, syms


def run_ber(cfg: SimConfig, fading: FadingSpec, workers: int = 1) -> BerCurve:
    """Simulate ``cfg.trials`` channel realisations of ``cfg.scheme``."""
    if workers <= 1:
        parts = [_run_trials(cfg, fading, 0, cfg.trials)]
    else:
        bounds = np.linspace(0, cfg.trials, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_run_trials, cfg, fading, int(lo), int(hi))
                    for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
            parts = [f.result() for f in futs]
    errors, sym_err, bits, syms = (np.concatenate(x) for x in zip(*parts))
    n_snr = len(cfg.snr_db)
    return BerCurve(
        scheme=cfg.scheme,
        snr_db=np.asarray(cfg.snr_db, dtype=float),
        rho=cfg.rho,
        bits=np.broadcast_to(bits.sum(axis=0), (n_snr, len(STREAMS))).copy(),
        errors=errors.sum(axis=0),
        symbols=np.broadcast_to(syms.sum(axis=0), (n_snr, len(STREAMS))).copy(),
        symbol_errors=sym_err.sum(axis=0),
        trial_errors=errors,
        trial_bits=bits,
    )


def run_baseline(cfg: SimConfig, fading: FadingSpec, workers: int = 1) -> BerCurve:
    if cfg.scheme not in ("tdma", "fdma", "crnoma"):
        raise ValueError(f"{cfg.scheme!r} is not a baseline scheme")
    return run_ber(cfg, fading, workers)


def pam_ser(M: int, d_over_sigma) -> np.ndarray:
    """Exact M-PAM symbol error rate for half-distance d and noise std sigma."""
    q = 0.5 * erfc(np.asarray(d_over_sigma) / math.sqrt(2.0))
    return 2.0 * (1.0 - 1.0 / M) * q
