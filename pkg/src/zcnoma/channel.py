"""Complex Z-channel, its split into two real scalar Z-channels, and PAM sets.

Receiver D1 sees ``h11 x1 + h21 x2``, receiver D2 sees ``h22 x2``. With the
transmitters pre-rotating by ``-arg(h11)`` and ``-arg(h21)`` and D2 rotating
by ``arg(h21/h22)``, each quadrature rail becomes a real channel whose gains
are the link magnitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ChannelError(ValueError):
    """Degenerate or unsupported channel description."""


def _check_order(M: int, name: str = "M") -> None:
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 2 or M % 2:
        raise ChannelError(f"{name} must be an even integer >= 2, got {M!r}")


def pam_points(M: int) -> np.ndarray:
    """Unit-spaced M-PAM alphabet ``{±1, ±3, ..., ±(M-1)}``, ascending."""
    _check_order(M)
    return np.arange(-(M - 1), M, 2, dtype=float)


def power_cap(p: float, M: int) -> float:
    """Largest scaling w with ``E[(w s)^2] <= p`` for uniform M-PAM."""
    return math.sqrt(3.0 * p / (M * M - 1))


@dataclass(frozen=True)
class PamConstellation:
    order: int
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "points", pam_points(self.order))


@dataclass(frozen=True)
class RealZcInstance:
    """One real scalar Z-channel: gains, per-rail power budgets, PAM order."""

    g11: float
    g21: float
    g22: float
    p1: float
    p2: float
    M: int

    def __post_init__(self):
        _check_order(self.M)
        for name in ("g11", "g21", "g22"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ChannelError(f"{name} must be finite and >= 0, got {v!r}")
        if self.g11 == 0 or self.g22 == 0:
            raise ChannelError("direct links g11 and g22 must be non-zero")
        for name in ("p1", "p2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ChannelError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def cap1(self) -> float:
        return power_cap(self.p1, self.M)

    @property
    def cap2(self) -> float:
        return power_cap(self.p2, self.M)

    def scaled(self, c: float) -> "RealZcInstance":
        return RealZcInstance(self.g11 * c, self.g21 * c, self.g22 * c,
                              self.p1, self.p2, self.M)


@dataclass(frozen=True)
class ComplexZcChannel:
    h11: complex
    h21: complex
    h22: complex
    P1: float
    P2: float
    M: int
    Mp: int

    def __post_init__(self):
        _check_order(self.M, "M")
        _check_order(self.Mp, "Mp")
        if abs(self.h11) == 0 or abs(self.h22) == 0:
            raise ChannelError("direct links h11 and h22 must be non-zero")
        if not (self.P1 > 0 and self.P2 > 0):
            raise ChannelError("power budgets must be positive")

    @classmethod
    def from_json(cls, doc: dict) -> "ComplexZcChannel":
        """Build from ``{h11: [re, im], ..., P1, P2, M, Mp}``."""
        def cx(v):
            if isinstance(v, (list, tuple)):
                re, im = v
                return complex(float(re), float(im))
            return complex(v)
        return cls(cx(doc["h11"]), cx(doc["h21"]), cx(doc["h22"]),
                   float(doc["P1"]), float(doc["P2"]),
                   int(doc["M"]), int(doc.get("Mp", doc["M"])))

    def to_json(self) -> dict:
        return {
            "h11": [self.h11.real, self.h11.imag],
            "h21": [self.h21.real, self.h21.imag],
            "h22": [self.h22.real, self.h22.imag],
            "P1": self.P1, "P2": self.P2, "M": self.M, "Mp": self.Mp,
        }


@dataclass(frozen=True)
class NoiseModel:
    """Per-real-dimension noise variance and the matching SNR 1/(2 sigma^2)."""

    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("noise variance must be positive")

    @property
    def rho(self) -> float:
        return 1.0 / (2.0 * self.sigma2)

    @classmethod
    def from_rho(cls, rho: float) -> "NoiseModel":
        return cls(1.0 / (2.0 * rho))

    @classmethod
    def from_db(cls, snr_db: float) -> "NoiseModel":
        return cls.from_rho(10.0 ** (snr_db / 10.0))


def allocate_power(P: float, M: int, Mp: int) -> tuple[float, float]:
    """Split a complex-symbol budget between in-phase and quadrature rails so
    both PAM rails get the same minimum distance."""
    _check_order(M, "M")
    _check_order(Mp, "Mp")
    denom = M * M + Mp * Mp - 2
    p = (M * M - 1) * P / denom
    return p, P - p


def decompose(ch: ComplexZcChannel) -> tuple[RealZcInstance, RealZcInstance]:
    """In-phase and quadrature real instances of a complex Z-channel."""
    # abs() on complex is hypot-based, no overflow for large parts
    g11, g21, g22 = abs(ch.h11), abs(ch.h21), abs(ch.h22)
    p1, p1q = allocate_power(ch.P1, ch.M, ch.Mp)
    p2, p2q = allocate_power(ch.P2, ch.M, ch.Mp)
    return (RealZcInstance(g11, g21, g22, p1, p2, ch.M),
            RealZcInstance(g11, g21, g22, p1q, p2q, ch.Mp))


@dataclass(frozen=True)
class SumConstellation:
    """Noise-free received values. ``d1`` is indexed [i1, i2] over the PAM
    alphabet of each user; ``d2`` is indexed by user 2's symbol."""

    d1: np.ndarray
    d2: np.ndarray

    @property
    def d1_points(self) -> np.ndarray:
        return self.d1.ravel()


def sum_constellation(inst: RealZcInstance, w1: float, w2: float) -> SumConstellation:
    s = pam_points(inst.M)
    d1 = inst.g11 * w1 * s[:, None] + inst.g21 * w2 * s[None, :]
    return SumConstellation(d1, inst.g22 * w2 * s)
