"""
Counting Module
Claim-count processes N(t) with N(t)/t -> Z, independent of the claim sizes
"""

from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np
from scipy import special, stats

from .errors import DomainError
from .streams import RandomStream

DETERMINISTIC = "deterministic"
POISSON = "poisson"
MIXED_POISSON = "mixed_poisson"

KINDS = (DETERMINISTIC, POISSON, MIXED_POISSON)


def _floor_count(product):
    """floor(rate * t) after rounding the product to 9 decimals"""
    return np.floor(np.round(product, 9))


@dataclass(frozen=True)
class CountDraw:
    """Coupled draw of the claim count and the realized limit variable Z"""
    n: int
    z: float


@dataclass(frozen=True)
class CountingModel:
    """
    Law of {N(t)} and of Z = lim N(t)/t.

    Kinds:
        deterministic: N(t) = floor(rate * t), Z = rate; the product is rounded
            to 9 decimals first so 0.29 * 100 counts 29
        poisson: homogeneous Poisson with intensity rate, Z = rate
        mixed_poisson: Z ~ Gamma(gamma_shape, rate=gamma_rate), N(t) ~ Poisson(Z t) given Z
    """
    kind: str = POISSON
    rate: float = 1.0
    gamma_shape: float = 1.0
    gamma_rate: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown counting kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in (DETERMINISTIC, POISSON) and not (np.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"{self.kind} needs lambda > 0, got {self.rate}")
        if self.kind == MIXED_POISSON:
            if not (self.gamma_shape > 0 and self.gamma_rate > 0):
                raise DomainError(
                    f"gamma mixing needs shape > 0 and rate > 0, got ({self.gamma_shape}, {self.gamma_rate})"
                )

    @classmethod
    def deterministic(cls, rate: float) -> "CountingModel":
        return cls(DETERMINISTIC, rate=float(rate))

    @classmethod
    def poisson(cls, rate: float) -> "CountingModel":
        return cls(POISSON, rate=float(rate))

    @classmethod
    def mixed_poisson(cls, shape: float, rate: float) -> "CountingModel":
        return cls(MIXED_POISSON, gamma_shape=float(shape), gamma_rate=float(rate))

    @classmethod
    def from_dict(cls, params: Dict[str, Any]) -> "CountingModel":
        kind = params.get("kind", POISSON)
        if kind == MIXED_POISSON:
            return cls.mixed_poisson(params.get("gamma_shape"), params.get("gamma_rate"))
        return cls(kind, rate=float(params.get("lambda", 1.0)))

    @property
    def z_is_degenerate(self) -> bool:
        return self.kind != MIXED_POISSON

    # Sampling

    def sample_mixing_z(self, rng: RandomStream) -> float:
        """
        Realized limit variable Z.

        For mixed Poisson this is the first draw taken from the stream, the
        same one sample_count and sample_with_mixing take, so a reset stream
        exposes the same Z to both.
        """
        if self.kind == MIXED_POISSON:
            return float(rng.gamma(self.gamma_shape, 1.0 / self.gamma_rate))
        return float(self.rate)

    def sample_mixing_z_many(self, rng: RandomStream, size: int) -> np.ndarray:
        """size independent draws of Z"""
        if self.kind == MIXED_POISSON:
            return rng.gamma(self.gamma_shape, 1.0 / self.gamma_rate, size=int(size))
        return np.full(int(size), float(self.rate))

    def sample_with_mixing(self, t: float, rng: RandomStream) -> CountDraw:
        """
        Coupled draw (N(t), Z).

        Raises:
            DomainError: if t <= 0
        """
        t = float(t)
        if not t > 0.0:
            raise DomainError(f"horizon t must be positive, got {t}")
        z = self.sample_mixing_z(rng)
        if self.kind == DETERMINISTIC:
            return CountDraw(int(_floor_count(self.rate * t)), z)
        # Generator.poisson: multiplication method below mean 10, PTRS rejection above
        return CountDraw(int(rng.poisson(z * t)), z)

    def sample_count(self, t: float, rng: RandomStream) -> int:
        """N(t) for one replicate"""
        return self.sample_with_mixing(t, rng).n

    def sample_path(self, horizons: Sequence[float], rng: RandomStream) -> np.ndarray:
        """
        N on an ascending horizon grid from one path (independent increments
        given Z), so counts are nondecreasing in t.
        """
        ts = np.asarray(horizons, dtype=float)
        if ts.size == 0:
            return np.empty(0, dtype=np.int64)
        if np.any(ts <= 0) or np.any(np.diff(ts) < 0):
            raise DomainError("horizons must be positive and ascending")
        z = self.sample_mixing_z(rng)
        if self.kind == DETERMINISTIC:
            return _floor_count(self.rate * ts).astype(np.int64)
        steps = np.diff(ts, prepend=0.0)
        return np.cumsum(rng.poisson(z * steps)).astype(np.int64)

    # Exact law

    def count_pmf(self, k: np.ndarray, t: float) -> np.ndarray:
        """
        P(N(t) = k).

        Gamma mixing gives a negative binomial with size gamma_shape and
        success probability gamma_rate / (gamma_rate + t).
        """
        ks = np.asarray(k)
        t = float(t)
        if self.kind == DETERMINISTIC:
            return (ks == _floor_count(self.rate * t)).astype(float)
        if self.kind == POISSON:
            return stats.poisson.pmf(ks, self.rate * t)
        p = self.gamma_rate / (self.gamma_rate + t)
        return stats.nbinom.pmf(ks, self.gamma_shape, p)

    def count_support(self, t: float, tail: float = 1e-15) -> np.ndarray:
        """Integers carrying all but `tail` of the mass of N(t)"""
        t = float(t)
        if self.kind == DETERMINISTIC:
            n = int(_floor_count(self.rate * t))
            return np.array([n])
        if self.kind == POISSON:
            dist = stats.poisson(self.rate * t)
        else:
            dist = stats.nbinom(self.gamma_shape, self.gamma_rate / (self.gamma_rate + t))
        lo = int(max(0, dist.ppf(tail)))
        hi = int(dist.isf(tail)) + 1
        return np.arange(lo, hi + 1)

    def log_z_moments(self):
        """(E ln Z, Var ln Z)"""
        if self.kind == MIXED_POISSON:
            return (float(special.digamma(self.gamma_shape) - np.log(self.gamma_rate)),
                    float(special.polygamma(1, self.gamma_shape)))
        return (float(np.log(self.rate)), 0.0)