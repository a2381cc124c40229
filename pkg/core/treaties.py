"""
Treaties Module
Upper order statistics of a claim sample and generalized linear largest-claims treaties
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .errors import DomainError, InsufficientSampleError
from .marginals import MarginalModel
from .streams import RandomStream

LCR = "lcr"
ECOMOR = "ecomor"

SCHEMES = (LCR, ECOMOR)


@dataclass(frozen=True)
class TreatySpec:
    """
    Treaty paying sum_j coeffs[j] * (j-th largest claim), j = 1..p.

    Attributes:
        coeffs: k_1..k_p
        p: Order depth (len(coeffs))
        c: Exact sum of the coefficients
        scheme: Preset name, if built from one
    """
    coeffs: Tuple[float, ...]
    scheme: Optional[str] = None
    p: int = field(init=False)
    c: float = field(init=False)

    def __post_init__(self):
        coeffs = tuple(float(k) for k in self.coeffs)
        if not coeffs:
            raise DomainError("treaty needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise DomainError(f"treaty coefficients must be finite, got {coeffs}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "p", len(coeffs))
        object.__setattr__(self, "c", math.fsum(coeffs))

    @classmethod
    def from_dict(cls, params: Dict[str, Any], depth_key: str = "p") -> "TreatySpec":
        """Build from `scheme` + depth or from explicit `coeffs` (exactly one)"""
        scheme = params.get("scheme")
        coeffs = params.get("coeffs")
        if (scheme is None) == (coeffs is None):
            raise DomainError("give exactly one of scheme or coeffs")
        if coeffs is not None:
            return cls(tuple(coeffs))
        depth = params.get(depth_key)
        if depth is None:
            raise DomainError(f"scheme {scheme!r} needs {depth_key}")
        return preset_coeffs(scheme, int(depth))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def describe(self) -> str:
        if self.scheme:
            return f"{self.scheme.upper()}({self.p})"
        return "coeffs(" + ", ".join(f"{k:g}" for k in self.coeffs) + ")"


def preset_coeffs(scheme: str, p: int) -> TreatySpec:
    """
    Coefficient vector of a named treaty.

    Args:
        scheme: "lcr" (largest claims) or "ecomor"
        p: Order depth; >= 1 for LCR, >= 2 for ECOMOR

    Returns:
        TreatySpec with LCR -> (1, ..., 1), ECOMOR -> (1, ..., 1, -(p-1))

    Raises:
        DomainError: unknown scheme or invalid p
    """
    scheme = str(scheme).lower()
    p = int(p)
    if scheme == LCR:
        if p < 1:
            raise DomainError(f"LCR needs p >= 1, got {p}")
        return TreatySpec(tuple([1.0] * p), scheme=LCR)
    if scheme == ECOMOR:
        if p < 2:
            raise DomainError(f"ECOMOR needs p >= 2, got {p}")
        return TreatySpec(tuple([1.0] * (p - 1) + [-(p - 1.0)]), scheme=ECOMOR)
    raise DomainError(f"unknown treaty scheme {scheme!r}; expected one of {SCHEMES}")


@dataclass(frozen=True)
class OrderStats:
    """Top m values of a sample, descending, and the sample size n"""
    values: np.ndarray
    n: int

    @property
    def m(self) -> int:
        return int(self.values.shape[0])

    def shifted(self, d: float) -> "OrderStats":
        return OrderStats(self.values + d, self.n)

    def scaled(self, s: float) -> "OrderStats":
        return OrderStats(self.values * s, self.n)


def top_order_statistics(sample: np.ndarray, m: int) -> OrderStats:
    """
    The m largest values in descending order by partial selection.

    Args:
        sample: 1-d array, length >= 1
        m: Number of order statistics, 1 <= m

    Returns:
        OrderStats

    Raises:
        InsufficientSampleError: m > len(sample)
        DomainError: m < 1
    """
    values = np.asarray(sample, dtype=float).ravel()
    n = values.shape[0]
    m = int(m)
    if m < 1:
        raise DomainError(f"need m >= 1 order statistics, got {m}")
    if m > n:
        raise InsufficientSampleError(m, n)
    if m == n:
        top = values.copy()
    else:
        top = np.partition(values, n - m)[n - m:]
    return OrderStats(np.sort(top)[::-1], n)


def sample_top_claims_renyi(model: MarginalModel, n: int, m: int,
                            rng: RandomStream) -> OrderStats:
    """
    Top m of n iid claims drawn directly, in O(m).

    The descending exponential order statistics are W_j = sum_{l=j}^{n} E_l / l;
    the block sum_{l=m+1}^{n} E_l / l is drawn at once as -ln Beta(m+1, n-m).
    Claims follow as isf(exp(-W_j)).

    Raises:
        InsufficientSampleError: m > n
    """
    n = int(n)
    m = int(m)
    if m < 1:
        raise DomainError(f"need m >= 1 order statistics, got {m}")
    if m > n:
        raise InsufficientSampleError(m, n)
    tail = -np.log(rng.beta(m + 1, n - m)) if n > m else 0.0
    spacings = rng.standard_exponential(m) / np.arange(1, m + 1)
    w = tail + np.cumsum(spacings[::-1])[::-1]
    return OrderStats(model._isf(np.exp(-w)), n)


def treaty_value(order_stats: OrderStats, spec: TreatySpec) -> float:
    """
    sum_j coeffs[j] * values[j].

    Raises:
        InsufficientSampleError: fewer than p order statistics
    """
    if order_stats.m < spec.p:
        raise InsufficientSampleError(spec.p, order_stats.m)
    return float(np.dot(spec.array, order_stats.values[:spec.p]))


def normalize_treaty(s: float, a: float, b: float, c: float) -> float:
    """
    (s - b c) / a.

    Raises:
        DomainError: a <= 0
    """
    if not a > 0:
        raise DomainError(f"scale a must be positive, got {a}")
    return (float(s) - float(b) * float(c)) / float(a)
