"""
Stats Module
Empirical distributions, Kolmogorov-Smirnov distances, streaming moments and correlation
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import DegenerateSampleError, DomainError

KS_COEFF_99 = 1.628


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted sample; use EmpiricalSample.of() to build from raw values"""
    values: np.ndarray

    @classmethod
    def of(cls, values: Sequence[float]) -> "EmpiricalSample":
        arr = np.asarray(values, dtype=float).ravel()
        if np.isnan(arr).any():
            raise DomainError("sample contains NaN")
        return cls(np.sort(arr))

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def ecdf(self, x) -> np.ndarray:
        """Fraction of the sample <= x"""
        return np.searchsorted(self.values, x, side="right") / self.n


def _as_sample(a) -> EmpiricalSample:
    return a if isinstance(a, EmpiricalSample) else EmpiricalSample.of(a)


def ks_two_sample(a, b) -> Tuple[float, float]:
    """
    Two-sample Kolmogorov-Smirnov distance.

    Args:
        a: EmpiricalSample or raw values
        b: EmpiricalSample or raw values

    Returns:
        (sup |F_a - F_b|, 99% critical value 1.628 sqrt((n + m) / (n m)))

    Raises:
        DomainError: empty sample
    """
    a = _as_sample(a)
    b = _as_sample(b)
    if a.n == 0 or b.n == 0:
        raise DomainError("KS needs two nonempty samples")
    # Both ECDFs are right-continuous steps; the sup is attained at a data point
    points = np.concatenate((a.values, b.values))
    diff = np.abs(a.ecdf(points) - b.ecdf(points))
    critical = KS_COEFF_99 * math.sqrt((a.n + b.n) / (a.n * b.n))
    return float(diff.max()), critical


def ks_one_sample(a, cdf: Callable[[np.ndarray], np.ndarray]) -> Tuple[float, float]:
    """
    One-sample KS distance against a continuous CDF.

    Returns:
        (max_i max(i/n - F(x_i), F(x_i) - (i-1)/n), 1.628 / sqrt(n))
    """
    a = _as_sample(a)
    if a.n == 0:
        raise DomainError("KS needs a nonempty sample")
    f = np.asarray(cdf(a.values), dtype=float)
    i = np.arange(1, a.n + 1)
    upper = np.abs(i / a.n - f)
    lower = np.abs(f - (i - 1) / a.n)
    return float(max(upper.max(), lower.max())), KS_COEFF_99 / math.sqrt(a.n)


class StreamingMoments:
    """
    One-pass mean and variance with mergeable partial results.

    Each chunk is reduced with compensated summation (math.fsum) and
    combined through the pairwise update of Chan, Golub and LeVeque.
    """

    def __init__(self):
        self.n = 0
        self._mean = 0.0
        self._m2 = 0.0

    def add(self, value: float) -> None:
        self.add_many([value])

    def add_many(self, values: Sequence[float]) -> None:
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            return
        mean = math.fsum(arr) / arr.size
        m2 = math.fsum((arr - mean) ** 2)
        self._combine(arr.size, mean, m2)

    def merge_with(self, other: "StreamingMoments") -> None:
        if other.n:
            self._combine(other.n, other._mean, other._m2)

    def _combine(self, n_b: int, mean_b: float, m2_b: float) -> None:
        if self.n == 0:
            self.n, self._mean, self._m2 = n_b, mean_b, m2_b
            return
        n = self.n + n_b
        delta = mean_b - self._mean
        self._mean += delta * n_b / n
        self._m2 += m2_b + delta * delta * self.n * n_b / n
        self.n = n

    def mean(self) -> float:
        if self.n == 0:
            raise DegenerateSampleError("no values")
        return self._mean

    def variance(self) -> float:
        """Unbiased variance"""
        if self.n < 2:
            raise DegenerateSampleError(f"variance needs n >= 2, got {self.n}")
        return max(self._m2, 0.0) / (self.n - 1)

    def standard_error(self) -> float:
        return math.sqrt(self.variance() / self.n)


def sample_moments(a) -> Tuple[float, float, float]:
    """
    (mean, unbiased variance, standard error of the mean).

    Raises:
        DegenerateSampleError: n < 2
    """
    values = a.values if isinstance(a, EmpiricalSample) else np.asarray(a, dtype=float).ravel()
    if values.size < 2:
        raise DegenerateSampleError(f"moments need n >= 2, got {values.size}")
    acc = StreamingMoments()
    # fixed chunking keeps the result independent of how callers batch
    for start in range(0, values.size, 1 << 16):
        acc.add_many(values[start:start + (1 << 16)])
    return acc.mean(), acc.variance(), acc.standard_error()


def pearson_corr(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Product-moment correlation, clipped to [-1, 1].

    Raises:
        DomainError: unequal lengths
        DegenerateSampleError: n < 2 or a zero variance
    """
    xs = np.asarray(x, dtype=float).ravel()
    ys = np.asarray(y, dtype=float).ravel()
    if xs.size != ys.size:
        raise DomainError(f"length mismatch: {xs.size} vs {ys.size}")
    if xs.size < 2:
        raise DegenerateSampleError(f"correlation needs n >= 2, got {xs.size}")
    dx = xs - math.fsum(xs) / xs.size
    dy = ys - math.fsum(ys) / ys.size
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSampleError("correlation undefined for a constant sample")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))
