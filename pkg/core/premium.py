"""
Premium Module
Pure premium of a largest-claims treaty by conditioning on the claim count
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .counting import CountingModel
from .errors import DegenerateSampleError, DomainError, WrongMdaError
from .marginals import EXPONENTIAL, MarginalModel
from .treaties import TreatySpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PremiumMoments:
    """Mean and standard deviation of simulated treaty values"""
    mean: float
    std: float
    n: int


def expected_order_statistic_exponential(n: int, j: int) -> float:
    """
    E of the j-th largest of n unit exponentials: sum_{l=j}^{n} 1/l.
    """
    if not 1 <= j <= n:
        raise DomainError(f"need 1 <= j <= n, got j={j}, n={n}")
    return float(np.sum(1.0 / np.arange(j, n + 1)))


def pure_premium(spec: TreatySpec, counting: CountingModel, t: float,
                 marginal: MarginalModel) -> float:
    """
    E[S(p, t) | N(t) >= p] for unit exponential claims.

    Conditions on N(t) = n and uses E X_{n-j+1:n} = sum_{l=j}^{n} 1/l, so
        E[S | N = n] = sum_j k_j (H_n - H_{j-1}).

    Args:
        spec: Treaty coefficients
        counting: Claim-count model
        t: Horizon, t > 0
        marginal: Must be the unit exponential family

    Returns:
        Expected treaty value given the treaty is defined

    Raises:
        WrongMdaError: non-exponential claims
        DegenerateSampleError: P(N(t) >= p) = 0
    """
    if marginal.family != EXPONENTIAL:
        raise WrongMdaError(f"closed-form premium needs exponential claims, got {marginal.family}")
    if not float(t) > 0:
        raise DomainError(f"horizon t must be positive, got {t}")
    support = counting.count_support(t)
    support = support[support >= spec.p]
    if support.size == 0:
        raise DegenerateSampleError(f"N({t}) < {spec.p} almost surely")
    weights = counting.count_pmf(support, t)
    mass = float(np.sum(weights))
    if mass <= 0.0:
        raise DegenerateSampleError(f"P(N({t}) >= {spec.p}) underflows")

    harmonic = np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, support[-1] + 1))))
    k = spec.array
    prefix = harmonic[np.arange(spec.p)]  # H_{j-1}, j = 1..p
    conditional = spec.c * harmonic[support] - float(np.dot(k, prefix))
    premium = float(np.dot(weights, conditional) / mass)
    logger.debug("pure premium %s t=%s mass=%s -> %s", spec.describe(), t, mass, premium)
    return premium


def premium_moments(values: Sequence[float]) -> PremiumMoments:
    """
    Mean and standard deviation of treaty values (the inputs of expected
    value and standard-deviation premium principles).
    """
    arr = np.asarray(values, dtype=float)
    arr = arr[np.isfinite(arr)]
    if arr.size < 2:
        raise DegenerateSampleError(f"need at least 2 values, got {arr.size}")
    return PremiumMoments(float(np.mean(arr)), float(np.std(arr, ddof=1)), int(arr.size))
