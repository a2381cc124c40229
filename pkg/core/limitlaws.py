"""
Limit Laws Module
Extremal variates, their stochastic representations and the limit laws of normalized treaties
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .counting import CountingModel
from .dependence import DependenceModel
from .errors import DomainError, UnsupportedDependenceError, WrongMdaError
from .marginals import FRECHET, GUMBEL, WEIBULL, MarginalModel, MdaClass
from .streams import RandomStream
from .treaties import TreatySpec

logger = logging.getLogger(__name__)

EULER_GAMMA = float(np.euler_gamma)
DEFAULT_TRUNCATION = 100_000
_DIRECT_CHUNK_CELLS = 1 << 22
_GUMBEL_LAW = MdaClass(GUMBEL)


@dataclass(frozen=True)
class ArrivalTimes:
    """Gamma_1 < ... < Gamma_m: partial sums of iid unit exponentials, one row per draw"""
    gammas: np.ndarray


@dataclass(frozen=True)
class ExtremalVariate:
    """
    Draws of an m-dimensional extremal variate.

    Attributes:
        values: Array (size, m); each row is strictly decreasing
        law: Standard limit law of the components
    """
    values: np.ndarray
    law: MdaClass

    @property
    def m(self) -> int:
        return int(self.values.shape[1])

    @property
    def size(self) -> int:
        return int(self.values.shape[0])

    def component(self, j: int) -> np.ndarray:
        """All draws of X_j (1-based)"""
        return self.values[:, j - 1]


@dataclass(frozen=True)
class TreatyLimitSpec:
    """
    Everything the limit samplers need for a pair of treaties.

    kbar_i[l-1] = (k_1 + ... + k_l) / l and K_p = K - sum_{l<=p} 1/l are
    recomputed from the coefficients.
    """
    spec1: TreatySpec
    spec2: TreatySpec
    law1: MdaClass
    law2: MdaClass
    mixing: CountingModel
    product_limit: bool = True

    @property
    def gamma1(self) -> float:
        return self.law1.gamma

    @property
    def gamma2(self) -> float:
        return self.law2.gamma

    @property
    def delta1(self) -> int:
        return int(self.law1.kind == GUMBEL)

    @property
    def delta2(self) -> int:
        return int(self.law2.kind == GUMBEL)

    @property
    def kbar1(self) -> np.ndarray:
        return _kbar(self.spec1)

    @property
    def kbar2(self) -> np.ndarray:
        return _kbar(self.spec2)

    @property
    def Kp(self) -> float:
        return harmonic_K(self.spec1.p)

    @property
    def Kq(self) -> float:
        return harmonic_K(self.spec2.p)

    @property
    def depth(self) -> int:
        return max(self.spec1.p, self.spec2.p)

    @property
    def both_gumbel(self) -> bool:
        return self.law1.kind == GUMBEL and self.law2.kind == GUMBEL


@dataclass(frozen=True)
class LimitDraws:
    """Draws of the limit pair with the realized Z of each row"""
    z: np.ndarray
    s1: np.ndarray
    s2: np.ndarray


@dataclass(frozen=True)
class LimitMoments:
    """Exact first and second moments of the limit pair"""
    mean1: float
    var1: float
    mean2: float
    var2: float
    cov12: float


def _kbar(spec: TreatySpec) -> np.ndarray:
    return np.cumsum(spec.array) / np.arange(1, spec.p + 1)


def build_limit_spec(spec1: TreatySpec, spec2: TreatySpec, marginal_x: MarginalModel,
                     marginal_y: MarginalModel, mixing: CountingModel,
                     dependence: Optional[DependenceModel] = None) -> TreatyLimitSpec:
    """TreatyLimitSpec from the claim and counting models"""
    dependence = dependence or DependenceModel()
    return TreatyLimitSpec(
        spec1=spec1,
        spec2=spec2,
        law1=marginal_x.classify_mda(),
        law2=marginal_y.classify_mda(),
        mixing=mixing,
        product_limit=dependence.limit_is_product,
    )


# Constants

def harmonic_K(i: int) -> float:
    """
    K_i = K - sum_{l=1}^{i} 1/l with K the Euler-Mascheroni constant (K_0 = K).

    The sum runs in ascending l.
    """
    i = int(i)
    if i < 0:
        raise DomainError(f"i must be >= 0, got {i}")
    total = 0.0
    for l in range(1, i + 1):
        total += 1.0 / l
    return EULER_GAMMA - total


def extremal_moments(i: int) -> Tuple[float, float]:
    """
    Mean and variance of the i-th component of the Gumbel extremal variate.

    mean = K - sum_{l<i} 1/l = -digamma(i)
    var  = sum_{l>=i} 1/l^2 = trigamma(i)
    """
    i = int(i)
    if i < 1:
        raise DomainError(f"component index must be >= 1, got {i}")
    inv_sq = 0.0
    for l in range(1, i):
        inv_sq += 1.0 / (l * l)
    return harmonic_K(i - 1), np.pi ** 2 / 6.0 - inv_sq


def uncorrected_moments(i: int) -> Tuple[float, float]:
    """
    The uncorrected values (1 + K_i, pi^2/6 + 1 - sum_{l<=i} 1/l^2).

    They agree with extremal_moments only at i = 1; kept for comparison.
    """
    i = int(i)
    if i < 1:
        raise DomainError(f"component index must be >= 1, got {i}")
    inv_sq = 0.0
    for l in range(1, i + 1):
        inv_sq += 1.0 / (l * l)
    return 1.0 + harmonic_K(i), np.pi ** 2 / 6.0 + 1.0 - inv_sq


# Extremal variates

def sample_arrival_times(m: int, rng: RandomStream, size: int = 1) -> ArrivalTimes:
    """First m arrival times of a unit-rate Poisson process, `size` independent rows"""
    m = int(m)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return ArrivalTimes(np.cumsum(rng.standard_exponential((int(size), m)), axis=1))


def sample_gumbel_extremal(m: int, rng: RandomStream, size: int = 1) -> ExtremalVariate:
    """
    Reference sampler of the m-dimensional Gumbel extremal variate:
    X_j = -ln Gamma_j.
    """
    arrivals = sample_arrival_times(m, rng, size)
    return ExtremalVariate(-np.log(arrivals.gammas), _GUMBEL_LAW)


def transform_extremal(g: ExtremalVariate, target: MdaClass) -> ExtremalVariate:
    """
    Map a Gumbel extremal variate to the Frechet or Weibull law.

    Frechet(alpha): exp(G / alpha); Weibull(alpha): -exp(-G / alpha).
    Both maps are increasing, so the ordering is kept.
    """
    if g.law.kind != GUMBEL:
        raise WrongMdaError(f"transform expects a Gumbel variate, got {g.law.kind}")
    if target.kind == FRECHET:
        return ExtremalVariate(np.exp(g.values / target.alpha), target)
    if target.kind == WEIBULL:
        return ExtremalVariate(-np.exp(-g.values / target.alpha), target)
    return g


def sample_extremal(law: MdaClass, m: int, rng: RandomStream, size: int = 1) -> ExtremalVariate:
    """Extremal variate of any standard law"""
    return transform_extremal(sample_gumbel_extremal(m, rng, size), law)


def extremal_log_density(x: np.ndarray, law: MdaClass = _GUMBEL_LAW) -> float:
    """
    ln h_m(x) = -exp(-x_m) - sum_i x_i for the Gumbel extremal variate.

    Raises:
        DomainError: x not strictly decreasing
        WrongMdaError: non-Gumbel law
    """
    if law.kind != GUMBEL:
        raise WrongMdaError(f"log density implemented for the Gumbel law, got {law.kind}")
    xs = np.asarray(x, dtype=float).ravel()
    if xs.size == 0:
        raise DomainError("need at least one component")
    if np.any(np.diff(xs) >= 0):
        raise DomainError("extremal density is zero unless x_1 > x_2 > ... > x_m")
    return float(-np.exp(-xs[-1]) - np.sum(xs))


def sample_spacings_representation(m: int, rng: RandomStream, size: int = 1) -> ExtremalVariate:
    """
    Gumbel extremal variate built from its lowest component and spacings.

    X_m = -ln Gamma(m, 1); X_j = X_{j+1} + E_j / j for j = m-1, ..., 1.
    """
    m = int(m)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    size = int(size)
    bottom = -np.log(rng.gamma(m, 1.0, size=size))
    values = np.empty((size, m))
    values[:, m - 1] = bottom
    if m > 1:
        spacings = rng.standard_exponential((size, m - 1)) / np.arange(1, m)
        upward = np.cumsum(spacings[:, ::-1], axis=1)[:, ::-1]
        values[:, :m - 1] = bottom[:, None] + upward
    return ExtremalVariate(values, _GUMBEL_LAW)


# Treaty limits

def _require_product(spec: TreatyLimitSpec):
    if not spec.product_limit:
        raise UnsupportedDependenceError(
            "limit H is not a product law; only asymptotically independent claims are supported"
        )


def sample_treaty_limit(spec: TreatyLimitSpec, rng: RandomStream, size: int = 1) -> LimitDraws:
    """
    Draws of (Z^g1 sum k_j1 X_j + c1 d1 ln Z, Z^g2 sum k_j2 Y_j + c2 d2 ln Z).

    One Z is shared by both coordinates of a row; (X_j) and (Y_j) are
    independent extremal variates of the marginal laws.

    Raises:
        UnsupportedDependenceError: limit H is not a product law
    """
    _require_product(spec)
    size = int(size)
    z = spec.mixing.sample_mixing_z_many(rng, size)
    log_z = np.log(z)
    depth = spec.depth
    x = sample_extremal(spec.law1, depth, rng, size).values[:, :spec.spec1.p]
    y = sample_extremal(spec.law2, depth, rng, size).values[:, :spec.spec2.p]
    s1 = np.power(z, spec.gamma1) * (x @ spec.spec1.array) + spec.spec1.c * spec.delta1 * log_z
    s2 = np.power(z, spec.gamma2) * (y @ spec.spec2.array) + spec.spec2.c * spec.delta2 * log_z
    return LimitDraws(z, s1, s2)


def _series_tail(p: int, truncation: int, rng: RandomStream, size: int, series: str) -> np.ndarray:
    """Draws of sum_{j=p+1}^{L} (E_j - 1) / j"""
    if truncation == p:
        return np.zeros(size)
    centre = float(np.sum(1.0 / np.arange(p + 1, truncation + 1)))
    if series == "exact":
        # sum_{j=p+1}^{L} E_j / j has the law of -ln Beta(p+1, L-p)
        return -np.log(rng.beta(p + 1, truncation - p, size=size)) - centre
    weights = 1.0 / np.arange(p + 1, truncation + 1)
    rows = max(1, _DIRECT_CHUNK_CELLS // weights.size)
    out = np.empty(size)
    for start in range(0, size, rows):
        stop = min(size, start + rows)
        block = rng.standard_exponential((stop - start, weights.size))
        out[start:stop] = block @ weights
    return out - centre


def sample_prop3_series(spec: TreatyLimitSpec, truncation: int = DEFAULT_TRUNCATION,
                        rng: Optional[RandomStream] = None, size: int = 1,
                        series: str = "exact") -> LimitDraws:
    """
    Series representation of the Gumbel/Gumbel treaty limit, truncated at L:

        sum_{l<=p} kbar_l E_l + c [sum_{j=p+1}^{L} (E_j - 1)/j + ln Z + K_p]

    evaluated independently per coordinate with a shared ln Z. The dropped
    tail has mean 0 and variance c^2 sum_{j>L} 1/j^2 < c^2 / L.

    Args:
        spec: Limit spec with two Gumbel-class marginals
        truncation: L >= max(p, q)
        rng: Random stream
        size: Number of draws
        series: "exact" draws the truncated sum through one Beta variate;
            "direct" sums L - p exponentials per draw

    Raises:
        WrongMdaError: a marginal is not Gumbel-class
        DomainError: L < max(p, q) or unknown series method
    """
    if rng is None:
        raise DomainError("a random stream is required")
    if not spec.both_gumbel:
        raise WrongMdaError("series representation needs two Gumbel-class marginals")
    _require_product(spec)
    truncation = int(truncation)
    if truncation < spec.depth:
        raise DomainError(f"truncation L={truncation} must be >= {spec.depth}")
    if series not in ("exact", "direct"):
        raise DomainError(f"unknown series method {series!r}")
    size = int(size)
    z = spec.mixing.sample_mixing_z_many(rng, size)
    log_z = np.log(z)
    coords = []
    for treaty, kbar, big_k in ((spec.spec1, spec.kbar1, spec.Kp), (spec.spec2, spec.kbar2, spec.Kq)):
        lead = rng.standard_exponential((size, treaty.p)) @ kbar
        tail = _series_tail(treaty.p, truncation, rng, size, series)
        coords.append(lead + treaty.c * (tail + log_z + big_k))
    logger.debug("series draws size=%s L=%s method=%s", size, truncation, series)
    return LimitDraws(z, coords[0], coords[1])


def treaty_limit_moments(spec: TreatyLimitSpec,
                         truncation: Optional[int] = None) -> LimitMoments:
    """
    Exact mean, variance and covariance of the Gumbel/Gumbel limit pair.

        mean_i = sum kbar_l + c (E ln Z + K_p)
        var_i  = sum kbar_l^2 + c^2 (sum_{p<j<=L} 1/j^2 + Var ln Z)
        cov    = c1 c2 Var ln Z

    With truncation=None the series is untruncated.
    """
    if not spec.both_gumbel:
        raise WrongMdaError("closed-form limit moments need two Gumbel-class marginals")
    e_log_z, var_log_z = spec.mixing.log_z_moments()

    def coordinate(treaty: TreatySpec, kbar: np.ndarray, big_k: float) -> Tuple[float, float]:
        if truncation is None:
            tail_var = float(np.pi ** 2 / 6.0 - np.sum(1.0 / np.arange(1, treaty.p + 1) ** 2))
        else:
            tail_var = float(np.sum(1.0 / np.arange(treaty.p + 1, int(truncation) + 1) ** 2))
        mean = float(np.sum(kbar)) + treaty.c * (e_log_z + big_k)
        var = float(np.sum(kbar ** 2)) + treaty.c ** 2 * (tail_var + var_log_z)
        return mean, var

    mean1, var1 = coordinate(spec.spec1, spec.kbar1, spec.Kp)
    mean2, var2 = coordinate(spec.spec2, spec.kbar2, spec.Kq)
    return LimitMoments(mean1, var1, mean2, var2, spec.spec1.c * spec.spec2.c * var_log_z)

