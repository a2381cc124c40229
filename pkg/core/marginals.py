"""
Claim-Size Marginals
Closed-form univariate claim distributions with exact inverses and MDA classification
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Union

import numpy as np

from .errors import DomainError
from .streams import RandomStream

ArrayLike = Union[float, np.ndarray]

PARETO = "pareto"
BOUNDED_POWER = "bounded_power"
EXPONENTIAL = "exponential"
EXP_TAIL = "exp_tail"

FAMILIES = (PARETO, BOUNDED_POWER, EXPONENTIAL, EXP_TAIL)

FRECHET = "frechet"
WEIBULL = "weibull"
GUMBEL = "gumbel"


@dataclass(frozen=True)
class MdaClass:
    """Max-domain of attraction of a marginal: Frechet(alpha), Weibull(alpha, omega) or Gumbel"""
    kind: str
    alpha: Optional[float] = None
    omega: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (FRECHET, WEIBULL, GUMBEL):
            raise DomainError(f"unknown MDA kind {self.kind!r}")
        if self.kind in (FRECHET, WEIBULL) and not (self.alpha is not None and self.alpha > 0):
            raise DomainError(f"{self.kind} class needs alpha > 0, got {self.alpha}")

    @property
    def gamma(self) -> float:
        """Limit exponent: 1/alpha, -1/alpha or 0"""
        if self.kind == FRECHET:
            return 1.0 / self.alpha
        if self.kind == WEIBULL:
            return -1.0 / self.alpha
        return 0.0


def _output(x: Any, values: np.ndarray) -> ArrayLike:
    """Return a float for scalar input, an array otherwise"""
    if np.ndim(x) == 0:
        return float(values)
    return values


def _check_open_unit(name: str, u: np.ndarray):
    if not np.all((u > 0.0) & (u < 1.0)):
        raise DomainError(f"{name} must lie in (0, 1)")


@dataclass(frozen=True)
class MarginalModel:
    """
    Claim-size distribution family.

    Families:
        pareto: F(x) = 1 - x^(-alpha) on [1, inf)
        bounded_power: F(x) = 1 - (omega - x)^alpha on [omega - 1, omega]
        exponential: F(x) = 1 - exp(-x) on [0, inf)
        exp_tail: F(x) = 1 - exp(-x) for x >= shift, 0 below (atom at the shift)
    """
    family: str
    alpha: Optional[float] = None
    omega: Optional[float] = None
    shift: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family in (PARETO, BOUNDED_POWER):
            if self.alpha is None or not np.isfinite(self.alpha) or self.alpha <= 0:
                raise DomainError(f"{self.family} needs alpha > 0, got {self.alpha}")
        if self.family == BOUNDED_POWER:
            if self.omega is None or not np.isfinite(self.omega):
                raise DomainError(f"bounded_power needs a finite omega, got {self.omega}")
        if self.family == EXP_TAIL and not (np.isfinite(self.shift) and self.shift >= 0):
            raise DomainError(f"exp_tail needs shift >= 0, got {self.shift}")

    @classmethod
    def pareto(cls, alpha: float) -> "MarginalModel":
        return cls(PARETO, alpha=float(alpha))

    @classmethod
    def bounded_power(cls, alpha: float, omega: float) -> "MarginalModel":
        return cls(BOUNDED_POWER, alpha=float(alpha), omega=float(omega))

    @classmethod
    def exponential(cls) -> "MarginalModel":
        return cls(EXPONENTIAL)

    @classmethod
    def exp_tail(cls, shift: float) -> "MarginalModel":
        return cls(EXP_TAIL, shift=float(shift))

    @classmethod
    def from_dict(cls, params: Dict[str, Any]) -> "MarginalModel":
        """Build from config keys: family plus alpha / omega / shift"""
        family = params.get("family")
        if family == PARETO:
            return cls(PARETO, alpha=params.get("alpha"))
        if family == BOUNDED_POWER:
            return cls(BOUNDED_POWER, alpha=params.get("alpha"), omega=params.get("omega"))
        if family == EXPONENTIAL:
            return cls.exponential()
        if family == EXP_TAIL:
            return cls.exp_tail(params.get("shift", 0.0))
        raise DomainError(f"unknown family {family!r}")

    # Support

    @property
    def lower(self) -> float:
        if self.family == PARETO:
            return 1.0
        if self.family == BOUNDED_POWER:
            return self.omega - 1.0
        if self.family == EXP_TAIL:
            return self.shift
        return 0.0

    @property
    def upper(self) -> float:
        """Upper endpoint omega (inf for unbounded families)"""
        if self.family == BOUNDED_POWER:
            return self.omega
        return np.inf

    # Distribution functions

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Survival function 1 - F(x), evaluated without cancellation"""
        xs = np.asarray(x, dtype=float)
        if self.family == PARETO:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(xs >= 1.0, np.power(np.maximum(xs, 1.0), -self.alpha), 1.0)
        elif self.family == BOUNDED_POWER:
            gap = np.clip(self.omega - xs, 0.0, 1.0)
            out = np.power(gap, self.alpha)
        elif self.family == EXPONENTIAL:
            out = np.where(xs >= 0.0, np.exp(-np.maximum(xs, 0.0)), 1.0)
        else:
            out = np.where(xs >= self.shift, np.exp(-np.maximum(xs, self.shift)), 1.0)
        return _output(x, out)

    def logsf(self, x: ArrayLike) -> ArrayLike:
        """log(1 - F(x)); -inf beyond the upper endpoint"""
        xs = np.asarray(x, dtype=float)
        if self.family == PARETO:
            out = np.where(xs >= 1.0, -self.alpha * np.log(np.maximum(xs, 1.0)), 0.0)
        elif self.family == BOUNDED_POWER:
            gap = np.clip(self.omega - xs, 0.0, 1.0)
            with np.errstate(divide="ignore"):
                out = self.alpha * np.log(gap)
        elif self.family == EXPONENTIAL:
            out = np.where(xs >= 0.0, -xs, 0.0)
        else:
            out = np.where(xs >= self.shift, -xs, 0.0)
        return _output(x, out)

    def cdf(self, x: ArrayLike) -> ArrayLike:
        """
        F(x), exact closed form; values outside the support clamp to 0 or 1.

        Args:
            x: Point or array of points

        Returns:
            Probability (float for scalar input)
        """
        xs = np.asarray(x, dtype=float)
        if self.family == PARETO:
            out = np.where(xs >= 1.0, 1.0 - np.power(np.maximum(xs, 1.0), -self.alpha), 0.0)
        elif self.family == BOUNDED_POWER:
            gap = np.clip(self.omega - xs, 0.0, 1.0)
            out = 1.0 - np.power(gap, self.alpha)
        elif self.family == EXPONENTIAL:
            out = np.where(xs >= 0.0, -np.expm1(-np.maximum(xs, 0.0)), 0.0)
        else:
            out = np.where(xs >= self.shift, -np.expm1(-np.maximum(xs, self.shift)), 0.0)
        return _output(x, out)

    def quantile(self, u: ArrayLike) -> ArrayLike:
        """
        Generalized inverse F^-(u) = inf{x : F(x) > u}.

        Args:
            u: Probability in (0, 1), scalar or array

        Returns:
            Quantile (float for scalar input)

        Raises:
            DomainError: if any u is outside (0, 1)
        """
        us = np.asarray(u, dtype=float)
        _check_open_unit("u", us)
        return _output(u, self._quantile(us))

    def _quantile(self, us: np.ndarray) -> np.ndarray:
        if self.family == PARETO:
            return np.power(1.0 - us, -1.0 / self.alpha)
        if self.family == BOUNDED_POWER:
            return self.omega - np.power(1.0 - us, 1.0 / self.alpha)
        if self.family == EXPONENTIAL:
            return -np.log1p(-us)
        return np.maximum(self.shift, -np.log1p(-us))

    def isf(self, q: ArrayLike) -> ArrayLike:
        """
        Inverse survival F^-(1 - q), computed from q directly so upper
        quantiles keep full relative precision.

        Raises:
            DomainError: if any q is outside (0, 1)
        """
        qs = np.asarray(q, dtype=float)
        _check_open_unit("q", qs)
        return _output(q, self._isf(qs))

    def _isf(self, qs: np.ndarray) -> np.ndarray:
        # q = 1 is allowed internally and maps to the lower endpoint
        if self.family == PARETO:
            return np.power(qs, -1.0 / self.alpha)
        if self.family == BOUNDED_POWER:
            return self.omega - np.power(qs, 1.0 / self.alpha)
        with np.errstate(divide="ignore"):
            level = -np.log(qs)
        if self.family == EXPONENTIAL:
            return level
        return np.maximum(self.shift, level)

    def return_level(self, t: float) -> float:
        """
        F^-(1 - 1/t) in closed form in t.

        Raises:
            DomainError: if t <= 1
        """
        t = float(t)
        if not t > 1.0:
            raise DomainError(f"horizon t must exceed 1, got {t}")
        if self.family == PARETO:
            return t ** (1.0 / self.alpha)
        if self.family == BOUNDED_POWER:
            return self.omega - self.upper_gap(t)
        if self.family == EXPONENTIAL:
            return float(np.log(t))
        return max(self.shift, float(np.log(t)))

    def upper_gap(self, t: float) -> float:
        """omega - F^-(1 - 1/t) for the bounded family"""
        if self.family != BOUNDED_POWER:
            raise DomainError(f"{self.family} has no finite upper endpoint")
        return float(t) ** (-1.0 / self.alpha)

    # Sampling and classification

    def sample(self, rng: RandomStream, n: int) -> np.ndarray:
        """
        n independent draws by inverse transform of the stream's uniforms.

        Args:
            rng: Random stream (consumed)
            n: Number of draws, n >= 0

        Returns:
            Array of shape (n,)
        """
        n = int(n)
        if n < 0:
            raise DomainError(f"sample size must be >= 0, got {n}")
        if n == 0:
            return np.empty(0, dtype=float)
        # random() is in [0, 1), so 1 - u lies in (0, 1]
        return self._isf(1.0 - rng.random(n))

    def classify_mda(self) -> MdaClass:
        """Pareto -> Frechet, BoundedPower -> Weibull, exponential tails -> Gumbel"""
        if self.family == PARETO:
            return MdaClass(FRECHET, alpha=self.alpha)
        if self.family == BOUNDED_POWER:
            return MdaClass(WEIBULL, alpha=self.alpha, omega=self.omega)
        return MdaClass(GUMBEL)

    def describe(self) -> Dict[str, Any]:
        """Config-style description"""
        out: Dict[str, Any] = {"family": self.family}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.omega is not None:
            out["omega"] = self.omega
        if self.family == EXP_TAIL:
            out["shift"] = self.shift
        return out