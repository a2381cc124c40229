"""
Dependence Module
Copulas coupling two claim-size marginals into bivariate claims (X_n, Y_n)
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from scipy import integrate, special, stats

from .errors import DomainError
from .marginals import MarginalModel
from .streams import RandomStream

INDEPENDENCE = "independence"
GUMBEL_HOUGAARD = "gumbel_hougaard"
GAUSSIAN = "gaussian"

KINDS = (INDEPENDENCE, GUMBEL_HOUGAARD, GAUSSIAN)


def _bivariate_normal_cdf(h: float, k: float, rho: float) -> float:
    """
    P(Z1 <= h, Z2 <= k) for standard normals with correlation rho.

    Integrates the derivative in rho of the bivariate normal CDF from 0:
        Phi2(h, k; rho) = Phi(h) Phi(k) + 1/(2 pi) int_0^rho
            exp(-(h^2 - 2 r h k + k^2) / (2 (1 - r^2))) / sqrt(1 - r^2) dr
    """
    base = special.ndtr(h) * special.ndtr(k)
    if rho == 0.0:
        return float(base)

    def integrand(r: float) -> float:
        one_minus = 1.0 - r * r
        return np.exp(-(h * h - 2.0 * r * h * k + k * k) / (2.0 * one_minus)) / np.sqrt(one_minus)

    value, _ = integrate.quad(integrand, 0.0, rho, epsabs=1e-13, epsrel=1e-12, limit=200)
    return float(base + value / (2.0 * np.pi))


@dataclass(frozen=True)
class DependenceModel:
    """
    Copula between the two claim components.

    Kinds:
        independence: C(u, v) = u v
        gumbel_hougaard: C(u, v) = exp(-[(-ln u)^theta + (-ln v)^theta]^(1/theta)), theta >= 1
        gaussian: normal copula with correlation rho in (-1, 1)
    """
    kind: str = INDEPENDENCE
    theta: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown dependence kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == GUMBEL_HOUGAARD and not (np.isfinite(self.theta) and self.theta >= 1.0):
            raise DomainError(f"gumbel_hougaard needs theta >= 1, got {self.theta}")
        if self.kind == GAUSSIAN and not (-1.0 < self.rho < 1.0):
            raise DomainError(f"gaussian copula needs rho in (-1, 1), got {self.rho}")

    @classmethod
    def from_dict(cls, params: Dict[str, Any]) -> "DependenceModel":
        kind = params.get("kind", INDEPENDENCE)
        return cls(kind=kind, theta=float(params.get("theta", 1.0)),
                   rho=float(params.get("rho", 0.0)))

    @property
    def is_independent(self) -> bool:
        return self.kind == INDEPENDENCE or (self.kind == GUMBEL_HOUGAARD and self.theta == 1.0)

    @property
    def limit_is_product(self) -> bool:
        """
        Whether the bivariate max-limit H factorizes as H1 * H2.

        The Gaussian copula with |rho| < 1 is asymptotically independent;
        Gumbel-Hougaard with theta > 1 keeps upper-tail dependence.
        """
        return self.is_independent or self.kind == GAUSSIAN

    def copula_cdf(self, u: float, v: float) -> float:
        """
        C(u, v) on the unit square.

        Args:
            u: First margin probability in [0, 1]
            v: Second margin probability in [0, 1]

        Returns:
            Copula value

        Raises:
            DomainError: outside the unit square
        """
        u = float(u)
        v = float(v)
        if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
            raise DomainError(f"copula arguments must lie in [0, 1], got ({u}, {v})")
        if u == 0.0 or v == 0.0:
            return 0.0
        if u == 1.0:
            return v
        if v == 1.0:
            return u
        if self.is_independent:
            return u * v
        if self.kind == GUMBEL_HOUGAARD:
            s = (-np.log(u)) ** self.theta + (-np.log(v)) ** self.theta
            return float(np.exp(-s ** (1.0 / self.theta)))
        value = _bivariate_normal_cdf(special.ndtri(u), special.ndtri(v), self.rho)
        # quadrature error can step outside the Frechet bounds
        return float(np.clip(value, max(0.0, u + v - 1.0), min(u, v)))

    def sample_uniforms(self, rng: RandomStream, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        n copula draws (U, V).

        Gumbel-Hougaard uses the Marshall-Olkin frailty construction:
        S positive (1/theta)-stable with Laplace transform exp(-s^(1/theta)),
        E1, E2 unit exponentials, U = exp(-(E1/S)^(1/theta)).
        Gaussian maps correlated normals through the normal CDF.
        """
        n = int(n)
        if self.is_independent:
            draws = rng.random((n, 2))
            return draws[:, 0], draws[:, 1]
        if self.kind == GUMBEL_HOUGAARD:
            a = 1.0 / self.theta
            frailty = stats.levy_stable.rvs(
                a, 1.0, loc=0.0, scale=np.cos(np.pi * a / 2.0) ** self.theta,
                size=n, random_state=rng,
            )
            e = rng.standard_exponential((n, 2))
            gen = np.power(e / frailty[:, None], a)
            return np.exp(-gen[:, 0]), np.exp(-gen[:, 1])
        z = rng.standard_normal((n, 2))
        w = self.rho * z[:, 0] + np.sqrt(1.0 - self.rho ** 2) * z[:, 1]
        return special.ndtr(z[:, 0]), special.ndtr(w)


@dataclass(frozen=True)
class BivariateClaimModel:
    """Two marginals coupled by a copula"""
    marginal_x: MarginalModel
    marginal_y: MarginalModel
    dependence: DependenceModel = DependenceModel()

    def sample_pairs(self, rng: RandomStream, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        n iid claim pairs.

        Returns:
            (x values, y values), each of shape (n,)
        """
        n = int(n)
        if n < 0:
            raise DomainError(f"sample size must be >= 0, got {n}")
        if n == 0:
            return np.empty(0), np.empty(0)
        u, v = self.dependence.sample_uniforms(rng, n)
        # isf(1 - u) equals quantile(u); clip guards u == 1 from the normal CDF
        qx = np.clip(1.0 - u, np.finfo(float).tiny, 1.0)
        qy = np.clip(1.0 - v, np.finfo(float).tiny, 1.0)
        return self.marginal_x._isf(qx), self.marginal_y._isf(qy)

    def sample_claim_pair(self, rng: RandomStream) -> Tuple[float, float]:
        """One claim pair (X, Y)"""
        x, y = self.sample_pairs(rng, 1)
        return float(x[0]), float(y[0])