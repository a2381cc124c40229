"""
Norming Module
Normalizing constants a(t) > 0, b(t) and limit exponents for each max-domain of attraction
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import integrate

from .errors import DomainError, WrongMdaError
from .marginals import (EXP_TAIL, EXPONENTIAL, FRECHET, GUMBEL, WEIBULL,
                        MarginalModel)

logger = logging.getLogger(__name__)

QUAD_EPSREL = 1e-10


@dataclass(frozen=True)
class MarginalNorming:
    """(a, b, gamma, delta) for one marginal at horizon t"""
    a: float
    b: float
    gamma: float
    delta: int

    def as_tuple(self) -> Tuple[float, float, float, int]:
        return (self.a, self.b, self.gamma, self.delta)


@dataclass(frozen=True)
class NormingConstants:
    """
    Norming constants for both components at horizon t.

    delta_i flags a Gumbel-class marginal; the random shift ln Z it stands
    for is applied by the limit samplers.
    """
    a1: float
    b1: float
    gamma1: float
    delta1: int
    a2: float
    b2: float
    gamma2: float
    delta2: int
    t: float

    @classmethod
    def for_pair(cls, x: MarginalModel, y: MarginalModel, t: float) -> "NormingConstants":
        nx = norming_constants(x, t)
        ny = norming_constants(y, t)
        return cls(nx.a, nx.b, nx.gamma, nx.delta, ny.a, ny.b, ny.gamma, ny.delta, float(t))

    @property
    def first(self) -> MarginalNorming:
        return MarginalNorming(self.a1, self.b1, self.gamma1, self.delta1)

    @property
    def second(self) -> MarginalNorming:
        return MarginalNorming(self.a2, self.b2, self.gamma2, self.delta2)


def mean_excess(model: MarginalModel, u: float, method: str = "auto") -> float:
    """
    Mean excess e(u) = int_u^omega [1 - F(s)] ds / [1 - F(u)].

    Args:
        model: Gumbel-class marginal
        u: Threshold with F(u) < 1
        method: "auto" (closed form where known), "closed_form" or "quadrature"

    Returns:
        Positive mean excess

    Raises:
        DomainError: F(u) = 1 or unknown method
        WrongMdaError: model is not Gumbel-class
    """
    if model.classify_mda().kind != GUMBEL:
        raise WrongMdaError(f"mean excess norming applies to Gumbel-class marginals, got {model.family}")
    u = float(u)
    log_tail = float(model.logsf(u))
    if not np.isfinite(log_tail):
        raise DomainError(f"F({u}) = 1, mean excess undefined")
    if method not in ("auto", "closed_form", "quadrature"):
        raise DomainError(f"unknown mean excess method {method!r}")

    if method in ("auto", "closed_form"):
        if model.family == EXPONENTIAL and u >= 0.0:
            return 1.0
        if model.family == EXP_TAIL and u >= model.shift:
            return 1.0
        if method == "closed_form":
            raise DomainError(f"no closed form for {model.family} below its tail threshold")

    # Substitute s = u + y and divide the tails in log space so large u does not underflow
    def integrand(y: float) -> float:
        return float(np.exp(model.logsf(u + y) - log_tail))

    span = model.upper - u
    # Split at the lower support point so the kink of an atom is a panel edge
    edges = [0.0, span]
    if 0.0 < model.lower - u < span:
        edges.insert(1, model.lower - u)
    value = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        part, err = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=QUAD_EPSREL, limit=200)
        logger.debug("mean excess quadrature u=%s [%s, %s] part=%s err=%s", u, lo, hi, part, err)
        value += part
    return float(value)


def norming_constants(model: MarginalModel, t: float) -> MarginalNorming:
    """
    Norming constants of one marginal at horizon t.

    Frechet: (F^-(1-1/t), 0, 1/alpha, 0)
    Weibull: (omega - F^-(1-1/t), omega, -1/alpha, 0)
    Gumbel:  (e(F^-(1-1/t)), F^-(1-1/t), 0, 1)

    Raises:
        DomainError: if t <= 1
    """
    t = float(t)
    if not t > 1.0:
        raise DomainError(f"horizon t must exceed 1, got {t}")
    mda = model.classify_mda()
    if mda.kind == FRECHET:
        return MarginalNorming(model.return_level(t), 0.0, mda.gamma, 0)
    if mda.kind == WEIBULL:
        return MarginalNorming(model.upper_gap(t), float(mda.omega), mda.gamma, 0)
    b = model.return_level(t)
    return MarginalNorming(mean_excess(model, b), b, 0.0, 1)
