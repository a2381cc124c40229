"""Tests for copulas and bivariate claims"""

import math

import numpy as np
import pytest

from core.dependence import BivariateClaimModel, DependenceModel
from core.errors import DomainError
from core.marginals import MarginalModel
from core.stats import ks_one_sample, pearson_corr
from tests.conftest import KS_MARGIN


class TestCopulaCdf:

    def test_independence(self):
        assert DependenceModel().copula_cdf(0.3, 0.5) == pytest.approx(0.15, abs=1e-12)

    def test_gumbel_hougaard_theta_one_is_independence(self):
        dep = DependenceModel("gumbel_hougaard", theta=1.0)
        assert dep.is_independent
        assert dep.copula_cdf(0.3, 0.5) == pytest.approx(0.15, abs=1e-12)

    def test_gumbel_hougaard_closed_form(self):
        dep = DependenceModel("gumbel_hougaard", theta=2.0)
        assert dep.copula_cdf(math.exp(-1), math.exp(-1)) == pytest.approx(math.exp(-math.sqrt(2)), abs=1e-12)

    def test_gaussian_median_orthant(self):
        # P(Z1 <= 0, Z2 <= 0) = 1/4 + arcsin(rho) / (2 pi)
        dep = DependenceModel("gaussian", rho=0.8)
        expected = 0.25 + math.asin(0.8) / (2 * math.pi)
        assert dep.copula_cdf(0.5, 0.5) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("dep", [
        DependenceModel(),
        DependenceModel("gumbel_hougaard", theta=3.0),
        DependenceModel("gaussian", rho=-0.5),
    ])
    def test_boundary_conditions(self, dep):
        for u in (0.0, 0.2, 0.7, 1.0):
            assert dep.copula_cdf(u, 0.0) == 0.0
            assert dep.copula_cdf(0.0, u) == 0.0
            assert dep.copula_cdf(u, 1.0) == pytest.approx(u, abs=1e-12)
            assert dep.copula_cdf(1.0, u) == pytest.approx(u, abs=1e-12)

    @pytest.mark.parametrize("dep", [
        DependenceModel("gumbel_hougaard", theta=2.5),
        DependenceModel("gaussian", rho=0.6),
    ])
    def test_two_increasing(self, dep):
        grid = np.linspace(0.05, 0.95, 7)
        values = np.array([[dep.copula_cdf(u, v) for v in grid] for u in grid])
        volumes = values[1:, 1:] - values[:-1, 1:] - values[1:, :-1] + values[:-1, :-1]
        assert volumes.min() >= -1e-12

    @pytest.mark.parametrize("rho", [-0.999, -0.9, 0.999])
    def test_gaussian_within_frechet_bounds(self, rho):
        dep = DependenceModel("gaussian", rho=rho)
        for u, v in [(0.3, 0.5), (0.5, 0.3), (0.05, 0.9), (0.9, 0.95)]:
            value = dep.copula_cdf(u, v)
            assert max(0.0, u + v - 1.0) <= value <= min(u, v)

    def test_outside_unit_square(self):
        with pytest.raises(DomainError):
            DependenceModel().copula_cdf(1.2, 0.5)

    @pytest.mark.parametrize("kwargs", [
        {"kind": "gumbel_hougaard", "theta": 0.5},
        {"kind": "gaussian", "rho": 1.0},
        {"kind": "clayton"},
    ])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(DomainError):
            DependenceModel(**kwargs)

    def test_product_limit(self):
        assert DependenceModel().limit_is_product
        assert DependenceModel("gaussian", rho=0.9).limit_is_product
        assert DependenceModel("gumbel_hougaard", theta=1.0).limit_is_product
        assert not DependenceModel("gumbel_hougaard", theta=1.5).limit_is_product


class TestSampling:

    def test_independent_pairs_uncorrelated(self, rng):
        model = BivariateClaimModel(MarginalModel.exponential(), MarginalModel.exponential())
        x, y = model.sample_pairs(rng, 100_000)
        assert abs(pearson_corr(x, y)) < 3 / math.sqrt(100_000)

    def test_gaussian_empirical_copula(self, rng):
        dep = DependenceModel("gaussian", rho=0.8)
        u, v = dep.sample_uniforms(rng, 100_000)
        empirical = np.mean((u <= 0.5) & (v <= 0.5))
        assert abs(empirical - dep.copula_cdf(0.5, 0.5)) < 0.01

    def test_gumbel_hougaard_empirical_copula(self, rng):
        dep = DependenceModel("gumbel_hougaard", theta=2.0)
        u, v = dep.sample_uniforms(rng, 100_000)
        point = math.exp(-1)
        empirical = np.mean((u <= point) & (v <= point))
        assert abs(empirical - dep.copula_cdf(point, point)) < 0.01

    @pytest.mark.parametrize("dep", [
        DependenceModel("gumbel_hougaard", theta=2.0),
        DependenceModel("gaussian", rho=0.7),
    ])
    def test_marginal_fidelity(self, factory, dep):
        model = BivariateClaimModel(MarginalModel.pareto(1.5), MarginalModel.exponential(), dep)
        x, y = model.sample_pairs(factory.stream(11), 100_000)
        ks_x, crit = ks_one_sample(x, model.marginal_x.cdf)
        ks_y, _ = ks_one_sample(y, model.marginal_y.cdf)
        assert ks_x < crit * KS_MARGIN
        assert ks_y < crit * KS_MARGIN

    def test_reset_stream_repeats_pair(self, factory):
        model = BivariateClaimModel(MarginalModel.pareto(2), MarginalModel.exponential(),
                                    DependenceModel("gaussian", rho=0.3))
        first = model.sample_claim_pair(factory.stream(5, 1, 2))
        second = model.sample_claim_pair(factory.stream(5, 1, 2))
        assert first == second

    def test_zero_pairs(self, rng):
        model = BivariateClaimModel(MarginalModel.exponential(), MarginalModel.exponential())
        x, y = model.sample_pairs(rng, 0)
        assert x.size == 0 and y.size == 0
