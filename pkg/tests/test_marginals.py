"""Tests for claim-size marginals"""

import math

import numpy as np
import pytest

from core.errors import DomainError
from core.marginals import FRECHET, GUMBEL, WEIBULL, MarginalModel, MdaClass
from core.stats import ks_one_sample
from tests.conftest import KS_MARGIN


class TestDistributionFunctions:

    def test_cdf_examples(self):
        assert MarginalModel.pareto(2).cdf(2.0) == pytest.approx(0.75, abs=1e-12)
        assert MarginalModel.exponential().cdf(0.0) == 0.0
        assert MarginalModel.bounded_power(1, 1).cdf(0.25) == pytest.approx(0.25, abs=1e-12)

    def test_cdf_clamps_outside_support(self):
        assert MarginalModel.pareto(1).cdf(0.5) == 0.0
        assert MarginalModel.bounded_power(2, 3).cdf(1.0) == 0.0
        assert MarginalModel.bounded_power(2, 3).cdf(4.0) == 1.0

    def test_quantile_examples(self):
        assert MarginalModel.pareto(2).quantile(0.75) == pytest.approx(2.0, abs=1e-12)
        assert MarginalModel.exponential().quantile(1 - 1 / math.e) == pytest.approx(1.0, abs=1e-12)
        assert MarginalModel.bounded_power(1, 1).quantile(0.5) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5])
    def test_quantile_outside_open_unit_interval(self, u):
        with pytest.raises(DomainError):
            MarginalModel.exponential().quantile(u)

    @pytest.mark.parametrize("model", [
        MarginalModel.pareto(0.7),
        MarginalModel.bounded_power(2.5, 4.0),
        MarginalModel.exponential(),
    ])
    def test_round_trip_and_monotone(self, model):
        u = np.linspace(1e-6, 1 - 1e-6, 2001)
        q = model.quantile(u)
        assert np.all(np.diff(q) >= 0)
        np.testing.assert_allclose(model.cdf(q), u, atol=1e-12)

    def test_exp_tail_atom_generalized_inverse(self):
        model = MarginalModel.exp_tail(2.0)
        # F jumps to 1 - e^-2 at the shift
        assert model.quantile(0.5) == 2.0
        assert model.quantile(0.99) == pytest.approx(-math.log(0.01))
        assert model.cdf(model.quantile(0.5)) >= 0.5

    def test_isf_keeps_upper_tail_precision(self):
        model = MarginalModel.pareto(1)
        assert model.isf(1e-300) == pytest.approx(1e300, rel=1e-12)
        assert model.sf(model.isf(1e-20)) == pytest.approx(1e-20, rel=1e-12)

    def test_logsf_beyond_upper_endpoint(self):
        assert MarginalModel.bounded_power(1, 1).logsf(1.0) == -np.inf


class TestReturnLevel:

    def test_closed_forms(self):
        assert MarginalModel.pareto(2).return_level(100) == pytest.approx(10.0, rel=1e-15)
        assert MarginalModel.exponential().return_level(100) == math.log(100)
        assert MarginalModel.bounded_power(1, 1).return_level(100) == pytest.approx(0.99)
        assert MarginalModel.exp_tail(10.0).return_level(100) == 10.0

    def test_rejects_small_horizon(self):
        with pytest.raises(DomainError):
            MarginalModel.exponential().return_level(1.0)

    def test_upper_gap_only_for_bounded(self):
        assert MarginalModel.bounded_power(2, 1).upper_gap(100) == pytest.approx(0.1)
        with pytest.raises(DomainError):
            MarginalModel.pareto(1).upper_gap(100)


class TestSampling:

    def test_empty(self, rng):
        assert MarginalModel.exponential().sample(rng, 0).shape == (0,)

    def test_exponential_mean(self, rng):
        draws = MarginalModel.exponential().sample(rng, 1_000_000)
        assert abs(draws.mean() - 1.0) < 0.01

    def test_pareto_mean(self, rng):
        draws = MarginalModel.pareto(3).sample(rng, 1_000_000)
        assert abs(draws.mean() - 1.5) < 0.02

    @pytest.mark.parametrize("model", [
        MarginalModel.pareto(1.5),
        MarginalModel.bounded_power(1.0, 1.0),
        MarginalModel.exponential(),
    ])
    def test_sampler_matches_cdf(self, factory, model):
        draws = model.sample(factory.stream(7), 100_000)
        ks, crit = ks_one_sample(draws, model.cdf)
        assert ks < crit * KS_MARGIN

    def test_support(self, rng):
        assert MarginalModel.pareto(1).sample(rng, 1000).min() >= 1.0
        bounded = MarginalModel.bounded_power(2, 5).sample(rng, 1000)
        assert bounded.min() >= 4.0 and bounded.max() <= 5.0


class TestClassification:

    def test_classify(self):
        assert MarginalModel.pareto(1.5).classify_mda() == MdaClass(FRECHET, alpha=1.5)
        assert MarginalModel.bounded_power(1, 1).classify_mda() == MdaClass(WEIBULL, alpha=1.0, omega=1.0)
        assert MarginalModel.exponential().classify_mda().kind == GUMBEL
        assert MarginalModel.exp_tail(3.0).classify_mda().kind == GUMBEL

    def test_gamma_exponents(self):
        assert MdaClass(FRECHET, alpha=2.0).gamma == 0.5
        assert MdaClass(WEIBULL, alpha=2.0, omega=1.0).gamma == -0.5
        assert MdaClass(GUMBEL).gamma == 0.0

    @pytest.mark.parametrize("params", [
        {"family": "pareto"},
        {"family": "pareto", "alpha": -1.0},
        {"family": "bounded_power", "alpha": 1.0},
        {"family": "lognormal"},
    ])
    def test_invalid_parameters(self, params):
        with pytest.raises(DomainError):
            MarginalModel.from_dict(params)
