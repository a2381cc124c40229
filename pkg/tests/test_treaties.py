"""Tests for order statistics and treaty values"""

import math

import numpy as np
import pytest
from scipy import stats

from core.errors import DomainError, InsufficientSampleError
from core.marginals import MarginalModel
from core.stats import ks_one_sample, ks_two_sample
from core.treaties import (
    OrderStats,
    TreatySpec,
    normalize_treaty,
    preset_coeffs,
    sample_top_claims_renyi,
    top_order_statistics,
    treaty_value,
)
from tests.conftest import KS_MARGIN


class TestTreatySpec:

    def test_lcr(self):
        spec = preset_coeffs("lcr", 3)
        assert spec.coeffs == (1.0, 1.0, 1.0)
        assert spec.c == 3.0
        assert spec.p == 3

    @pytest.mark.parametrize("p, coeffs", [(3, (1.0, 1.0, -2.0)), (2, (1.0, -1.0))])
    def test_ecomor(self, p, coeffs):
        spec = preset_coeffs("ecomor", p)
        assert spec.coeffs == coeffs
        assert spec.c == 0.0

    @pytest.mark.parametrize("scheme, p", [("ecomor", 1), ("lcr", 0), ("xl", 2)])
    def test_invalid_presets(self, scheme, p):
        with pytest.raises(DomainError):
            preset_coeffs(scheme, p)

    def test_exact_coefficient_sum(self):
        spec = TreatySpec((1e16, 1.0, -1e16))
        assert spec.c == 1.0

    def test_from_dict_exclusive(self):
        with pytest.raises(DomainError):
            TreatySpec.from_dict({"scheme": "lcr", "p": 2, "coeffs": [1, 1]})
        with pytest.raises(DomainError):
            TreatySpec.from_dict({})
        assert TreatySpec.from_dict({"scheme": "ecomor", "q": 4}, depth_key="q").p == 4

    def test_describe(self):
        assert preset_coeffs("ecomor", 3).describe() == "ECOMOR(3)"
        assert TreatySpec((2.0, 0.5)).describe() == "coeffs(2, 0.5)"


class TestOrderStatistics:

    def test_examples(self):
        assert top_order_statistics([3, 1, 4, 1, 5], 2).values.tolist() == [5.0, 4.0]
        assert top_order_statistics([7], 1).values.tolist() == [7.0]

    def test_matches_full_sort(self, rng):
        sample = MarginalModel.exponential().sample(rng, 100_000)
        top = top_order_statistics(sample, 3)
        np.testing.assert_array_equal(top.values, np.sort(sample)[::-1][:3])
        assert top.n == 100_000

    def test_insufficient_sample(self):
        with pytest.raises(InsufficientSampleError) as exc:
            top_order_statistics([1.0, 2.0], 3)
        assert (exc.value.needed, exc.value.available) == (3, 2)

    def test_rejects_zero_depth(self):
        with pytest.raises(DomainError):
            top_order_statistics([1.0], 0)


class TestTreatyValue:

    def test_examples(self):
        order = OrderStats(np.array([5.0, 3.0, 1.0]), 10)
        assert treaty_value(order, preset_coeffs("ecomor", 3)) == 6.0
        assert treaty_value(order, preset_coeffs("lcr", 2)) == 8.0
        constant = OrderStats(np.full(4, 2.5), 4)
        assert treaty_value(constant, preset_coeffs("ecomor", 4)) == 0.0

    def test_needs_enough_order_statistics(self):
        with pytest.raises(InsufficientSampleError):
            treaty_value(OrderStats(np.array([5.0]), 1), preset_coeffs("lcr", 2))

    def test_shift_and_scale(self):
        order = OrderStats(np.array([9.0, 4.0, 2.0, 1.0]), 20)
        spec = TreatySpec((1.0, 2.0, -0.5))
        base = treaty_value(order, spec)
        assert treaty_value(order.shifted(3.0), spec) == pytest.approx(base + spec.c * 3.0)
        assert treaty_value(order.scaled(2.5), spec) == pytest.approx(2.5 * base)

    def test_normalize(self):
        assert normalize_treaty(6.0, 1.0, math.log(100), 0.0) == 6.0
        assert normalize_treaty(10.0, 2.0, 3.0, 2.0) == 2.0
        assert normalize_treaty(12.0, 7.0, 4.0, 3.0) == 0.0
        with pytest.raises(DomainError):
            normalize_treaty(1.0, 0.0, 0.0, 1.0)


class TestExactEcomorLaw:

    @pytest.mark.parametrize("p", [2, 3])
    def test_ecomor_of_exponentials_is_gamma(self, factory, p):
        spec = preset_coeffs("ecomor", p)
        model = MarginalModel.exponential()
        values = [
            treaty_value(top_order_statistics(model.sample(factory.stream(1, p, r), 100), p), spec)
            for r in range(20_000)
        ]
        ks, crit = ks_one_sample(values, stats.gamma(p - 1).cdf)
        assert ks < crit * KS_MARGIN

    def test_renyi_top_claims_match_full_sample(self, factory):
        model = MarginalModel.pareto(1.5)
        n, m = 500, 3
        direct = np.array([sample_top_claims_renyi(model, n, m, factory.stream(1, 0, r)).values
                           for r in range(20_000)])
        full = np.array([top_order_statistics(model.sample(factory.stream(1, 1, r), n), m).values
                         for r in range(20_000)])
        for j in range(m):
            ks, crit = ks_two_sample(direct[:, j], full[:, j])
            assert ks < crit * KS_MARGIN

    def test_renyi_top_claims_are_descending(self, rng):
        top = sample_top_claims_renyi(MarginalModel.exponential(), 50, 5, rng)
        assert np.all(np.diff(top.values) <= 0)
        assert top.n == 50

    def test_renyi_whole_sample(self, rng):
        top = sample_top_claims_renyi(MarginalModel.exponential(), 4, 4, rng)
        assert top.m == 4
        with pytest.raises(InsufficientSampleError):
            sample_top_claims_renyi(MarginalModel.exponential(), 3, 4, rng)
