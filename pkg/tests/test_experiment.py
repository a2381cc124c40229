"""Tests for the convergence experiment harness"""

import logging
import math

import numpy as np
import pytest
from scipy import stats

from core.config import parse_config
from core.experiment import (
    LIMIT_LABEL,
    ReportRow,
    build_manifest,
    draw_limit_sample,
    run_convergence_experiment,
    run_limit,
    run_simulation,
    summarize_horizon,
)
from core.report import rows_to_text
from core.stats import ks_one_sample
from tests.conftest import KS_MARGIN


def experiment(body: str, **overrides) -> str:
    lines = [body.strip()]
    for key, value in overrides.items():
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


ECOMOR3 = """
claims.x.family = "exponential"
counting.kind = "poisson"
counting.lambda = 1.0
treaty1.scheme = "ecomor"
treaty1.p = 3
treaty2.scheme = "lcr"
treaty2.q = 2
"""

PARETO_LCR1 = """
claims.x.family = "pareto"
claims.x.alpha = 1.0
counting.kind = "poisson"
counting.lambda = 2.0
treaty1.scheme = "lcr"
treaty1.p = 1
"""


class TestSimulation:

    def test_censored_when_too_few_claims(self):
        cfg = parse_config(experiment("""
claims.x.family = "exponential"
counting.kind = "deterministic"
counting.lambda = 0.01
treaty1.scheme = "ecomor"
treaty1.p = 2
""", horizons="[100]", replicates=5))
        rows = run_simulation(cfg).rows
        assert len(rows) == 5
        assert all(row.censored and row.n == 1 and row.s1 is None for row in rows)
        assert [row.replicate for row in rows] == [0, 1, 2, 3, 4]

    def test_rows_per_horizon(self):
        cfg = parse_config(experiment(ECOMOR3, horizons="[50, 200]", replicates=30))
        rows = run_simulation(cfg).rows
        assert [row.t for row in rows] == [50.0] * 30 + [200.0] * 30
        kept = [row for row in rows if not row.censored]
        assert kept
        # ECOMOR normalization leaves the value unchanged
        assert all(row.s1_norm == row.s1 for row in kept)

    def test_thread_count_does_not_change_output(self):
        text = experiment(ECOMOR3, horizons="[50, 200]", replicates=40, seed=11)
        single = run_simulation(parse_config(text).with_overrides(threads=1)).rows
        pooled = run_simulation(parse_config(text).with_overrides(threads=4)).rows
        assert rows_to_text(single) == rows_to_text(pooled)

    def test_seed_changes_output(self):
        text = experiment(ECOMOR3, horizons="[100]", replicates=20)
        first = run_simulation(parse_config(text).with_overrides(seed=1)).rows
        second = run_simulation(parse_config(text).with_overrides(seed=2)).rows
        assert rows_to_text(first) != rows_to_text(second)

    def test_ecomor_exactness(self):
        cfg = parse_config(experiment(ECOMOR3, horizons="[100]", replicates=3000, seed=3))
        rows = run_simulation(cfg).rows
        values = [row.s1_norm for row in rows if not row.censored]
        assert len(values) == 3000
        ks, crit = ks_one_sample(values, stats.gamma(2).cdf)
        assert ks < crit * KS_MARGIN

    def test_renyi_path_matches_law(self):
        cfg = parse_config(experiment(ECOMOR3, horizons="[100]", replicates=3000, seed=4,
                                      **{"sampling.path": '"renyi"'}))
        values = [row.s1_norm for row in run_simulation(cfg).rows if not row.censored]
        ks, crit = ks_one_sample(values, stats.gamma(2).cdf)
        assert ks < crit * KS_MARGIN

    def test_frechet_case_is_exact(self):
        cfg = parse_config(experiment(PARETO_LCR1, horizons="[1000]", replicates=3000, seed=5))
        values = [row.s1_norm for row in run_simulation(cfg).rows if not row.censored]
        ks, crit = ks_one_sample(values, lambda x: np.exp(-2.0 / x))
        assert ks < crit * KS_MARGIN


class TestLimit:

    def test_limit_rows(self):
        cfg = parse_config(experiment(ECOMOR3, horizons="[100]", replicates=5, limit_draws=100))
        result = run_limit(cfg)
        assert len(result.rows) == 100
        assert all(row.is_limit and row.t == LIMIT_LABEL for row in result.rows)
        assert result.rows[0].n is None and result.rows[0].s1 is None
        assert run_limit(cfg, size=7).limit.s1.shape == (7,)

    def test_limit_sample_is_reproducible(self):
        cfg = parse_config(experiment(PARETO_LCR1, horizons="[100]", replicates=5, limit_draws=50))
        first = draw_limit_sample(cfg)
        second = draw_limit_sample(cfg.with_overrides(threads=3))
        np.testing.assert_array_equal(first.s1, second.s1)

    def test_frechet_limit_law(self):
        cfg = parse_config(experiment(PARETO_LCR1, horizons="[100]", replicates=5, limit_draws=20_000))
        draws = draw_limit_sample(cfg)
        ks, crit = ks_one_sample(draws.s1, lambda x: np.exp(-2.0 / x))
        assert ks < crit * KS_MARGIN


class TestConvergence:

    def test_summary_and_rows(self):
        cfg = parse_config(experiment(ECOMOR3, horizons="[100, 1000]", replicates=2000,
                                      limit_draws=2000, seed=6))
        result = run_convergence_experiment(cfg)
        assert len(result.rows) == 2 * 2000 + 2000
        assert [item.t for item in result.summary] == [100.0, 1000.0]
        first = result.summary[0]
        assert first.replicates == 2000
        assert first.censoring_rate == 0.0
        assert first.ks1 < first.ks_critical * KS_MARGIN
        assert first.ks2 < first.ks_critical * KS_MARGIN
        assert first.ks1 >= result.summary[1].ks1 - 2 * first.ks_critical
        assert first.mean1 == pytest.approx(2.0, abs=5 * first.se1)
        assert -1.0 <= first.corr <= 1.0
        assert result.rows[-1].is_limit
        assert result.manifest["replicates"] == 2000

    def test_non_product_limit_skips_ks(self, caplog):
        cfg = parse_config(experiment(ECOMOR3, horizons="[100]", replicates=50,
                                      **{"dependence.kind": '"gumbel_hougaard"', "dependence.theta": 2.0}))
        with caplog.at_level(logging.WARNING, logger="core.experiment"):
            result = run_convergence_experiment(cfg)
        assert result.limit is None
        assert math.isnan(result.summary[0].ks1)
        assert not any(row.is_limit for row in result.rows)
        assert "no limit sample" in caplog.text

    def test_fully_censored_horizon(self):
        rows = [ReportRow(100.0, r, 1, 1.0, censored=True) for r in range(4)]
        summary = summarize_horizon(100.0, rows, None)
        assert summary.censoring_rate == 1.0
        assert math.isnan(summary.ks1) and math.isnan(summary.mean1) and math.isnan(summary.corr)


class TestManifest:

    def test_manifest_fields(self, minimal_config_text):
        cfg = parse_config(minimal_config_text)
        manifest = build_manifest(cfg)
        assert manifest["config_sha256"] == cfg.digest()
        assert manifest["seed"] == 0
        assert len(manifest["manifest_hash"]) == 64
