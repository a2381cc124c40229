"""
Full-Scale Acceptance Run
Checks the exact finite-horizon oracles, the limit-law samplers and the determinism contract
"""

import math
import sys
import os

# Add parent directory to Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from datetime import datetime

import numpy as np
from scipy import special

from core.config import parse_config
from core.counting import CountingModel
from core.experiment import run_convergence_experiment, run_simulation
from core.limitlaws import (
    build_limit_spec,
    extremal_moments,
    sample_gumbel_extremal,
    sample_prop3_series,
    sample_spacings_representation,
    sample_treaty_limit,
    uncorrected_moments,
)
from core.marginals import MarginalModel
from core.norming import mean_excess, norming_constants
from core.report import rows_to_text
from core.stats import ks_one_sample, ks_two_sample, pearson_corr, sample_moments
from core.streams import StreamFactory
from core.treaties import TreatySpec, preset_coeffs

EULER = float(np.euler_gamma)
N_REP = 100_000

results = []


def check(name: str, ok: bool, detail: str):
    status = "PASS" if ok else "FAIL"
    results.append(ok)
    print(f"         {status}  {name}: {detail}")


def config_text(*lines: str, replicates: int = N_REP) -> str:
    return "\n".join(lines + (f"replicates = {replicates}", "seed = 20240917"))


def normalized(result, column: str = "s1_norm") -> np.ndarray:
    return np.array([getattr(r, column) for r in result.rows if not r.censored], dtype=float)


def step_ecomor_exactness(factory: StreamFactory):
    print("[STEP 1] ECOMOR exactness: exponential claims, Poisson(1), t=100")
    for p in (2, 3, 5):
        cfg = parse_config(config_text(
            'claims.x.family = "exponential"',
            'counting.kind = "poisson"', "counting.lambda = 1.0",
            'treaty1.scheme = "ecomor"', f"treaty1.p = {p}",
            "horizons = [100]",
        ))
        s1 = normalized(run_simulation(cfg))
        oracle = factory.stream(90, p).gamma(p - 1, 1.0, size=N_REP)
        ks, crit = ks_two_sample(s1, oracle)
        check(f"ECOMOR({p}) vs Gamma({p - 1},1)", ks < crit, f"KS={ks:.5f} crit={crit:.5f}")


def step_spacings(factory: StreamFactory):
    print("[STEP 2] Spacings law of the extremal variate (m=4)")
    x = sample_gumbel_extremal(4, factory.stream(91), N_REP).values
    spacings = [(j + 1) * (x[:, j] - x[:, j + 1]) for j in range(3)]
    fresh = factory.stream(92).standard_exponential(N_REP)
    for j, s in enumerate(spacings, start=1):
        ks, crit = ks_two_sample(s, fresh)
        check(f"{j}(X_{j}-X_{j + 1}) vs Exp(1)", ks < crit, f"KS={ks:.5f} crit={crit:.5f}")
    bound = 3 / math.sqrt(N_REP)
    for a in range(3):
        for b in range(a + 1, 3):
            r = pearson_corr(spacings[a], spacings[b])
            check(f"corr(spacing {a + 1}, spacing {b + 1})", abs(r) < bound, f"r={r:.5f}")


def step_moments(factory: StreamFactory):
    print("[STEP 3] Extremal moments vs digamma/trigamma (n=1e6)")
    x = sample_gumbel_extremal(5, factory.stream(93), 1_000_000).values
    for i in (1, 2, 3, 5):
        mean, var, se = sample_moments(x[:, i - 1])
        exp_mean, exp_var = extremal_moments(i)
        check(f"X_{i} mean", abs(mean - exp_mean) < 4 * se,
              f"{mean:.5f} vs {-special.digamma(i):.5f}")
        var_se = math.sqrt(2.0 / (x.shape[0] - 1)) * var * 2.0
        check(f"X_{i} variance", abs(var - exp_var) < 4 * var_se,
              f"{var:.5f} vs {special.polygamma(1, i):.5f}")
    check("i=1 agrees with uncorrected values",
          np.allclose(extremal_moments(1), uncorrected_moments(1)), f"{extremal_moments(1)}")
    mean2, _, se2 = sample_moments(x[:, 1])
    gap = abs(mean2 - uncorrected_moments(2)[0]) / se2
    check("i=2 uncorrected mean rejected", gap > 10, f"{gap:.1f} SE away")


def step_sampler_equivalence(factory: StreamFactory):
    print("[STEP 4] Reference, spacings and series samplers (L=1e5)")
    exp = MarginalModel.exponential()
    unit_z = CountingModel.deterministic(1.0)
    for m in (1, 2, 3):
        ref = sample_gumbel_extremal(m, factory.stream(94, m), N_REP).values
        spc = sample_spacings_representation(m, factory.stream(95, m), N_REP).values
        for j in range(1, m + 1):
            unit = TreatySpec(tuple([0.0] * (j - 1) + [1.0]))
            spec = build_limit_spec(unit, unit, exp, exp, unit_z)
            ser = sample_prop3_series(spec, 100_000, factory.stream(96, m, j), N_REP).s1
            for label, a, b in (("ref/spacings", ref[:, j - 1], spc[:, j - 1]),
                                ("ref/series", ref[:, j - 1], ser),
                                ("spacings/series", spc[:, j - 1], ser)):
                ks, crit = ks_two_sample(a, b)
                check(f"m={m} X_{j} {label}", ks < crit, f"KS={ks:.5f}")


def step_frechet(factory: StreamFactory):
    print("[STEP 5] Frechet case: Pareto(1), Poisson(2), LCR(1), t=1e3")
    cfg = parse_config(config_text(
        'claims.x.family = "pareto"', "claims.x.alpha = 1.0",
        'counting.kind = "poisson"', "counting.lambda = 2.0",
        'treaty1.scheme = "lcr"', "treaty1.p = 1",
        "horizons = [1000]", 'sampling.path = "renyi"',
    ))
    s1 = normalized(run_simulation(cfg))
    ks, _ = ks_one_sample(s1, lambda x: np.exp(-2.0 / x))
    check("S1/a(t) vs exp(-2/x)", ks <= 0.01, f"KS={ks:.5f}")


def step_mixed_z(factory: StreamFactory):
    print("[STEP 6] Mixed-Z scaling: Pareto(1), Gamma(2,2) mixing, LCR(1), t=1e4")
    cfg = parse_config(config_text(
        'claims.x.family = "pareto"', "claims.x.alpha = 1.0",
        'counting.kind = "mixed_poisson"', "counting.gamma_shape = 2.0", "counting.gamma_rate = 2.0",
        'treaty1.scheme = "lcr"', "treaty1.p = 1",
        "horizons = [10000]", 'sampling.path = "renyi"', f"limit_draws = {N_REP}",
    ))
    result = run_convergence_experiment(cfg)
    ks = result.summary[0].ks1
    check("S1/a(t) vs Z X_1", ks <= 0.02, f"KS={ks:.5f}")


def step_gumbel_shift(factory: StreamFactory):
    print("[STEP 7] Gumbel shift: exponential claims, Poisson(e), LCR(1), t=1e4")
    cfg = parse_config(config_text(
        'claims.x.family = "exponential"',
        'counting.kind = "poisson"', f"counting.lambda = {math.e!r}",
        'treaty1.scheme = "lcr"', "treaty1.p = 1",
        "horizons = [10000]", 'sampling.path = "renyi"',
    ))
    s1 = normalized(run_simulation(cfg))
    mean = float(np.mean(s1))
    check("mean of S1 - ln t", abs(mean - (EULER + 1.0)) < 0.02, f"{mean:.5f} vs {EULER + 1.0:.5f}")

    exp = MarginalModel.exponential()
    lcr2 = preset_coeffs("lcr", 2)
    spec = build_limit_spec(lcr2, lcr2, exp, exp, CountingModel.deterministic(1.0))
    draws = sample_prop3_series(spec, 100_000, factory.stream(97), 1_000_000)
    mean = float(np.mean(draws.s1))
    check("series mean for LCR(2)", abs(mean - (2 * EULER - 1)) < 0.01, f"{mean:.5f} vs {2 * EULER - 1:.5f}")
    direct = sample_treaty_limit(spec, factory.stream(98), 1_000_000)
    check("extremal-variate mean for LCR(2)", abs(float(np.mean(direct.s1)) - (2 * EULER - 1)) < 0.01,
          f"{float(np.mean(direct.s1)):.5f}")


def step_independence(factory: StreamFactory):
    print("[STEP 8] Asymptotic independence: LCR(2)/LCR(2), t=1e4")
    cfg = parse_config(config_text(
        'claims.x.family = "exponential"',
        'counting.kind = "poisson"', "counting.lambda = 1.0",
        'treaty1.scheme = "lcr"', "treaty1.p = 2",
        'treaty2.scheme = "lcr"', "treaty2.q = 2",
        "horizons = [10000]", 'sampling.path = "renyi"',
    ))
    result = run_simulation(cfg)
    r = pearson_corr(normalized(result, "s1_norm"), normalized(result, "s2_norm"))
    check("corr(S1_norm, S2_norm)", abs(r) < 3 / math.sqrt(N_REP) + 0.01, f"r={r:.5f}")


def step_norming():
    print("[STEP 9] Norming-constant oracles")
    t = 1e6
    exp_norm = norming_constants(MarginalModel.exponential(), t)
    check("exponential (a, b)", exp_norm.a == 1.0 and exp_norm.b == math.log(t), f"{exp_norm.as_tuple()}")
    for alpha in (0.5, 1.0, 2.5):
        a = norming_constants(MarginalModel.pareto(alpha), t).a
        rel = abs(a - t ** (1 / alpha)) / t ** (1 / alpha)
        check(f"Pareto({alpha}) a(t)", rel < 1e-12, f"rel err {rel:.2e}")
    quad = mean_excess(MarginalModel.exponential(), math.log(t), method="quadrature")
    check("quadrature mean excess", abs(quad - 1.0) < 1e-8, f"{quad:.12f}")


def step_determinism():
    print("[STEP 10] Determinism across thread counts")
    text = config_text(
        'claims.x.family = "exponential"',
        'counting.kind = "poisson"', "counting.lambda = 1.0",
        'treaty1.scheme = "ecomor"', "treaty1.p = 3",
        "horizons = [100, 1000]", "limit_draws = 2000",
        replicates=2000,
    )
    one = run_convergence_experiment(parse_config(text).with_overrides(threads=1))
    eight = run_convergence_experiment(parse_config(text).with_overrides(threads=8))
    check("threads=1 vs threads=8", rows_to_text(one.rows) == rows_to_text(eight.rows),
          f"{len(one.rows)} rows")


def main():
    print("\n" + "=" * 90)
    print("  LARGEST-CLAIMS TREATY LABORATORY")
    print("  Full-Scale Acceptance Run")
    print("=" * 90)
    print(f"  Date: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("=" * 90 + "\n")

    factory = StreamFactory(20240917)
    step_ecomor_exactness(factory)
    step_spacings(factory)
    step_moments(factory)
    step_sampler_equivalence(factory)
    step_frechet(factory)
    step_mixed_z(factory)
    step_gumbel_shift(factory)
    step_independence(factory)
    step_norming()
    step_determinism()

    passed = sum(results)
    print("\n" + "=" * 90)
    print(f"  {passed}/{len(results)} checks passed")
    print("=" * 90 + "\n")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
