"""
Experiment Module
Convergence experiments: finite-horizon treaty replicates against draws from their limit law
"""

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .config import ExperimentConfig
from .errors import DegenerateSampleError, TreatyLabError, UnsupportedDependenceError
from .limitlaws import LimitDraws, build_limit_spec, sample_prop3_series, sample_treaty_limit
from .norming import NormingConstants
from .stats import ks_two_sample, pearson_corr, sample_moments
from .streams import LIMIT, StreamFactory
from .treaties import (
    normalize_treaty,
    sample_top_claims_renyi,
    top_order_statistics,
    treaty_value,
)

logger = logging.getLogger(__name__)

LIMIT_LABEL = "limit"


@dataclass(frozen=True)
class ReportRow:
    """
    One output row. `t` is a horizon or "limit"; censored rows carry no S values.
    """
    t: Union[float, str]
    replicate: int
    n: Optional[int] = None
    z: Optional[float] = None
    s1: Optional[float] = None
    s2: Optional[float] = None
    s1_norm: Optional[float] = None
    s2_norm: Optional[float] = None
    censored: bool = False

    @property
    def is_limit(self) -> bool:
        return self.t == LIMIT_LABEL


@dataclass(frozen=True)
class HorizonSummary:
    """Per-horizon statistics of the normalized treaties"""
    t: float
    replicates: int
    censored: int
    ks1: float = math.nan
    ks2: float = math.nan
    ks_critical: float = math.nan
    mean1: float = math.nan
    var1: float = math.nan
    se1: float = math.nan
    mean2: float = math.nan
    var2: float = math.nan
    se2: float = math.nan
    corr: float = math.nan

    @property
    def censoring_rate(self) -> float:
        return self.censored / self.replicates if self.replicates else math.nan


@dataclass
class ExperimentResult:
    """Rows (finite horizons first, then limit draws), per-horizon summary and run manifest"""
    rows: List[ReportRow]
    summary: List[HorizonSummary] = field(default_factory=list)
    limit: Optional[LimitDraws] = None
    manifest: Dict[str, Any] = field(default_factory=dict)


# Replicates

def simulate_replicate(cfg: ExperimentConfig, factory: StreamFactory, horizon_index: int,
                       t: float, replicate: int, norming: NormingConstants) -> ReportRow:
    """
    One replicate at horizon t: draw (N(t), Z), the claims, both treaties.

    Module errors turn the row into a censored row.
    """
    claims_rng, count_rng = factory.replicate_streams(horizon_index, replicate)
    draw = cfg.counting.sample_with_mixing(t, count_rng)
    if draw.n < cfg.depth:
        return ReportRow(t, replicate, draw.n, draw.z, censored=True)
    try:
        if cfg.sampling_path == "renyi":
            top_x = sample_top_claims_renyi(cfg.claims.marginal_x, draw.n, cfg.treaty1.p, claims_rng)
            top_y = sample_top_claims_renyi(cfg.claims.marginal_y, draw.n, cfg.treaty2.p, claims_rng)
        else:
            x, y = cfg.claims.sample_pairs(claims_rng, draw.n)
            top_x = top_order_statistics(x, cfg.treaty1.p)
            top_y = top_order_statistics(y, cfg.treaty2.p)
        s1 = treaty_value(top_x, cfg.treaty1)
        s2 = treaty_value(top_y, cfg.treaty2)
        return ReportRow(
            t, replicate, draw.n, draw.z, s1, s2,
            normalize_treaty(s1, norming.a1, norming.b1, cfg.treaty1.c),
            normalize_treaty(s2, norming.a2, norming.b2, cfg.treaty2.c),
        )
    except TreatyLabError as e:
        logger.debug("replicate t=%s r=%s censored: %s", t, replicate, e)
        return ReportRow(t, replicate, draw.n, draw.z, censored=True)


def _chunks(total: int, threads: int) -> List[range]:
    size = max(1, math.ceil(total / (threads * 4)))
    return [range(start, min(total, start + size)) for start in range(0, total, size)]


def run_horizon(cfg: ExperimentConfig, factory: StreamFactory, horizon_index: int,
                t: float, progress: bool = False) -> List[ReportRow]:
    """
    All replicates at one horizon, sorted by replicate index.

    Replicates run in chunks on a thread pool; each replicate owns its
    streams, so the rows do not depend on the thread count.
    """
    norming = NormingConstants.for_pair(cfg.claims.marginal_x, cfg.claims.marginal_y, t)

    def run_chunk(chunk: range) -> List[ReportRow]:
        return [simulate_replicate(cfg, factory, horizon_index, t, r, norming) for r in chunk]

    chunks = _chunks(cfg.replicates, cfg.threads)
    rows: List[ReportRow] = []
    pbar = tqdm(total=cfg.replicates, desc=f"t={t:g}", disable=not progress)
    if cfg.threads == 1:
        for chunk in chunks:
            rows.extend(run_chunk(chunk))
            pbar.update(len(chunk))
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
            futures = {executor.submit(run_chunk, chunk): chunk for chunk in chunks}
            for future in as_completed(futures):
                rows.extend(future.result())
                pbar.update(len(futures[future]))
    pbar.close()
    rows.sort(key=lambda row: row.replicate)
    return rows


# Limit law

def draw_limit_sample(cfg: ExperimentConfig, size: Optional[int] = None) -> LimitDraws:
    """
    Draws of the normalized limit pair from the LIMIT stream.

    Gumbel/Gumbel pairs use the series representation truncated at
    cfg.truncation; other pairs use the extremal-variate sampler.

    Raises:
        UnsupportedDependenceError: limit H is not a product law
    """
    size = cfg.limit_draws if size is None else int(size)
    spec = build_limit_spec(cfg.treaty1, cfg.treaty2, cfg.claims.marginal_x,
                            cfg.claims.marginal_y, cfg.counting, cfg.claims.dependence)
    rng = StreamFactory(cfg.seed).stream(LIMIT)
    if spec.both_gumbel:
        return sample_prop3_series(spec, cfg.truncation, rng, size)
    return sample_treaty_limit(spec, rng, size)


def limit_rows(draws: LimitDraws) -> List[ReportRow]:
    return [
        ReportRow(LIMIT_LABEL, i, z=float(z), s1_norm=float(a), s2_norm=float(b))
        for i, (z, a, b) in enumerate(zip(draws.z, draws.s1, draws.s2))
    ]


# Summary

def _moments(values: np.ndarray) -> Tuple[float, float, float]:
    try:
        return sample_moments(values)
    except DegenerateSampleError:
        return (math.nan, math.nan, math.nan)


def summarize_horizon(t: float, rows: Sequence[ReportRow],
                      limit: Optional[LimitDraws]) -> HorizonSummary:
    """KS distances against the limit draws, censoring, moments and S1/S2 correlation"""
    kept = [row for row in rows if not row.censored]
    s1 = np.array([row.s1_norm for row in kept], dtype=float)
    s2 = np.array([row.s2_norm for row in kept], dtype=float)
    ks1 = ks2 = critical = math.nan
    if limit is not None and kept:
        ks1, critical = ks_two_sample(s1, limit.s1)
        ks2, _ = ks_two_sample(s2, limit.s2)
    mean1, var1, se1 = _moments(s1)
    mean2, var2, se2 = _moments(s2)
    try:
        corr = pearson_corr(s1, s2)
    except DegenerateSampleError:
        corr = math.nan
    return HorizonSummary(
        t=float(t), replicates=len(rows), censored=len(rows) - len(kept),
        ks1=ks1, ks2=ks2, ks_critical=critical,
        mean1=mean1, var1=var1, se1=se1, mean2=mean2, var2=var2, se2=se2, corr=corr,
    )


def build_manifest(cfg: ExperimentConfig) -> Dict[str, Any]:
    """
    Run manifest: config digest, seed and thread count, with a hash over the
    manifest itself.
    """
    manifest = {
        "config_sha256": cfg.digest(),
        "seed": cfg.seed,
        "seed_fingerprint": StreamFactory(cfg.seed).fingerprint(),
        "threads": cfg.threads,
        "horizons": list(cfg.horizons),
        "replicates": cfg.replicates,
        "limit_draws": cfg.limit_draws,
        "sampling_path": cfg.sampling_path,
        "timestamp": datetime.now().isoformat(),
        "manifest_hash": "",
    }
    body = {k: v for k, v in manifest.items() if k != "manifest_hash"}
    manifest["manifest_hash"] = hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()
    return manifest


# Entry points

def run_simulation(cfg: ExperimentConfig, progress: bool = False) -> ExperimentResult:
    """Finite-horizon rows for every configured horizon"""
    factory = StreamFactory(cfg.seed)
    rows: List[ReportRow] = []
    for h, t in enumerate(cfg.horizons):
        rows.extend(run_horizon(cfg, factory, h, t, progress))
    return ExperimentResult(rows, manifest=build_manifest(cfg))


def run_limit(cfg: ExperimentConfig, size: Optional[int] = None) -> ExperimentResult:
    """Limit-law rows only"""
    draws = draw_limit_sample(cfg, size)
    return ExperimentResult(limit_rows(draws), limit=draws, manifest=build_manifest(cfg))


def run_convergence_experiment(cfg: ExperimentConfig, progress: bool = False) -> ExperimentResult:
    """
    Finite-horizon replicates, limit draws and a per-horizon summary.

    A non-product limit H leaves the KS columns empty instead of failing;
    the finite-horizon rows are still produced.

    Args:
        cfg: Validated experiment config
        progress: Show a progress bar per horizon

    Returns:
        ExperimentResult
    """
    manifest = build_manifest(cfg)
    logger.info("experiment start config=%s seed=%s threads=%s",
                manifest["config_sha256"][:12], cfg.seed, cfg.threads)
    factory = StreamFactory(cfg.seed)

    try:
        limit = draw_limit_sample(cfg)
    except UnsupportedDependenceError as e:
        logger.warning("no limit sample: %s", e)
        limit = None

    rows: List[ReportRow] = []
    summary: List[HorizonSummary] = []
    for h, t in enumerate(cfg.horizons):
        horizon_rows = run_horizon(cfg, factory, h, t, progress)
        stats = summarize_horizon(t, horizon_rows, limit)
        logger.info("t=%g censored=%.4g ks1=%.4g ks2=%.4g crit=%.4g corr=%.4g",
                    t, stats.censoring_rate, stats.ks1, stats.ks2, stats.ks_critical, stats.corr)
        rows.extend(horizon_rows)
        summary.append(stats)
    if limit is not None:
        rows.extend(limit_rows(limit))
    logger.info("experiment done rows=%s", len(rows))
    return ExperimentResult(rows, summary, limit, manifest)
