"""
Main Entry Point - Largest-Claims Treaty Laboratory
Simulate treaties on finite horizons, sample their limit laws and compare the two
"""

import argparse
import logging
import sys
from datetime import datetime
from typing import List, Optional

from core.config import ExperimentConfig, load_config
from core.errors import ConfigError, TreatyLabError
from core.experiment import ExperimentResult, run_convergence_experiment, run_limit, run_simulation
from core.limitlaws import extremal_moments, uncorrected_moments
from core.marginals import MarginalModel
from core.norming import norming_constants
from core.report import format_float, generate_text_report, rows_to_text, write_csv

COMMANDS = ["simulate", "limit", "converge", "norming", "moments"]

logger = logging.getLogger("treatylab")


def print_banner(command: str):
    """Print run banner (stderr, so stdout stays CSV)"""
    err = sys.stderr
    print("\n" + "=" * 80, file=err)
    print("  LARGEST-CLAIMS TREATY LABORATORY", file=err)
    print(f"  Command: {command}", file=err)
    print("=" * 80, file=err)
    print(f"  Timestamp: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}", file=err)
    print("=" * 80 + "\n", file=err)


def print_section(title: str):
    """Print formatted section"""
    print(f"\n{'─' * 80}", file=sys.stderr)
    print(f"  {title}", file=sys.stderr)
    print(f"{'─' * 80}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Largest-claims treaty laboratory")
    parser.add_argument("command", choices=COMMANDS, help="Command to execute")
    parser.add_argument("--config", "--spec", dest="config", help="Experiment config path")
    parser.add_argument("--seed", type=int, help="Master seed (overrides the config)")
    parser.add_argument("--threads", type=int, help="Worker threads (overrides the config)")
    parser.add_argument("--out", help="Output CSV path (stdout if omitted)")
    parser.add_argument("--n", type=int, help="Number of limit draws (limit command)")
    parser.add_argument("--progress", action="store_true", help="Show progress bars")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    # norming
    parser.add_argument("--family", help="Claim family (norming command)")
    parser.add_argument("--alpha", type=float, help="Tail index")
    parser.add_argument("--omega", type=float, help="Right endpoint (bounded_power)")
    parser.add_argument("--shift", type=float, default=0.0, help="Shift (exp_tail)")
    parser.add_argument("--t", type=float, help="Horizon")
    # moments
    parser.add_argument("--i", type=int, help="Extremal component index (moments command)")
    parser.add_argument("--paper-remark", action="store_true",
                        help="Also print the uncorrected moment values")
    return parser


def _load(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError(f"{args.command} needs --config")
    cfg = load_config(args.config)
    return cfg.with_overrides(seed=args.seed, threads=args.threads, output=args.out)


def _emit(result: ExperimentResult, cfg: ExperimentConfig, with_summary: bool):
    if cfg.output:
        write_csv(result.rows, result.summary if with_summary else None, cfg.output, result.manifest)
        print(f"   ✅ Wrote {len(result.rows)} rows to {cfg.output}", file=sys.stderr)
    else:
        sys.stdout.write(rows_to_text(result.rows))


def cmd_simulate(args) -> int:
    cfg = _load(args)
    print_section(f"SIMULATING {cfg.replicates} REPLICATES AT {len(cfg.horizons)} HORIZON(S)")
    _emit(run_simulation(cfg, progress=args.progress), cfg, with_summary=False)
    return 0


def cmd_limit(args) -> int:
    cfg = _load(args)
    size = args.n if args.n is not None else cfg.limit_draws
    if size < 1:
        raise ConfigError(f"--n must be >= 1, got {size}", key="limit_draws")
    print_section(f"DRAWING {size} LIMIT SAMPLES")
    _emit(run_limit(cfg, size), cfg, with_summary=False)
    return 0


def cmd_converge(args) -> int:
    cfg = _load(args)
    print_section("CONVERGENCE EXPERIMENT")
    result = run_convergence_experiment(cfg, progress=args.progress)
    _emit(result, cfg, with_summary=True)
    print(generate_text_report(result.summary, result.manifest), file=sys.stderr)
    return 0


def cmd_norming(args) -> int:
    if args.family is None or args.t is None:
        raise ConfigError("norming needs --family and --t")
    model = MarginalModel.from_dict({
        "family": args.family, "alpha": args.alpha, "omega": args.omega, "shift": args.shift,
    })
    norm = norming_constants(model, args.t)
    print("a,b,gamma,delta")
    print(",".join([format_float(norm.a), format_float(norm.b), format_float(norm.gamma), str(norm.delta)]))
    return 0


def cmd_moments(args) -> int:
    if args.i is None:
        raise ConfigError("moments needs --i")
    print("form,i,mean,variance")
    mean, var = extremal_moments(args.i)
    print(f"corrected,{args.i},{format_float(mean)},{format_float(var)}")
    if args.paper_remark:
        mean, var = uncorrected_moments(args.i)
        print(f"uncorrected,{args.i},{format_float(mean)},{format_float(var)}")
    return 0


HANDLERS = {
    "simulate": cmd_simulate,
    "limit": cmd_limit,
    "converge": cmd_converge,
    "norming": cmd_norming,
    "moments": cmd_moments,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main execution flow.

    Returns:
        0 on success, 1 on a validation or domain error, 2 on an I/O error
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    print_banner(args.command)
    try:
        return HANDLERS[args.command](args)
    except TreatyLabError as e:
        print(f"   ❌ {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"   ❌ I/O error: {e}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("\n\n⚠️  Execution interrupted by user", file=sys.stderr)
        return 1


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
