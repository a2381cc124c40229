"""
Report Module
CSV output of experiment rows and summaries, parsing them back, and a text report
"""

import json
import logging
import math
from dataclasses import asdict
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from .errors import DomainError
from .experiment import LIMIT_LABEL, HorizonSummary, ReportRow

logger = logging.getLogger(__name__)

ROW_COLUMNS = ["t", "replicate", "N", "Z", "S1", "S2", "S1_norm", "S2_norm", "censored"]
SUMMARY_COLUMNS = [
    "t", "replicates", "censored", "censoring_rate", "ks1", "ks2", "ks_critical",
    "mean1", "var1", "se1", "mean2", "var2", "se2", "corr",
]


def format_float(value: Optional[float]) -> str:
    """17 significant digits (round-trippable); empty for None / NaN"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return format(float(value), ".17g")


def _format_int(value: Optional[int]) -> str:
    return "" if value is None else str(int(value))


def row_fields(row: ReportRow) -> List[str]:
    """Serialized cells of one row, in ROW_COLUMNS order"""
    t = LIMIT_LABEL if row.is_limit else format_float(row.t)
    return [
        t,
        _format_int(row.replicate),
        _format_int(row.n),
        format_float(row.z),
        format_float(row.s1),
        format_float(row.s2),
        format_float(row.s1_norm),
        format_float(row.s2_norm),
        "true" if row.censored else "false",
    ]


def rows_frame(rows: Sequence[ReportRow]) -> pd.DataFrame:
    return pd.DataFrame([row_fields(row) for row in rows], columns=ROW_COLUMNS, dtype=str)


def summary_frame(summary: Sequence[HorizonSummary]) -> pd.DataFrame:
    records = []
    for item in summary:
        values = asdict(item)
        values["censoring_rate"] = item.censoring_rate
        records.append([
            _format_int(values[col]) if col in ("replicates", "censored") else format_float(values[col])
            for col in SUMMARY_COLUMNS
        ])
    return pd.DataFrame(records, columns=SUMMARY_COLUMNS, dtype=str)


def _write_frame(frame: pd.DataFrame, path: str):
    try:
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def write_csv(rows: Sequence[ReportRow], summary: Optional[Sequence[HorizonSummary]],
              path: str, manifest: Optional[Dict[str, Any]] = None):
    """
    Write rows to `path`, the summary to `<path>.summary.csv` and the manifest
    to `<path>.manifest.json`.

    Args:
        rows: Report rows
        summary: Per-horizon summary, or None to skip the summary file
        path: Output CSV path
        manifest: Run manifest, or None to skip

    Raises:
        OSError: the path (or a sidecar) is not writable; the message names it
    """
    _write_frame(rows_frame(rows), path)
    if summary is not None:
        _write_frame(summary_frame(summary), f"{path}.summary.csv")
    if manifest is not None:
        manifest_path = f"{path}.manifest.json"
        try:
            with open(manifest_path, "w", encoding="utf-8") as f:
                json.dump(manifest, f, indent=2, sort_keys=True)
                f.write("\n")
        except OSError as e:
            raise OSError(f"cannot write {manifest_path}: {e.strerror or e}") from e
    logger.info("wrote %s rows to %s", len(rows), path)


def rows_to_text(rows: Sequence[ReportRow]) -> str:
    """CSV text of the rows (same bytes write_csv produces)"""
    return rows_frame(rows).to_csv(index=False, lineterminator="\n")


def _parse_float(cell: str) -> Optional[float]:
    return None if cell == "" else float(cell)


def _parse_int(cell: str) -> Optional[int]:
    return None if cell == "" else int(cell)


def read_report(path: str) -> List[ReportRow]:
    """
    Parse a CSV written by write_csv back into rows.

    Raises:
        OSError: unreadable path
        DomainError: header does not match
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from e
    if list(frame.columns) != ROW_COLUMNS:
        raise DomainError(f"{path}: unexpected header {list(frame.columns)}")
    rows = []
    for record in frame.itertuples(index=False, name=None):
        t, replicate, n, z, s1, s2, s1n, s2n, censored = record
        rows.append(ReportRow(
            t=LIMIT_LABEL if t == LIMIT_LABEL else float(t),
            replicate=int(replicate),
            n=_parse_int(n),
            z=_parse_float(z),
            s1=_parse_float(s1),
            s2=_parse_float(s2),
            s1_norm=_parse_float(s1n),
            s2_norm=_parse_float(s2n),
            censored=censored == "true",
        ))
    return rows


def generate_text_report(summary: Sequence[HorizonSummary],
                         manifest: Optional[Dict[str, Any]] = None) -> str:
    """Human-readable summary of a convergence run"""
    lines = [
        "=" * 60,
        "CONVERGENCE REPORT",
        "=" * 60,
        "",
    ]
    if manifest:
        lines.append(f"Config digest: {manifest.get('config_sha256', '')[:16]}")
        lines.append(f"Seed: {manifest.get('seed')}  Threads: {manifest.get('threads')}")
        lines.append("")
    for item in summary:
        lines.append(f"t = {item.t:g}  ({item.replicates} replicates, "
                     f"censoring rate {item.censoring_rate:.4f})")
        lines.append(f"  KS S1: {item.ks1:.4f}   KS S2: {item.ks2:.4f}   99% critical: {item.ks_critical:.4f}")
        lines.append(f"  S1 mean {item.mean1:.4f} (SE {item.se1:.4f})  var {item.var1:.4f}")
        lines.append(f"  S2 mean {item.mean2:.4f} (SE {item.se2:.4f})  var {item.var2:.4f}")
        lines.append(f"  corr(S1, S2): {item.corr:.4f}")
        lines.append("")
    lines.append("=" * 60)
    return "\n".join(lines)
