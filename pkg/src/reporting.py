"""
Report Tables
Builds the size and score tables (rows = phenomena, columns = distance
thresholds) and the long-format report, and writes them as TSV or JSON.
"""

import json
import logging
import numbers
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from .corpus_model import Phenomenon
from .errors import LddToolkitError, MetricInputError
from .metrics import spearman

logger = logging.getLogger(__name__)

BASELINE = "baseline"
BASELINE_LABEL = "Baseline (full dataset)"
SPEARMAN_COLUMN = "Spearman"
LONG_COLUMNS = ["phenomenon", "min_distance", "n_sentences", "bleu", "ribes", "spearman"]


def threshold_label(threshold: int) -> str:
    return "All" if threshold == 0 else f"≥{threshold}"


@dataclass
class SliceScore:
    """Scores of one (phenomenon, minimum distance) slice."""
    phenomenon: str
    min_distance: int
    n_sentences: int
    bleu: Optional[float] = None
    ribes: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_baseline(self) -> bool:
        return self.phenomenon == BASELINE


def distance_trend(rows: Sequence[SliceScore], metric: str = "bleu") -> Dict[str, Optional[float]]:
    """
    Spearman of score against minimum distance, per phenomenon.

    Phenomena with fewer than two scored slices are left out; a constant series
    maps to None.
    """
    trends: Dict[str, Optional[float]] = {}
    for phenomenon in _phenomena(rows):
        scored = [r for r in rows if r.phenomenon == phenomenon and getattr(r, metric) is not None]
        if len(scored) < 2:
            continue
        try:
            trends[phenomenon] = spearman([r.min_distance for r in scored],
                                          [getattr(r, metric) for r in scored])
        except MetricInputError as e:
            logger.warning(f"Spearman undefined for {phenomenon} ({metric}): {e}")
            trends[phenomenon] = None
    return trends


def _phenomena(rows: Sequence[SliceScore]) -> List[str]:
    seen = []
    for row in rows:
        if not row.is_baseline and row.phenomenon not in seen:
            seen.append(row.phenomenon)
    return seen


def _row_label(phenomenon: str) -> str:
    if phenomenon == BASELINE:
        return BASELINE_LABEL
    try:
        return Phenomenon(phenomenon).label
    except ValueError:
        return phenomenon


def _thresholds(rows: Sequence[SliceScore]) -> List[int]:
    return sorted({r.min_distance for r in rows if not r.is_baseline})


def _baseline_first(table: pd.DataFrame) -> pd.DataFrame:
    if BASELINE_LABEL in table.index:
        order = [BASELINE_LABEL] + [label for label in table.index if label != BASELINE_LABEL]
        table = table.reindex(order)
    table.index.name = "phenomenon"
    return table


def build_size_table(rows: Sequence[SliceScore]) -> pd.DataFrame:
    """Sentences per phenomenon and threshold; the baseline fills the All column only."""
    thresholds = _thresholds(rows)
    columns = [threshold_label(t) for t in thresholds] or [threshold_label(0)]
    table = pd.DataFrame(index=pd.Index([], name="phenomenon"), columns=columns, dtype="object")
    for row in rows:
        label = _row_label(row.phenomenon)
        column = threshold_label(0) if row.is_baseline else threshold_label(row.min_distance)
        if column not in table.columns:
            table[column] = None
        table.loc[label, column] = int(row.n_sentences)
    return _baseline_first(table)


def build_score_table(rows: Sequence[SliceScore], metric: str = "bleu") -> pd.DataFrame:
    """
    Wide score table for one metric, with a Spearman column when any phenomenon
    has at least two scored thresholds.
    """
    thresholds = _thresholds(rows)
    columns = [threshold_label(t) for t in thresholds] or [threshold_label(0)]
    table = pd.DataFrame(index=pd.Index([], name="phenomenon"), columns=columns, dtype="object")
    for row in rows:
        value = getattr(row, metric)
        label = _row_label(row.phenomenon)
        column = threshold_label(0) if row.is_baseline else threshold_label(row.min_distance)
        if column not in table.columns:
            table[column] = None
        table.loc[label, column] = value

    trends = distance_trend(rows, metric)
    if trends:
        table[SPEARMAN_COLUMN] = None
        for phenomenon, rho in trends.items():
            table.loc[_row_label(phenomenon), SPEARMAN_COLUMN] = rho
    return _baseline_first(table)


def build_long_report(rows: Sequence[SliceScore], trend_metric: str = "bleu") -> pd.DataFrame:
    """One row per slice; spearman repeats the phenomenon's distance trend."""
    trends = distance_trend(rows, trend_metric)
    records = []
    for row in rows:
        records.append({
            "phenomenon": row.phenomenon,
            "min_distance": row.min_distance,
            "n_sentences": row.n_sentences,
            "bleu": row.bleu,
            "ribes": row.ribes,
            "spearman": trends.get(row.phenomenon),
        })
    return pd.DataFrame.from_records(records, columns=LONG_COLUMNS)


def read_long_report(path: Union[str, Path]) -> List[SliceScore]:
    """Rows of a TSV written by write_long_report."""
    frame = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    missing = [c for c in LONG_COLUMNS if c not in frame.columns]
    if missing:
        raise LddToolkitError(f"{path}: not a long report, missing columns {missing}")
    rows = []
    for record in frame.to_dict("records"):
        rows.append(SliceScore(
            phenomenon=record["phenomenon"],
            min_distance=int(record["min_distance"]),
            n_sentences=int(record["n_sentences"]),
            bleu=float(record["bleu"]) if record["bleu"] else None,
            ribes=float(record["ribes"]) if record["ribes"] else None,
        ))
    return rows


def _cell(value: Any, digits: int) -> str:
    if value is None or (isinstance(value, float) and pd.isna(value)):
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return str(value)
    return f"{float(value):.{digits}f}"


COLUMN_DIGITS = {"bleu": 2, "ribes": 4, "spearman": 4}


def format_table(table: pd.DataFrame, digits: int = 2) -> pd.DataFrame:
    """String-formatted copy so TSV output does not depend on float repr."""
    formatted = table.copy().astype(object)
    for column in formatted.columns:
        column_digits = 4 if column == SPEARMAN_COLUMN else COLUMN_DIGITS.get(column, digits)
        formatted[column] = [_cell(v, column_digits) for v in table[column]]
    return formatted


def write_table(table: pd.DataFrame, path: Union[str, Path], fmt: str = "tsv",
                digits: int = 2, index: bool = True) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "tsv":
        format_table(table, digits).to_csv(out, sep="\t", index=index, lineterminator="\n")
    elif fmt == "json":
        records = table.reset_index().to_dict("records") if index else table.to_dict("records")
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            json.dump([_json_record(r) for r in records], f, indent=2, ensure_ascii=False)
            f.write("\n")
    else:
        raise LddToolkitError(f"unknown report format '{fmt}'")
    logger.info(f"Wrote {out}")
    return out


def _json_record(record: Dict[str, Any]) -> Dict[str, Any]:
    clean = {}
    for key, value in record.items():
        if value is None or (isinstance(value, float) and pd.isna(value)):
            clean[str(key)] = None
        elif hasattr(value, "item"):
            clean[str(key)] = value.item()
        else:
            clean[str(key)] = value
    return clean


def write_long_report(rows: Sequence[SliceScore], path: Union[str, Path], fmt: str = "tsv") -> Path:
    table = build_long_report(rows)
    if fmt == "json":
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        payload = []
        for record, row in zip(table.to_dict("records"), rows):
            entry = _json_record(record)
            entry.update(row.details)
            payload.append(entry)
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, ensure_ascii=False)
            f.write("\n")
        logger.info(f"Wrote {out}")
        return out
    return write_table(table, path, fmt="tsv", index=False)
