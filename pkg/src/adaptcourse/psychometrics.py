"""Instrument reliability and cohort-level style statistics.

Cronbach's alpha measures internal consistency over a respondents-by-items
score matrix:

    alpha = k / (k - 1) * (1 - sum(item variances) / variance(total score))

Variances default to the population form (divisor n); pass
``population=False`` for the sample form (divisor n - 1). Alpha is
invariant to that choice only up to the common factor, so a default must
be fixed: golden values in the test suite assume population variances.

The cohort side counts learners per style id and exposes the modal style,
which is what a new learner receives when they skip the questionnaire.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateMatrix, MalformedDocument, TooFewItems, TooFewRows
from .instrument import Instrument, ResponseSheet, StyleProfile
from .vocab import Dimension, InstrumentKind

STYLE_IDS = tuple(range(1, 17))

# Minimum acceptable alpha by what the questionnaire measures.
ACCEPTANCE_THRESHOLDS: dict[InstrumentKind, float] = {
    InstrumentKind.PREFERENCE: 0.50,
    InstrumentKind.KNOWLEDGE: 0.75,
}

FALLBACK_STYLE_ID = 1


@dataclass(frozen=True)
class ReliabilityReport:
    """Alpha plus the verdict against the kind-specific threshold."""

    alpha: float
    k: int
    n: int
    instrument_kind: InstrumentKind
    threshold: float
    acceptable: bool


@dataclass(frozen=True)
class StyleHistogram:
    """Counts of learners per style id, all 16 ids always present."""

    counts: Mapping[int, int]
    total: int


def _as_matrix(matrix: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    try:
        arr = np.asarray(matrix, dtype=float)
    except ValueError as exc:
        raise MalformedDocument(f"response matrix must be rectangular: {exc}") from None
    if arr.ndim != 2:
        raise MalformedDocument("response matrix must be two-dimensional")
    n, k = arr.shape
    if k < 2:
        raise TooFewItems(f"need at least 2 items, got {k}")
    if n < 2:
        raise TooFewRows(f"need at least 2 respondents, got {n}")
    return arr


def cronbach_alpha(
    matrix: Sequence[Sequence[float]] | np.ndarray, *, population: bool = True
) -> float:
    """Cronbach's alpha of a respondents-by-items matrix.

    Always at most 1; may be negative when items covary negatively.
    Raises DegenerateMatrix when every respondent has the same total score,
    since the formula divides by the total-score variance.
    """
    arr = _as_matrix(matrix)
    ddof = 0 if population else 1
    k = arr.shape[1]
    item_variances = arr.var(axis=0, ddof=ddof)
    total_variance = arr.sum(axis=1).var(ddof=ddof)
    if total_variance == 0.0:
        raise DegenerateMatrix("total score has zero variance")
    return float(k / (k - 1) * (1.0 - item_variances.sum() / total_variance))


def acceptance_threshold(instrument_kind: InstrumentKind) -> float:
    return ACCEPTANCE_THRESHOLDS[InstrumentKind(instrument_kind)]


def reliability_verdict(alpha: float, instrument_kind: InstrumentKind) -> bool:
    """Whether alpha clears the threshold for this kind of questionnaire."""
    return alpha >= acceptance_threshold(instrument_kind)


def reliability_report(
    matrix: Sequence[Sequence[float]] | np.ndarray,
    instrument_kind: InstrumentKind,
    *,
    population: bool = True,
) -> ReliabilityReport:
    arr = _as_matrix(matrix)
    alpha = cronbach_alpha(arr, population=population)
    kind = InstrumentKind(instrument_kind)
    return ReliabilityReport(
        alpha=alpha,
        k=arr.shape[1],
        n=arr.shape[0],
        instrument_kind=kind,
        threshold=acceptance_threshold(kind),
        acceptable=reliability_verdict(alpha, kind),
    )


def reliability_report_document(report: ReliabilityReport) -> dict:
    return {
        "alpha": report.alpha,
        "k": report.k,
        "n": report.n,
        "instrument_kind": report.instrument_kind.value,
        "threshold": report.threshold,
        "acceptable": report.acceptable,
    }


# ---------------------------------------------------------------------------
# Matrices from sheets and CSV exports
# ---------------------------------------------------------------------------

def matrix_from_sheets(
    sheets: Sequence[ResponseSheet], instrument: Instrument
) -> np.ndarray:
    """Encode a/b sheets as a 1/0 matrix, columns in instrument order."""
    question_ids = instrument.question_ids()
    rows = [
        [1.0 if sheet.answers[qid] == "a" else 0.0 for qid in question_ids]
        for sheet in sheets
    ]
    return np.asarray(rows, dtype=float)


def matrix_from_csv(path: str | Path) -> np.ndarray:
    """Read a response matrix from CSV: header row, then one row per learner.

    Cells may be 'a'/'b' (encoded 1/0) or plain numbers.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            rows = [row for row in reader if row]
    except OSError as exc:
        raise MalformedDocument(f"cannot read responses CSV: {exc}") from exc
    if len(rows) < 2:
        raise MalformedDocument("responses CSV needs a header row and data rows")
    header, data = rows[0], rows[1:]
    width = len(header)
    values = []
    for line_no, row in enumerate(data, start=2):
        if len(row) != width:
            raise MalformedDocument(f"row {line_no} has {len(row)} cells, expected {width}")
        values.append([_cell_value(cell, line_no) for cell in row])
    return np.asarray(values, dtype=float)


def _cell_value(cell: str, line_no: int) -> float:
    text = cell.strip().lower()
    if text == "a":
        return 1.0
    if text == "b":
        return 0.0
    try:
        return float(text)
    except ValueError:
        raise MalformedDocument(
            f"row {line_no}: cell {cell!r} is neither a/b nor numeric"
        ) from None


def dimension_alphas(
    sheets: Sequence[ResponseSheet], instrument: Instrument, *, population: bool = True
) -> dict[Dimension, float]:
    """Alpha computed separately over each dimension's 11 items."""
    full = matrix_from_sheets(sheets, instrument)
    question_ids = instrument.question_ids()
    out = {}
    for dimension in instrument.dimension_poles:
        columns = [
            question_ids.index(q.question_id)
            for q in instrument.questions_for(dimension)
        ]
        out[dimension] = cronbach_alpha(full[:, columns], population=population)
    return out


# ---------------------------------------------------------------------------
# Cohort style statistics
# ---------------------------------------------------------------------------

def style_distribution(profiles: Iterable[StyleProfile | int]) -> StyleHistogram:
    """Count profiles per style id; the empty cohort gives an all-zero map."""
    counts = {style_id: 0 for style_id in STYLE_IDS}
    total = 0
    for profile in profiles:
        style_id = profile if isinstance(profile, int) else profile.style_id
        counts[style_id] += 1
        total += 1
    return StyleHistogram(counts=counts, total=total)


def modal_style(histogram: StyleHistogram) -> int:
    """The most common style id, lowest id winning ties.

    An empty histogram falls back to style 1, the documented default for
    cohorts with no measurements yet.
    """
    if histogram.total == 0:
        return FALLBACK_STYLE_ID
    best = max(STYLE_IDS, key=lambda s: (histogram.counts.get(s, 0), -s))
    return best


def style_histogram_document(histogram: StyleHistogram) -> dict:
    return {
        "counts": {str(style_id): histogram.counts.get(style_id, 0) for style_id in STYLE_IDS},
        "total": histogram.total,
        "modal_style": modal_style(histogram),
    }
