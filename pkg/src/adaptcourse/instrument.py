"""Learning-style instrument model and scoring.

The instrument is a forced-choice questionnaire of 44 two-option items,
11 per bipolar dimension. Scoring a dimension counts 'a' answers (M) and
'b' answers (N) over its 11 items: the signed difference M - N places the
learner on one pole and its magnitude sets a confidence band. A complete
profile combines the four poles into one of 16 style ids.

All types are immutable and all operations pure.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateDimension,
    DuplicateQuestionId,
    IncompleteSheet,
    InstrumentMismatch,
    MalformedDocument,
    MissingDimension,
    OutOfRange,
    UnknownDimension,
    WrongQuestionCount,
)
from .vocab import (
    DIMENSION_ORDER,
    POLES_BY_DIMENSION,
    STYLE_BIT_WEIGHT,
    ZERO_POLES,
    Confidence,
    Dimension,
    Pole,
)

QUESTIONS_PER_DIMENSION = 11
TOTAL_QUESTIONS = QUESTIONS_PER_DIMENSION * len(DIMENSION_ORDER)
ANSWER_OPTIONS = ("a", "b")

# Confidence bands over |M - N|: 1..3 uncertain, 4..8 moderate, 9..11 strong.
UNCERTAIN_MAX = 3
MODERATE_MAX = 8
SCORE_MAX = QUESTIONS_PER_DIMENSION

STYLE_COUNT = 16

DEFAULT_INSTRUMENT_RESOURCE = "instrument.json"


@dataclass(frozen=True)
class Question:
    """One forced-choice item: a prompt with exactly two answers."""

    question_id: str
    dimension: Dimension
    prompt: str
    answer_a: str
    answer_b: str


@dataclass(frozen=True)
class Instrument:
    """A validated 44-item questionnaire definition.

    ``dimension_poles`` maps each dimension to its ordered pole pair:
    answer 'a' pulls toward the first pole, answer 'b' toward the second.
    """

    instrument_id: str
    questions: tuple[Question, ...]
    dimension_poles: Mapping[Dimension, tuple[Pole, Pole]]

    def questions_for(self, dimension: Dimension) -> tuple[Question, ...]:
        return tuple(q for q in self.questions if q.dimension is dimension)

    def question_ids(self) -> tuple[str, ...]:
        return tuple(q.question_id for q in self.questions)


@dataclass(frozen=True)
class ResponseSheet:
    """One learner's complete set of answers, keyed by question id."""

    instrument_id: str
    answers: Mapping[str, str]


@dataclass(frozen=True)
class DimensionScore:
    """Measurement of one dimension: counts, signed value, pole and band."""

    dimension: Dimension
    m: int
    n: int
    value: int
    pole: Pole
    confidence: Confidence


@dataclass(frozen=True)
class StyleProfile:
    """Four dimension scores plus the derived 16-way style id."""

    scores: tuple[DimensionScore, ...]
    style_id: int

    def score_for(self, dimension: Dimension) -> DimensionScore:
        for score in self.scores:
            if score.dimension is dimension:
                return score
        raise MissingDimension(f"profile has no {dimension.value} score")


# ---------------------------------------------------------------------------
# Instrument loading and validation
# ---------------------------------------------------------------------------

def instrument_from_document(doc: object) -> Instrument:
    """Build a validated Instrument from a parsed JSON document.

    Raises MalformedDocument, WrongQuestionCount, DuplicateQuestionId or
    UnknownDimension depending on which invariant the document breaks.
    """
    if not isinstance(doc, Mapping):
        raise MalformedDocument("instrument document must be a JSON object")
    instrument_id = doc.get("instrument_id")
    if not isinstance(instrument_id, str) or not instrument_id:
        raise MalformedDocument("instrument_id must be a non-empty string")
    raw_questions = doc.get("questions")
    if not isinstance(raw_questions, list):
        raise MalformedDocument("questions must be a list")

    questions: list[Question] = []
    seen: set[str] = set()
    for raw in raw_questions:
        if not isinstance(raw, Mapping):
            raise MalformedDocument("each question must be an object")
        question = Question(
            question_id=_require_str(raw, "question_id"),
            dimension=_parse_dimension(raw.get("dimension")),
            prompt=_require_str(raw, "prompt"),
            answer_a=_require_str(raw, "answer_a"),
            answer_b=_require_str(raw, "answer_b"),
        )
        if question.question_id in seen:
            raise DuplicateQuestionId(f"duplicate question id {question.question_id!r}")
        seen.add(question.question_id)
        questions.append(question)

    if len(questions) != TOTAL_QUESTIONS:
        raise WrongQuestionCount(
            f"expected {TOTAL_QUESTIONS} questions, found {len(questions)}"
        )
    for dimension in DIMENSION_ORDER:
        count = sum(1 for q in questions if q.dimension is dimension)
        if count != QUESTIONS_PER_DIMENSION:
            raise WrongQuestionCount(
                f"dimension {dimension.value} has {count} questions,"
                f" expected {QUESTIONS_PER_DIMENSION}"
            )

    poles = _parse_dimension_poles(doc.get("dimension_poles"))
    return Instrument(
        instrument_id=instrument_id,
        questions=tuple(questions),
        dimension_poles=poles,
    )


def load_instrument(path: str | Path) -> Instrument:
    """Load and validate an instrument from a UTF-8 JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedDocument(f"cannot read instrument file: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"instrument file is not valid JSON: {exc}") from exc
    return instrument_from_document(doc)


def default_instrument() -> Instrument:
    """The stand-in 4x11 instrument shipped with the package."""
    data = resources.files(__package__).joinpath("data", DEFAULT_INSTRUMENT_RESOURCE)
    return instrument_from_document(json.loads(data.read_text(encoding="utf-8")))


def _require_str(raw: Mapping, key: str) -> str:
    value = raw.get(key)
    if not isinstance(value, str) or not value:
        raise MalformedDocument(f"question field {key!r} must be a non-empty string")
    return value


def _parse_dimension(value: object) -> Dimension:
    try:
        return Dimension(value)
    except ValueError:
        raise UnknownDimension(f"unknown dimension {value!r}") from None


def _parse_dimension_poles(raw: object) -> dict[Dimension, tuple[Pole, Pole]]:
    if not isinstance(raw, Mapping):
        raise MalformedDocument("dimension_poles must be an object")
    poles: dict[Dimension, tuple[Pole, Pole]] = {}
    for key, pair in raw.items():
        dimension = _parse_dimension(key)
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MalformedDocument(
                f"dimension_poles[{dimension.value}] must list exactly two poles"
            )
        try:
            pole_a, pole_b = Pole(pair[0]), Pole(pair[1])
        except ValueError:
            raise MalformedDocument(
                f"dimension_poles[{dimension.value}] names an unknown pole"
            ) from None
        if {pole_a, pole_b} != set(POLES_BY_DIMENSION[dimension]):
            raise MalformedDocument(
                f"dimension_poles[{dimension.value}] must pair"
                f" {POLES_BY_DIMENSION[dimension][0].value} with"
                f" {POLES_BY_DIMENSION[dimension][1].value}"
            )
        if dimension in poles:
            raise MalformedDocument(f"dimension_poles repeats {dimension.value}")
        poles[dimension] = (pole_a, pole_b)
    missing = [d.value for d in DIMENSION_ORDER if d not in poles]
    if missing:
        raise MalformedDocument(f"dimension_poles missing {', '.join(missing)}")
    return poles


def instrument_to_document(instrument: Instrument) -> dict:
    return {
        "instrument_id": instrument.instrument_id,
        "questions": [
            {
                "question_id": q.question_id,
                "dimension": q.dimension.value,
                "prompt": q.prompt,
                "answer_a": q.answer_a,
                "answer_b": q.answer_b,
            }
            for q in instrument.questions
        ],
        "dimension_poles": {
            dim.value: [pair[0].value, pair[1].value]
            for dim, pair in instrument.dimension_poles.items()
        },
    }


# ---------------------------------------------------------------------------
# Response sheets
# ---------------------------------------------------------------------------

def validate_sheet(sheet: ResponseSheet, instrument: Instrument) -> None:
    """Check that the sheet matches the instrument and answers every item once.

    Raises InstrumentMismatch when ids differ, IncompleteSheet when any
    question is unanswered, answered with something other than 'a'/'b', or
    when the sheet names question ids the instrument does not have.
    """
    if sheet.instrument_id != instrument.instrument_id:
        raise InstrumentMismatch(
            f"sheet is for instrument {sheet.instrument_id!r},"
            f" expected {instrument.instrument_id!r}"
        )
    expected = set(instrument.question_ids())
    got = set(sheet.answers)
    unknown = got - expected
    if unknown:
        raise IncompleteSheet(f"sheet answers unknown question ids: {sorted(unknown)}")
    missing = expected - got
    if missing:
        raise IncompleteSheet(f"sheet is missing answers for: {sorted(missing)}")
    bad = [qid for qid, answer in sheet.answers.items() if answer not in ANSWER_OPTIONS]
    if bad:
        raise IncompleteSheet(f"answers must be 'a' or 'b'; invalid for: {sorted(bad)}")


def sheets_from_csv(path: str | Path, instrument: Instrument) -> list[ResponseSheet]:
    """Read response sheets from a CSV export, one row per learner.

    The header must include every question id of the instrument; extra
    columns are ignored. Cells hold 'a' or 'b'.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise MalformedDocument("responses CSV has no header row")
            header = set(reader.fieldnames)
            missing = [qid for qid in instrument.question_ids() if qid not in header]
            if missing:
                raise MalformedDocument(f"responses CSV missing columns: {missing}")
            sheets = []
            for row in reader:
                answers = {qid: (row[qid] or "").strip().lower()
                           for qid in instrument.question_ids()}
                sheet = ResponseSheet(instrument.instrument_id, answers)
                validate_sheet(sheet, instrument)
                sheets.append(sheet)
    except OSError as exc:
        raise MalformedDocument(f"cannot read responses CSV: {exc}") from exc
    return sheets


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------

def classify_confidence(value: int) -> Confidence:
    """Band the signed dimension value by its magnitude.

    1..3 is Uncertain, 4..8 Moderate, 9..11 Strong. Zero and anything
    beyond 11 cannot come out of an 11-item dimension and raise OutOfRange.
    """
    magnitude = abs(int(value))
    if magnitude == 0 or magnitude > SCORE_MAX:
        raise OutOfRange(f"|value| must be in 1..{SCORE_MAX}, got {magnitude}")
    if magnitude <= UNCERTAIN_MAX:
        return Confidence.UNCERTAIN
    if magnitude <= MODERATE_MAX:
        return Confidence.MODERATE
    return Confidence.STRONG


def score_dimension(
    sheet: ResponseSheet, instrument: Instrument, dimension: Dimension
) -> DimensionScore:
    """Score one dimension of a complete sheet.

    m counts 'a' answers and n counts 'b' answers over the dimension's 11
    items; value = m - n. A positive value indicates the dimension's
    pole_a, a negative one pole_b.
    """
    validate_sheet(sheet, instrument)
    questions = instrument.questions_for(dimension)
    m = sum(1 for q in questions if sheet.answers[q.question_id] == "a")
    n = len(questions) - m
    value = m - n
    pole_a, pole_b = instrument.dimension_poles[dimension]
    pole = pole_a if value > 0 else pole_b
    return DimensionScore(
        dimension=dimension,
        m=m,
        n=n,
        value=value,
        pole=pole,
        confidence=classify_confidence(value),
    )


def score_sheet(sheet: ResponseSheet, instrument: Instrument) -> tuple[DimensionScore, ...]:
    """Score all four dimensions in canonical order."""
    return tuple(score_dimension(sheet, instrument, d) for d in DIMENSION_ORDER)


def derive_style(scores: Iterable[DimensionScore]) -> StyleProfile:
    """Combine one score per dimension into a style profile.

    The style id encodes the chosen poles as four bits (Processing 1,
    Reasoning 2, Perception 4, Progress 8) plus one, so the all-zero-pole
    combination (Active, Inductive, Verbal, Sequential) is style 1.
    """
    by_dimension: dict[Dimension, DimensionScore] = {}
    for score in scores:
        if score.dimension in by_dimension:
            raise DuplicateDimension(f"two scores for {score.dimension.value}")
        by_dimension[score.dimension] = score
    missing = [d.value for d in DIMENSION_ORDER if d not in by_dimension]
    if missing:
        raise MissingDimension(f"missing scores for: {', '.join(missing)}")

    style_id = 1
    for dimension in DIMENSION_ORDER:
        if by_dimension[dimension].pole not in ZERO_POLES:
            style_id += STYLE_BIT_WEIGHT[dimension]
    ordered = tuple(by_dimension[d] for d in DIMENSION_ORDER)
    return StyleProfile(scores=ordered, style_id=style_id)


def profile_from_sheet(sheet: ResponseSheet, instrument: Instrument) -> StyleProfile:
    """Score a complete sheet and derive its style profile."""
    return derive_style(score_sheet(sheet, instrument))


def style_poles(style_id: int) -> dict[Dimension, Pole]:
    """Invert a style id back to its pole per dimension."""
    if not 1 <= style_id <= STYLE_COUNT:
        raise OutOfRange(f"style id must be in 1..{STYLE_COUNT}, got {style_id}")
    bits = style_id - 1
    poles = {}
    for dimension in DIMENSION_ORDER:
        zero, one = POLES_BY_DIMENSION[dimension]
        poles[dimension] = one if bits & STYLE_BIT_WEIGHT[dimension] else zero
    return poles


def uncertain_profile(style_id: int) -> StyleProfile:
    """A weakest-confidence profile pointing at the given style's poles.

    Used when a style is assigned by default rather than measured: every
    dimension gets magnitude 1 (Uncertain) toward the style's pole.
    """
    scores = []
    for dimension, pole in style_poles(style_id).items():
        value = 1 if pole in ZERO_POLES else -1
        m = (QUESTIONS_PER_DIMENSION + value) // 2
        scores.append(
            DimensionScore(
                dimension=dimension,
                m=m,
                n=QUESTIONS_PER_DIMENSION - m,
                value=value,
                pole=pole,
                confidence=Confidence.UNCERTAIN,
            )
        )
    return StyleProfile(scores=tuple(scores), style_id=style_id)


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def dimension_score_document(score: DimensionScore) -> dict:
    return {
        "dimension": score.dimension.value,
        "m": score.m,
        "n": score.n,
        "value": score.value,
        "pole": score.pole.value,
        "confidence": score.confidence.value,
    }


def dimension_score_from_document(doc: Mapping) -> DimensionScore:
    return DimensionScore(
        dimension=Dimension(doc["dimension"]),
        m=int(doc["m"]),
        n=int(doc["n"]),
        value=int(doc["value"]),
        pole=Pole(doc["pole"]),
        confidence=Confidence(doc["confidence"]),
    )


def style_profile_document(profile: StyleProfile) -> dict:
    return {
        "style_id": profile.style_id,
        "scores": [dimension_score_document(s) for s in profile.scores],
    }


def style_profile_from_document(doc: Mapping) -> StyleProfile:
    return StyleProfile(
        scores=tuple(dimension_score_from_document(s) for s in doc["scores"]),
        style_id=int(doc["style_id"]),
    )
