"""Pre-test and post-test engine.

A course pre-test runs exactly once per learner and course: it assigns the
initial cognitive status and seeds the overlay from its concept-tagged
items. Post-tests are unbounded and each one blends its result into the
concept's overlay score, then recomputes the course status from the mean
overlay over the course's concepts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from typing import TYPE_CHECKING, Mapping

from .errors import (
    AlreadyTaken,
    AnswerCountMismatch,
    MalformedDocument,
    NotEnrolled,
    OutOfRange,
    UnknownConcept,
)
from .learner import (
    DEFAULT_RETENTION,
    LearnerRecord,
    TraceKind,
    get_concept_score,
    has_pretest,
    update_concept_score,
    with_trace,
)
from .vocab import Level

if TYPE_CHECKING:
    from .content import CourseGraph

# Cognitive-status cut points on the correct fraction: below the lower
# bound Beginner, above the upper bound Expert, Intermediate between
# (inclusive on both bounds).
LEVEL_LOWER_BOUND = 0.4
LEVEL_UPPER_BOUND = 0.75


@dataclass(frozen=True)
class TestItem:
    """Single-correct multiple-choice item, optionally tied to a concept."""

    item_id: str
    prompt: str
    options: tuple[str, ...]
    correct_option: int
    concept_id: str | None = None


@dataclass(frozen=True)
class TestDefinition:
    """A knowledge questionnaire; concept_id is None for the course pre-test."""

    test_id: str
    course_id: str
    concept_id: str | None
    items: tuple[TestItem, ...]


@dataclass(frozen=True)
class TestResult:
    test_id: str
    learner_id: str
    fraction: float
    level: Level | None
    timestamp: datetime


def level_from_fraction(
    fraction: float,
    *,
    lower: float = LEVEL_LOWER_BOUND,
    upper: float = LEVEL_UPPER_BOUND,
) -> Level:
    """Map a correct fraction in [0, 1] onto the three-level status."""
    if not 0.0 <= fraction <= 1.0:
        raise OutOfRange(f"fraction must be in [0, 1], got {fraction}")
    if fraction < lower:
        return Level.BEGINNER
    if fraction <= upper:
        return Level.INTERMEDIATE
    return Level.EXPERT


def grade_answers(
    test: TestDefinition, answers: Mapping[str, int]
) -> tuple[float, dict[str, float]]:
    """Grade answers keyed by item id against the test key.

    Returns the overall correct fraction and, for concept-tagged items,
    the per-concept fraction. Grading matches answers to items by id, so
    item order never matters.
    """
    expected = {item.item_id for item in test.items}
    got = set(answers)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        raise AnswerCountMismatch(
            f"answers do not cover the test items (missing {missing}, unexpected {extra})"
        )
    correct = 0
    per_concept: dict[str, list[int]] = {}
    for item in test.items:
        choice = answers[item.item_id]
        if not isinstance(choice, int) or not 0 <= choice < len(item.options):
            raise OutOfRange(
                f"item {item.item_id!r}: option index {choice!r} out of range"
            )
        hit = 1 if choice == item.correct_option else 0
        correct += hit
        if item.concept_id is not None:
            per_concept.setdefault(item.concept_id, []).append(hit)
    fraction = correct / len(test.items)
    concept_fractions = {
        concept: sum(hits) / len(hits) for concept, hits in per_concept.items()
    }
    return fraction, concept_fractions


def grade_pretest(
    record: LearnerRecord,
    course: "CourseGraph",
    test: TestDefinition,
    answers: Mapping[str, int],
    *,
    lower: float = LEVEL_LOWER_BOUND,
    upper: float = LEVEL_UPPER_BOUND,
    at: datetime | None = None,
) -> tuple[TestResult, LearnerRecord]:
    """Grade the one-time course pre-test and initialize the learner.

    Sets the course status from the overall fraction and seeds the overlay
    with the per-concept fractions of concept-tagged items.
    """
    if test.concept_id is not None:
        raise MalformedDocument(f"test {test.test_id!r} is not a course pre-test")
    if course.course_id not in record.enrolled_courses:
        raise NotEnrolled(f"learner {record.learner_id!r} is not enrolled in {course.course_id!r}")
    if has_pretest(record, course.course_id):
        raise AlreadyTaken(
            f"pre-test for course {course.course_id!r} was already taken"
        )
    fraction, concept_fractions = grade_answers(test, answers)
    unknown = [c for c in concept_fractions if c not in course.concepts]
    if unknown:
        raise UnknownConcept(f"pre-test items reference unknown concepts: {unknown}")
    level = level_from_fraction(fraction, lower=lower, upper=upper)
    overlay = dict(record.overlay)
    overlay.update(concept_fractions)
    status = dict(record.status)
    status[course.course_id] = level
    updated = with_trace(
        record,
        TraceKind.PRETEST,
        {
            "course_id": course.course_id,
            "test_id": test.test_id,
            "fraction": fraction,
            "level": level.value,
        },
        at,
        overlay=overlay,
        status=status,
    )
    result = TestResult(
        test_id=test.test_id,
        learner_id=record.learner_id,
        fraction=fraction,
        level=level,
        timestamp=updated.traces[-1].timestamp,
    )
    return result, updated


def grade_posttest(
    record: LearnerRecord,
    course: "CourseGraph",
    test: TestDefinition,
    answers: Mapping[str, int],
    *,
    retention: float = DEFAULT_RETENTION,
    lower: float = LEVEL_LOWER_BOUND,
    upper: float = LEVEL_UPPER_BOUND,
    at: datetime | None = None,
) -> tuple[TestResult, LearnerRecord]:
    """Grade a concept post-test; repeatable after every study session.

    The concept's overlay score moves by the convex update rule and the
    course status is recomputed from the mean overlay score over all of
    the course's concepts (unassessed concepts count as 0).
    """
    if test.concept_id is None:
        raise MalformedDocument(f"test {test.test_id!r} is not bound to a concept")
    if test.concept_id not in course.concepts:
        raise UnknownConcept(
            f"test {test.test_id!r} targets unknown concept {test.concept_id!r}"
        )
    if course.course_id not in record.enrolled_courses:
        raise NotEnrolled(f"learner {record.learner_id!r} is not enrolled in {course.course_id!r}")
    fraction, _ = grade_answers(test, answers)
    updated = update_concept_score(
        record,
        test.concept_id,
        fraction,
        retention=retention,
        detail={"course_id": course.course_id, "test_id": test.test_id},
        at=at,
    )
    mean_score = sum(
        get_concept_score(updated, concept_id) for concept_id in course.concepts
    ) / len(course.concepts)
    level = level_from_fraction(mean_score, lower=lower, upper=upper)
    status = dict(updated.status)
    status[course.course_id] = level
    updated = replace(updated, status=status)
    result = TestResult(
        test_id=test.test_id,
        learner_id=record.learner_id,
        fraction=fraction,
        level=level,
        timestamp=updated.traces[-1].timestamp,
    )
    return result, updated


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def test_from_document(doc: Mapping, course_id: str) -> TestDefinition:
    if not isinstance(doc, Mapping):
        raise MalformedDocument("each test must be an object")
    test_id = doc.get("test_id")
    if not isinstance(test_id, str) or not test_id:
        raise MalformedDocument("test_id must be a non-empty string")
    raw_items = doc.get("items")
    if not isinstance(raw_items, list) or not raw_items:
        raise MalformedDocument(f"test {test_id!r} must have at least one item")
    items = []
    seen: set[str] = set()
    for raw in raw_items:
        if not isinstance(raw, Mapping):
            raise MalformedDocument(f"test {test_id!r}: each item must be an object")
        item_id = raw.get("item_id")
        if not isinstance(item_id, str) or not item_id:
            raise MalformedDocument(f"test {test_id!r}: item_id must be a non-empty string")
        if item_id in seen:
            raise MalformedDocument(f"test {test_id!r}: duplicate item id {item_id!r}")
        seen.add(item_id)
        options = raw.get("options")
        if not isinstance(options, list) or len(options) < 2:
            raise MalformedDocument(
                f"test {test_id!r}: item {item_id!r} needs at least two options"
            )
        correct = raw.get("correct_option")
        if not isinstance(correct, int) or not 0 <= correct < len(options):
            raise MalformedDocument(
                f"test {test_id!r}: item {item_id!r} correct_option out of range"
            )
        items.append(
            TestItem(
                item_id=item_id,
                prompt=str(raw.get("prompt", "")),
                options=tuple(str(o) for o in options),
                correct_option=correct,
                concept_id=raw.get("concept_id"),
            )
        )
    concept_id = doc.get("concept_id")
    if concept_id is not None and not isinstance(concept_id, str):
        raise MalformedDocument(f"test {test_id!r}: concept_id must be a string or null")
    return TestDefinition(
        test_id=test_id,
        course_id=course_id,
        concept_id=concept_id,
        items=tuple(items),
    )


def test_to_document(test: TestDefinition) -> dict:
    return {
        "test_id": test.test_id,
        "concept_id": test.concept_id,
        "items": [
            {
                "item_id": item.item_id,
                "prompt": item.prompt,
                "options": list(item.options),
                "correct_option": item.correct_option,
                **({"concept_id": item.concept_id} if item.concept_id else {}),
            }
            for item in test.items
        ],
    }


def test_result_document(result: TestResult) -> dict:
    return {
        "test_id": result.test_id,
        "learner_id": result.learner_id,
        "fraction": result.fraction,
        "level": result.level.value if result.level else None,
        "timestamp": result.timestamp.isoformat(),
    }
