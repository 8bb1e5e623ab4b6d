"""Pedagogical rules: style to adaptation parameters, ordering, prediction.

Each dimension measurement turns into a (pole, strength) pair: Uncertain
measurements switch that dimension's adaptation off, Moderate makes it
soft (reorder but never remove), Strong makes it strict (may also filter).

The Reasoning pole drives the role ordering of a page: inductive learners
meet examples and facts before theory and definitions, deductive learners
the reverse. The prediction unit walks the prerequisite graph and picks
the first unmastered concept whose prerequisites are all ready.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .content import CourseGraph, Fragment, topological_order
from .errors import UnknownCourse
from .instrument import StyleProfile
from .learner import LearnerRecord, get_concept_score
from .vocab import POLES_BY_DIMENSION, Confidence, Dimension, Pole, Role, Strength

# Overlay score at and above which a concept counts as mastered.
MASTERY_BOUND = 0.75
# Overlay score a prerequisite must reach before its dependents open up.
READINESS_BOUND = 0.6

STRENGTH_BY_CONFIDENCE: dict[Confidence, Strength] = {
    Confidence.UNCERTAIN: Strength.OFF,
    Confidence.MODERATE: Strength.SOFT,
    Confidence.STRONG: Strength.STRICT,
}

# Role order preferences per Reasoning pole: concrete material first for
# inductive learners, principles first for deductive learners.
INDUCTIVE_ROLE_RANK: tuple[Role, ...] = (
    Role.EXAMPLE,
    Role.FACT,
    Role.ACTIVITY,
    Role.PRACTICE,
    Role.THEORY,
    Role.DEFINITION,
    Role.DEMONSTRATION,
    Role.DISCUSSION,
)
DEDUCTIVE_ROLE_RANK: tuple[Role, ...] = (
    Role.DEFINITION,
    Role.THEORY,
    Role.DEMONSTRATION,
    Role.EXAMPLE,
    Role.FACT,
    Role.PRACTICE,
    Role.ACTIVITY,
    Role.DISCUSSION,
)


@dataclass(frozen=True)
class DimensionParam:
    pole: Pole
    strength: Strength


@dataclass(frozen=True)
class AdaptationParams:
    """Per-dimension adaptation switches derived from a style profile."""

    by_dimension: Mapping[Dimension, DimensionParam]

    def pole(self, dimension: Dimension) -> Pole:
        return self.by_dimension[dimension].pole

    def strength(self, dimension: Dimension) -> Strength:
        return self.by_dimension[dimension].strength


def neutral_params() -> AdaptationParams:
    """All dimensions off: the identity adaptation."""
    return AdaptationParams(
        by_dimension={
            dim: DimensionParam(pole=pair[0], strength=Strength.OFF)
            for dim, pair in POLES_BY_DIMENSION.items()
        }
    )


def adaptation_params(style: StyleProfile) -> AdaptationParams:
    """Map each dimension's confidence band onto an adaptation strength."""
    return AdaptationParams(
        by_dimension={
            score.dimension: DimensionParam(
                pole=score.pole,
                strength=STRENGTH_BY_CONFIDENCE[score.confidence],
            )
            for score in style.scores
        }
    )


def role_ranking(reasoning_pole: Pole) -> tuple[Role, ...]:
    if reasoning_pole is Pole.DEDUCTIVE:
        return DEDUCTIVE_ROLE_RANK
    return INDUCTIVE_ROLE_RANK


def order_fragments(
    fragments: Sequence[Fragment], params: AdaptationParams
) -> list[Fragment]:
    """Order fragments by the Reasoning pole's role ranking.

    A stable sort, so fragments of equal rank keep their authored order.
    When the Reasoning dimension is off the input order is returned
    verbatim.
    """
    reasoning = params.by_dimension[Dimension.REASONING]
    if reasoning.strength is Strength.OFF:
        return list(fragments)
    rank = {role: index for index, role in enumerate(role_ranking(reasoning.pole))}
    return sorted(fragments, key=lambda fragment: rank[fragment.role])


def predict_next_concept(
    course: CourseGraph,
    record: LearnerRecord,
    *,
    mastery: float = MASTERY_BOUND,
    readiness: float = READINESS_BOUND,
) -> str | None:
    """The next concept worth visiting, or None when the course is done.

    Candidates are concepts below the mastery bound whose prerequisites
    all sit at or above the readiness bound; the first in deterministic
    topological order wins.
    """
    if course.course_id not in record.enrolled_courses:
        raise UnknownCourse(
            f"learner {record.learner_id!r} is not enrolled in {course.course_id!r}"
        )
    for concept_id in topological_order(course):
        if get_concept_score(record, concept_id) >= mastery:
            continue
        prerequisites = course.concepts[concept_id].prerequisite_ids
        if all(get_concept_score(record, p) >= readiness for p in prerequisites):
            return concept_id
    return None
