"""Course page generation: the two-filter pipeline plus adaptive links.

For a (learner, course, concept) triple the generator runs

    fragments_for_concept -> filter_by_style -> filter_by_level
                          -> order_fragments -> build_links

in that fixed order. Filters never starve a page: when a strict filter
would remove everything it is relaxed instead and a degradation warning is
attached to the page. The whole pipeline is deterministic for fixed
inputs; only the generation timestamp varies.

Navigation links cover the concepts connected to the current one through
the prerequisite graph, plus the predicted next concept. For readiness
checks the current concept counts as satisfied: from the page being
studied, its direct continuation must stay reachable. Sequential learners
get not-ready links hidden; global learners see everything, annotated.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

from .content import (
    CourseGraph,
    Fragment,
    ancestors,
    descendants,
    fragments_for_concept,
    topological_order,
)
from .errors import NotEnrolled, PretestMissing, UnknownConcept
from .learner import LearnerRecord, get_concept_score, has_pretest, with_trace
from .pedagogy import (
    MASTERY_BOUND,
    READINESS_BOUND,
    AdaptationParams,
    adaptation_params,
    neutral_params,
    order_fragments,
    predict_next_concept,
)
from .vocab import (
    DIMENSION_ORDER,
    LEVEL_ORDER,
    Annotation,
    Dimension,
    Goal,
    Level,
    Pole,
    Strength,
    TraceKind,
    opposite_pole,
)


@dataclass(frozen=True)
class NavLink:
    target_concept_id: str
    annotation: Annotation
    visible: bool


@dataclass(frozen=True)
class PageProgress:
    concept_score: float
    course_level: Level


@dataclass(frozen=True)
class CoursePage:
    course_id: str
    concept_id: str
    learner_id: str
    fragments: tuple[str, ...]
    links: tuple[NavLink, ...]
    progress: PageProgress
    warnings: tuple[str, ...]
    generated_at: datetime


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

def filter_by_style(
    fragments: Sequence[Fragment], params: AdaptationParams
) -> tuple[list[Fragment], list[str]]:
    """Drop fragments that clash with strictly preferred poles.

    Per dimension: off and soft never remove anything; strict removes
    fragments tagged exclusively with the opposite pole. A strict removal
    that would empty the set is skipped and reported as a degradation
    warning instead.
    """
    kept = list(fragments)
    warnings: list[str] = []
    for dimension in DIMENSION_ORDER:
        param = params.by_dimension[dimension]
        if param.strength is not Strength.STRICT:
            continue
        avoided = opposite_pole(param.pole)
        survivors = [
            f for f in kept
            if not (avoided in f.pole_tags and param.pole not in f.pole_tags)
        ]
        if survivors:
            kept = survivors
        elif kept:
            warnings.append(f"style-filter-relaxed:{dimension.value}")
    return kept, warnings


def filter_by_level(
    fragments: Sequence[Fragment], course_level: Level, goal: Goal
) -> tuple[list[Fragment], list[str]]:
    """Keep fragments whose required level the learner has reached.

    A general goal caps Expert learners at Intermediate material: they
    asked for an overview, not the deep end. The never-empty guarantee
    applies as in the style filter.
    """
    ceiling = LEVEL_ORDER[course_level]
    if goal is Goal.GENERAL and course_level is Level.EXPERT:
        ceiling = LEVEL_ORDER[Level.INTERMEDIATE]
    survivors = [f for f in fragments if LEVEL_ORDER[f.required_level] <= ceiling]
    if survivors or not fragments:
        return survivors, []
    return list(fragments), ["level-filter-relaxed"]


# ---------------------------------------------------------------------------
# Links
# ---------------------------------------------------------------------------

def build_links(
    course: CourseGraph,
    concept_id: str,
    record: LearnerRecord,
    params: AdaptationParams,
    *,
    mastery: float = MASTERY_BOUND,
    readiness: float = READINESS_BOUND,
) -> list[NavLink]:
    """Adaptive navigation links for the page at one concept.

    Targets are the concept's prerequisite-graph relatives (ancestors and
    descendants) plus the predicted next concept, ordered by the course's
    topological order. The predicted concept is recommended; targets with
    an unready prerequisite other than the current concept are not_ready.
    When the Progress dimension points at the Sequential pole (soft or
    strict), not_ready links are hidden rather than shown.
    """
    if concept_id not in course.concepts:
        raise UnknownConcept(f"unknown concept {concept_id!r}")
    predicted = predict_next_concept(
        course, record, mastery=mastery, readiness=readiness
    )
    targets = ancestors(course, concept_id) | descendants(course, concept_id)
    if predicted is not None:
        targets.add(predicted)
    targets.discard(concept_id)

    progress_param = params.by_dimension[Dimension.PROGRESS]
    hide_not_ready = (
        progress_param.strength is not Strength.OFF
        and progress_param.pole is Pole.SEQUENTIAL
    )

    position = {cid: index for index, cid in enumerate(topological_order(course))}
    links = []
    for target in sorted(targets, key=position.__getitem__):
        unmet = any(
            get_concept_score(record, p) < readiness
            for p in course.concepts[target].prerequisite_ids
            if p != concept_id
        )
        if target == predicted:
            annotation = Annotation.RECOMMENDED
        elif unmet:
            annotation = Annotation.NOT_READY
        else:
            annotation = Annotation.NEUTRAL
        visible = not (hide_not_ready and annotation is Annotation.NOT_READY)
        links.append(NavLink(target_concept_id=target, annotation=annotation, visible=visible))
    return links


# ---------------------------------------------------------------------------
# Page generation
# ---------------------------------------------------------------------------

def generate_page(
    record: LearnerRecord,
    course: CourseGraph,
    concept_id: str,
    *,
    mastery: float = MASTERY_BOUND,
    readiness: float = READINESS_BOUND,
    at: datetime | None = None,
) -> tuple[CoursePage, LearnerRecord]:
    """Build the adaptive page and append its page_visited trace.

    Requires enrollment and a graded pre-test for the course. A learner
    without any style profile gets the identity pipeline (all dimensions
    off), the mildest possible adaptation.
    """
    if course.course_id not in record.enrolled_courses:
        raise NotEnrolled(
            f"learner {record.learner_id!r} is not enrolled in {course.course_id!r}"
        )
    if concept_id not in course.concepts:
        raise UnknownConcept(f"unknown concept {concept_id!r}")
    if not has_pretest(record, course.course_id):
        raise PretestMissing(
            f"course {course.course_id!r} requires a graded pre-test first"
        )

    params = adaptation_params(record.style) if record.style else neutral_params()
    course_level = record.status[course.course_id]

    base = fragments_for_concept(course, concept_id)
    styled, style_warnings = filter_by_style(base, params)
    leveled, level_warnings = filter_by_level(styled, course_level, record.goal)
    ordered = order_fragments(leveled, params)
    links = build_links(
        course, concept_id, record, params, mastery=mastery, readiness=readiness
    )

    generated_at = at if at is not None else datetime.now(timezone.utc)
    page = CoursePage(
        course_id=course.course_id,
        concept_id=concept_id,
        learner_id=record.learner_id,
        fragments=tuple(f.fragment_id for f in ordered),
        links=tuple(links),
        progress=PageProgress(
            concept_score=get_concept_score(record, concept_id),
            course_level=course_level,
        ),
        warnings=tuple(style_warnings + level_warnings),
        generated_at=generated_at,
    )
    updated = with_trace(
        record,
        TraceKind.PAGE_VISITED,
        {"course_id": course.course_id, "concept_id": concept_id},
        at,
    )
    return page, updated


def page_document(page: CoursePage) -> dict:
    return {
        "course_id": page.course_id,
        "concept_id": page.concept_id,
        "learner_id": page.learner_id,
        "fragments": list(page.fragments),
        "links": [
            {
                "target_concept_id": link.target_concept_id,
                "annotation": link.annotation.value,
                "visible": link.visible,
            }
            for link in page.links
        ],
        "progress": {
            "concept_score": page.progress.concept_score,
            "course_level": page.progress.course_level.value,
        },
        "warnings": list(page.warnings),
        "generated_at": page.generated_at.isoformat(),
    }
