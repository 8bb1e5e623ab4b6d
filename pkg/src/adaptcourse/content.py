"""Domain model and multimedia base: concepts, prerequisites, fragments.

A course package is one JSON document holding the concept graph, the
objectives, the metadata-tagged fragments and the knowledge tests.
Ingestion validates referential integrity, prerequisite acyclicity and
that every concept serves at least one objective (directly or as a
transitive prerequisite of a concept that does).

The ingested CourseGraph is immutable and safe to share across sessions.
Authored order of concepts and fragments is preserved and is the
tie-breaking baseline for all downstream sorting.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .assessment import TestDefinition, test_from_document, test_to_document
from .errors import (
    CyclicPrerequisites,
    DanglingReference,
    EmptyCourse,
    MalformedDocument,
    UnknownConcept,
    UnreachableConcept,
)
from .vocab import Level, Media, Pole, Role


@dataclass(frozen=True)
class Concept:
    concept_id: str
    title: str
    objective_ids: tuple[str, ...]
    prerequisite_ids: tuple[str, ...]


@dataclass(frozen=True)
class Fragment:
    """One adaptable content unit; the body lives behind a locator."""

    fragment_id: str
    concept_id: str
    media: Media
    role: Role
    pole_tags: frozenset[Pole]
    required_level: Level
    body_ref: str


@dataclass(frozen=True)
class CourseGraph:
    course_id: str
    concepts: Mapping[str, Concept]
    objectives: Mapping[str, str]
    fragments: Mapping[str, Fragment]
    tests: Mapping[str, TestDefinition]
    instrument_id: str | None = None


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def ingest_course(document: object) -> CourseGraph:
    """Parse and validate a course package document.

    Raises MalformedDocument for structural problems, EmptyCourse when no
    concepts are present, DanglingReference for ids pointing nowhere,
    CyclicPrerequisites (with one concrete cycle) when the prerequisite
    relation is not a DAG, and UnreachableConcept when a concept serves no
    objective even transitively.
    """
    if not isinstance(document, Mapping):
        raise MalformedDocument("course package must be a JSON object")
    course_id = document.get("course_id")
    if not isinstance(course_id, str) or not course_id:
        raise MalformedDocument("course_id must be a non-empty string")

    objectives = _parse_objectives(document.get("objectives", []))
    concepts = _parse_concepts(document.get("concepts"))
    if not concepts:
        raise EmptyCourse(f"course {course_id!r} has no concepts")
    fragments = _parse_fragments(document.get("fragments", []))
    tests = _parse_tests(document.get("tests", []), course_id)
    instrument_id = document.get("instrument_id")
    if instrument_id is not None and not isinstance(instrument_id, str):
        raise MalformedDocument("instrument_id must be a string or omitted")

    graph = CourseGraph(
        course_id=course_id,
        concepts=concepts,
        objectives=objectives,
        fragments=fragments,
        tests=tests,
        instrument_id=instrument_id,
    )
    _check_references(graph)
    cycle = find_cycle(graph)
    if cycle:
        raise CyclicPrerequisites(
            f"prerequisites contain a cycle: {' -> '.join(cycle)}", cycle=cycle
        )
    _check_objective_coverage(graph)
    return graph


def load_course(path: str | Path) -> CourseGraph:
    """Load and validate a course package from a UTF-8 JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedDocument(f"cannot read course package: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"course package is not valid JSON: {exc}") from exc
    return ingest_course(doc)


def _parse_objectives(raw: object) -> dict[str, str]:
    if not isinstance(raw, list):
        raise MalformedDocument("objectives must be a list")
    objectives: dict[str, str] = {}
    for entry in raw:
        if not isinstance(entry, Mapping):
            raise MalformedDocument("each objective must be an object")
        objective_id = entry.get("objective_id")
        if not isinstance(objective_id, str) or not objective_id:
            raise MalformedDocument("objective_id must be a non-empty string")
        if objective_id in objectives:
            raise MalformedDocument(f"duplicate objective id {objective_id!r}")
        objectives[objective_id] = str(entry.get("text", ""))
    return objectives


def _parse_concepts(raw: object) -> dict[str, Concept]:
    if not isinstance(raw, list):
        raise MalformedDocument("concepts must be a list")
    concepts: dict[str, Concept] = {}
    for entry in raw:
        if not isinstance(entry, Mapping):
            raise MalformedDocument("each concept must be an object")
        concept_id = entry.get("concept_id")
        if not isinstance(concept_id, str) or not concept_id:
            raise MalformedDocument("concept_id must be a non-empty string")
        if concept_id in concepts:
            raise MalformedDocument(f"duplicate concept id {concept_id!r}")
        prerequisite_ids = entry.get("prerequisite_ids", [])
        objective_ids = entry.get("objective_ids", [])
        if not isinstance(prerequisite_ids, list) or not isinstance(objective_ids, list):
            raise MalformedDocument(
                f"concept {concept_id!r}: prerequisite_ids and objective_ids must be lists"
            )
        concepts[concept_id] = Concept(
            concept_id=concept_id,
            title=str(entry.get("title", concept_id)),
            objective_ids=tuple(str(o) for o in objective_ids),
            prerequisite_ids=tuple(str(p) for p in prerequisite_ids),
        )
    return concepts


def _parse_fragments(raw: object) -> dict[str, Fragment]:
    if not isinstance(raw, list):
        raise MalformedDocument("fragments must be a list")
    fragments: dict[str, Fragment] = {}
    for entry in raw:
        if not isinstance(entry, Mapping):
            raise MalformedDocument("each fragment must be an object")
        fragment_id = entry.get("fragment_id")
        if not isinstance(fragment_id, str) or not fragment_id:
            raise MalformedDocument("fragment_id must be a non-empty string")
        if fragment_id in fragments:
            raise MalformedDocument(f"duplicate fragment id {fragment_id!r}")
        try:
            media = Media(entry.get("media"))
            role = Role(entry.get("role"))
            required_level = Level(entry.get("required_level"))
            pole_tags = frozenset(Pole(tag) for tag in entry.get("pole_tags", []))
        except ValueError as exc:
            raise MalformedDocument(f"fragment {fragment_id!r}: {exc}") from None
        concept_id = entry.get("concept_id")
        if not isinstance(concept_id, str) or not concept_id:
            raise MalformedDocument(f"fragment {fragment_id!r}: concept_id is required")
        fragments[fragment_id] = Fragment(
            fragment_id=fragment_id,
            concept_id=concept_id,
            media=media,
            role=role,
            pole_tags=pole_tags,
            required_level=required_level,
            body_ref=str(entry.get("body_ref", "")),
        )
    return fragments


def _parse_tests(raw: object, course_id: str) -> dict[str, TestDefinition]:
    if not isinstance(raw, list):
        raise MalformedDocument("tests must be a list")
    tests: dict[str, TestDefinition] = {}
    for entry in raw:
        test = test_from_document(entry, course_id)
        if test.test_id in tests:
            raise MalformedDocument(f"duplicate test id {test.test_id!r}")
        tests[test.test_id] = test
    return tests


def _check_references(graph: CourseGraph) -> None:
    for concept in graph.concepts.values():
        for prerequisite in concept.prerequisite_ids:
            if prerequisite not in graph.concepts:
                raise DanglingReference(
                    f"concept {concept.concept_id!r} requires unknown"
                    f" concept {prerequisite!r}"
                )
        for objective_id in concept.objective_ids:
            if objective_id not in graph.objectives:
                raise DanglingReference(
                    f"concept {concept.concept_id!r} names unknown"
                    f" objective {objective_id!r}"
                )
    for fragment in graph.fragments.values():
        if fragment.concept_id not in graph.concepts:
            raise DanglingReference(
                f"fragment {fragment.fragment_id!r} references unknown"
                f" concept {fragment.concept_id!r}"
            )
    for test in graph.tests.values():
        if test.concept_id is not None and test.concept_id not in graph.concepts:
            raise DanglingReference(
                f"test {test.test_id!r} references unknown concept {test.concept_id!r}"
            )
        for item in test.items:
            if item.concept_id is not None and item.concept_id not in graph.concepts:
                raise DanglingReference(
                    f"test {test.test_id!r} item {item.item_id!r} references"
                    f" unknown concept {item.concept_id!r}"
                )


def _check_objective_coverage(graph: CourseGraph) -> None:
    # A concept is covered if it carries an objective or is a transitive
    # prerequisite of a concept that does.
    covered = {c.concept_id for c in graph.concepts.values() if c.objective_ids}
    frontier = list(covered)
    while frontier:
        concept = graph.concepts[frontier.pop()]
        for prerequisite in concept.prerequisite_ids:
            if prerequisite not in covered:
                covered.add(prerequisite)
                frontier.append(prerequisite)
    orphans = [cid for cid in graph.concepts if cid not in covered]
    if orphans:
        raise UnreachableConcept(
            f"concepts serve no objective, even transitively: {sorted(orphans)}"
        )


# ---------------------------------------------------------------------------
# Graph queries
# ---------------------------------------------------------------------------

def fragments_for_concept(graph: CourseGraph, concept_id: str) -> list[Fragment]:
    """All fragments of one concept, in stable authored order."""
    if concept_id not in graph.concepts:
        raise UnknownConcept(f"unknown concept {concept_id!r}")
    return [f for f in graph.fragments.values() if f.concept_id == concept_id]


def find_cycle(graph: CourseGraph) -> list[str] | None:
    """One prerequisite cycle as [a, ..., a], or None when the graph is a DAG."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {cid: WHITE for cid in graph.concepts}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GRAY
        stack.append(node)
        for prerequisite in graph.concepts[node].prerequisite_ids:
            if color[prerequisite] == GRAY:
                start = stack.index(prerequisite)
                return stack[start:] + [prerequisite]
            if color[prerequisite] == WHITE:
                found = visit(prerequisite)
                if found:
                    return found
        stack.pop()
        color[node] = BLACK
        return None

    for concept_id in graph.concepts:
        if color[concept_id] == WHITE:
            found = visit(concept_id)
            if found:
                return found
    return None


def topological_order(graph: CourseGraph) -> list[str]:
    """Deterministic topological order: prerequisites first, ties by id."""
    dependents: dict[str, list[str]] = {cid: [] for cid in graph.concepts}
    pending = {cid: len(c.prerequisite_ids) for cid, c in graph.concepts.items()}
    for concept in graph.concepts.values():
        for prerequisite in concept.prerequisite_ids:
            dependents[prerequisite].append(concept.concept_id)
    ready = [cid for cid, count in pending.items() if count == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        concept_id = heapq.heappop(ready)
        order.append(concept_id)
        for dependent in dependents[concept_id]:
            pending[dependent] -= 1
            if pending[dependent] == 0:
                heapq.heappush(ready, dependent)
    if len(order) != len(graph.concepts):
        cycle = find_cycle(graph) or []
        raise CyclicPrerequisites(
            f"prerequisites contain a cycle: {' -> '.join(cycle)}", cycle=cycle
        )
    return order


def ancestors(graph: CourseGraph, concept_id: str) -> set[str]:
    """Transitive prerequisites of a concept."""
    if concept_id not in graph.concepts:
        raise UnknownConcept(f"unknown concept {concept_id!r}")
    seen: set[str] = set()
    frontier = list(graph.concepts[concept_id].prerequisite_ids)
    while frontier:
        current = frontier.pop()
        if current not in seen:
            seen.add(current)
            frontier.extend(graph.concepts[current].prerequisite_ids)
    return seen


def descendants(graph: CourseGraph, concept_id: str) -> set[str]:
    """Concepts that depend on this one, transitively."""
    if concept_id not in graph.concepts:
        raise UnknownConcept(f"unknown concept {concept_id!r}")
    dependents: dict[str, list[str]] = {cid: [] for cid in graph.concepts}
    for concept in graph.concepts.values():
        for prerequisite in concept.prerequisite_ids:
            dependents[prerequisite].append(concept.concept_id)
    seen: set[str] = set()
    frontier = list(dependents[concept_id])
    while frontier:
        current = frontier.pop()
        if current not in seen:
            seen.add(current)
            frontier.extend(dependents[current])
    return seen


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def course_to_document(graph: CourseGraph) -> dict:
    doc: dict = {
        "course_id": graph.course_id,
        "objectives": [
            {"objective_id": oid, "text": text}
            for oid, text in graph.objectives.items()
        ],
        "concepts": [
            {
                "concept_id": c.concept_id,
                "title": c.title,
                "objective_ids": list(c.objective_ids),
                "prerequisite_ids": list(c.prerequisite_ids),
            }
            for c in graph.concepts.values()
        ],
        "fragments": [
            {
                "fragment_id": f.fragment_id,
                "concept_id": f.concept_id,
                "media": f.media.value,
                "role": f.role.value,
                "pole_tags": sorted(tag.value for tag in f.pole_tags),
                "required_level": f.required_level.value,
                "body_ref": f.body_ref,
            }
            for f in graph.fragments.values()
        ],
        "tests": [test_to_document(t) for t in graph.tests.values()],
    }
    if graph.instrument_id is not None:
        doc["instrument_id"] = graph.instrument_id
    return doc
