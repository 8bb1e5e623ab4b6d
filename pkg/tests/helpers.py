"""Builders shared by the test modules."""

from adaptcourse.instrument import Instrument, ResponseSheet
from adaptcourse.learner import Identity, LearnerRecord, register_learner
from adaptcourse.vocab import Dimension, Goal, Pole

STYLE1_POLES = {
    Dimension.PROCESSING: Pole.ACTIVE,
    Dimension.REASONING: Pole.INDUCTIVE,
    Dimension.PERCEPTION: Pole.VERBAL,
    Dimension.PROGRESS: Pole.SEQUENTIAL,
}


def uniform_sheet(instrument: Instrument, answer: str) -> ResponseSheet:
    return ResponseSheet(
        instrument.instrument_id,
        {q.question_id: answer for q in instrument.questions},
    )


def sheet_for_poles(instrument: Instrument, poles, flip_ids=()) -> ResponseSheet:
    """A sheet fully aligned with the given poles, minus listed flips."""
    answers = {}
    for question in instrument.questions:
        pole_a, _ = instrument.dimension_poles[question.dimension]
        answer = "a" if poles[question.dimension] is pole_a else "b"
        if question.question_id in flip_ids:
            answer = "b" if answer == "a" else "a"
        answers[question.question_id] = answer
    return ResponseSheet(instrument.instrument_id, answers)


def flipped_sheet(sheet: ResponseSheet) -> ResponseSheet:
    return ResponseSheet(
        sheet.instrument_id,
        {qid: ("b" if answer == "a" else "a") for qid, answer in sheet.answers.items()},
    )


def make_record(
    login="learner-1", goal=Goal.GENERAL, courses=("course-1",), **kwargs
) -> LearnerRecord:
    # Light KDF: unit tests register hundreds of throwaway learners.
    kwargs.setdefault("kdf_iterations", 1_000)
    return register_learner(
        Identity(login=login, name="Doe", first_name="Jay", age=25,
                 email=f"{login}@example.org"),
        "secret-pw",
        goal,
        tuple(courses),
        **kwargs,
    )


def fragment_doc(
    fragment_id,
    concept_id,
    role="example",
    media="text",
    pole_tags=(),
    required_level="Beginner",
    body_ref="",
):
    return {
        "fragment_id": fragment_id,
        "concept_id": concept_id,
        "media": media,
        "role": role,
        "pole_tags": list(pole_tags),
        "required_level": required_level,
        "body_ref": body_ref or f"content/{concept_id}/{fragment_id}.md",
    }


def concept_doc(concept_id, prerequisites=(), objectives=(), title=None):
    return {
        "concept_id": concept_id,
        "title": title or concept_id,
        "objective_ids": list(objectives),
        "prerequisite_ids": list(prerequisites),
    }


def course_doc(concepts, fragments=(), tests=(), objectives=None, course_id="course-1", **extra):
    """Course package document; when no objectives are given, every sink
    concept carries a default one so the whole graph stays reachable."""
    concepts = [dict(c) for c in concepts]
    if objectives is None:
        objectives = [{"objective_id": "goal-1", "text": "finish the course"}]
        if concepts and not any(c["objective_ids"] for c in concepts):
            required = {p for c in concepts for p in c["prerequisite_ids"]}
            for c in concepts:
                if c["concept_id"] not in required:
                    c["objective_ids"] = ["goal-1"]
    doc = {
        "course_id": course_id,
        "objectives": objectives,
        "concepts": concepts,
        "fragments": list(fragments),
        "tests": list(tests),
    }
    doc.update(extra)
    return doc


def chain_course_doc(length=3, fragments_per_concept=2, course_id="course-1"):
    """A linear prerequisite chain c1 -> c2 -> ... with plain fragments."""
    names = [f"c{i + 1}" for i in range(length)]
    concepts = [
        concept_doc(name, prerequisites=[names[i - 1]] if i else [])
        for i, name in enumerate(names)
    ]
    fragments = [
        fragment_doc(f"{name}-f{j + 1}", name)
        for name in names
        for j in range(fragments_per_concept)
    ]
    return course_doc(concepts, fragments, course_id=course_id)


def knowledge_test_doc(test_id, items, concept_id=None):
    return {"test_id": test_id, "concept_id": concept_id, "items": items}


def item_doc(item_id, correct_option=0, options=3, concept_id=None):
    doc = {
        "item_id": item_id,
        "prompt": f"prompt {item_id}",
        "options": [f"option {i}" for i in range(options)],
        "correct_option": correct_option,
    }
    if concept_id is not None:
        doc["concept_id"] = concept_id
    return doc


def pretest_doc(concept_ids, items_per_concept=2, test_id="pre-1"):
    items = []
    for concept_id in concept_ids:
        for j in range(items_per_concept):
            items.append(item_doc(f"{concept_id}-pre{j}", concept_id=concept_id))
    return knowledge_test_doc(test_id, items, concept_id=None)


def answers_with_fraction(test, fraction):
    """Answers hitting exactly round(fraction * items) correct, first items."""
    correct_count = round(fraction * len(test.items))
    answers = {}
    for index, item in enumerate(test.items):
        if index < correct_count:
            answers[item.item_id] = item.correct_option
        else:
            answers[item.item_id] = (item.correct_option + 1) % len(item.options)
    return answers
