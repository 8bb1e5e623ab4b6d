import random
from dataclasses import replace
from datetime import datetime, timezone

import pytest

from adaptcourse.assessment import TestDefinition, TestItem, grade_pretest
from adaptcourse.content import fragments_for_concept, ingest_course
from adaptcourse.errors import NotEnrolled, PretestMissing, UnknownConcept
from adaptcourse.generator import (
    build_links,
    filter_by_level,
    filter_by_style,
    generate_page,
    page_document,
)
from adaptcourse.learner import set_style_from_questionnaire, update_concept_score
from adaptcourse.pedagogy import adaptation_params, neutral_params
from adaptcourse.vocab import (
    Annotation,
    Dimension,
    Goal,
    Level,
    Pole,
    TraceKind,
)
from helpers import (
    STYLE1_POLES,
    concept_doc,
    course_doc,
    fragment_doc,
    item_doc,
    make_record,
    sheet_for_poles,
    knowledge_test_doc,
    uniform_sheet,
)
from test_pedagogy import FULL_STRENGTH, profile_with

T0 = datetime(2024, 6, 1, tzinfo=timezone.utc)


def style1_params():
    return adaptation_params(profile_with(FULL_STRENGTH))


def course_with_fragments(fragment_docs, concepts=None, tests=()):
    concepts = concepts or [concept_doc("a")]
    return ingest_course(course_doc(concepts, fragment_docs, tests=tests))


# ---------------------------------------------------------------------------
# Style filter
# ---------------------------------------------------------------------------

def test_strict_verbal_drops_visual_only():
    course = course_with_fragments([
        fragment_doc("f1", "a", pole_tags=["Verbal"]),
        fragment_doc("f2", "a", media="image", pole_tags=["Visual"]),
    ])
    fragments = fragments_for_concept(course, "a")
    kept, warnings = filter_by_style(fragments, style1_params())
    assert [f.fragment_id for f in kept] == ["f1"]
    assert warnings == []


def test_strict_never_empties_the_set():
    course = course_with_fragments(
        [fragment_doc("f2", "a", media="image", pole_tags=["Visual"])]
    )
    fragments = fragments_for_concept(course, "a")
    kept, warnings = filter_by_style(fragments, style1_params())
    assert [f.fragment_id for f in kept] == ["f2"]
    assert warnings == ["style-filter-relaxed:Perception"]


def test_both_pole_tags_survive_strict():
    course = course_with_fragments([
        fragment_doc("f1", "a", pole_tags=["Verbal", "Visual"]),
        fragment_doc("f2", "a", media="image", pole_tags=["Visual"]),
    ])
    kept, warnings = filter_by_style(fragments_for_concept(course, "a"), style1_params())
    assert [f.fragment_id for f in kept] == ["f1"]


def test_all_off_is_identity():
    course = course_with_fragments([
        fragment_doc("f1", "a", pole_tags=["Visual"]),
        fragment_doc("f2", "a", pole_tags=["Reflective"]),
    ])
    fragments = fragments_for_concept(course, "a")
    kept, warnings = filter_by_style(fragments, neutral_params())
    assert kept == fragments and warnings == []


def test_soft_never_removes():
    course = course_with_fragments([
        fragment_doc("f1", "a", pole_tags=["Visual"]),
        fragment_doc("f2", "a", pole_tags=["Verbal"]),
    ])
    profile = profile_with({**FULL_STRENGTH, Dimension.PERCEPTION: 5})
    kept, warnings = filter_by_style(
        fragments_for_concept(course, "a"), adaptation_params(profile)
    )
    assert len(kept) == 2 and warnings == []


# ---------------------------------------------------------------------------
# Level filter
# ---------------------------------------------------------------------------

def level_fragments():
    course = course_with_fragments([
        fragment_doc("fb", "a", required_level="Beginner"),
        fragment_doc("fi", "a", required_level="Intermediate"),
        fragment_doc("fe", "a", required_level="Expert"),
    ])
    return fragments_for_concept(course, "a")


def test_beginner_sees_beginner_only():
    kept, warnings = filter_by_level(level_fragments(), Level.BEGINNER, Goal.GENERAL)
    assert [f.fragment_id for f in kept] == ["fb"]
    assert warnings == []


def test_expert_in_depth_sees_everything():
    kept, warnings = filter_by_level(level_fragments(), Level.EXPERT, Goal.IN_DEPTH)
    assert [f.fragment_id for f in kept] == ["fb", "fi", "fe"]


def test_expert_general_capped_at_intermediate():
    kept, warnings = filter_by_level(level_fragments(), Level.EXPERT, Goal.GENERAL)
    assert [f.fragment_id for f in kept] == ["fb", "fi"]


def test_level_filter_never_empties():
    course = course_with_fragments([fragment_doc("fe", "a", required_level="Expert")])
    fragments = fragments_for_concept(course, "a")
    kept, warnings = filter_by_level(fragments, Level.BEGINNER, Goal.GENERAL)
    assert [f.fragment_id for f in kept] == ["fe"]
    assert warnings == ["level-filter-relaxed"]


# ---------------------------------------------------------------------------
# Links
# ---------------------------------------------------------------------------

def chain_abc():
    return ingest_course(course_doc(
        [concept_doc("a"), concept_doc("b", prerequisites=["a"]),
         concept_doc("c", prerequisites=["b"])],
        [fragment_doc(f"{cid}-f", cid) for cid in ("a", "b", "c")],
    ))


def test_sequential_strict_hides_not_ready():
    course = chain_abc()
    record = make_record(courses=(course.course_id,))
    links = build_links(course, "a", record, style1_params())
    by_target = {l.target_concept_id: l for l in links}
    assert by_target["b"].visible is True
    assert by_target["b"].annotation is Annotation.NEUTRAL
    assert by_target["c"].visible is False
    assert by_target["c"].annotation is Annotation.NOT_READY


def test_global_shows_all_with_annotations():
    course = chain_abc()
    record = make_record(courses=(course.course_id,))
    profile = profile_with({**FULL_STRENGTH, Dimension.PROGRESS: -11})
    links = build_links(course, "a", record, adaptation_params(profile))
    by_target = {l.target_concept_id: l for l in links}
    assert by_target["b"].visible and by_target["c"].visible
    assert by_target["c"].annotation is Annotation.NOT_READY


def test_single_concept_course_has_no_links():
    course = course_with_fragments([fragment_doc("f", "a")])
    record = make_record(courses=(course.course_id,))
    assert build_links(course, "a", record, neutral_params()) == []


def test_predicted_concept_is_recommended():
    course = chain_abc()
    record = make_record(courses=(course.course_id,))
    record = replace(record, overlay={"a": 0.9})
    links = build_links(course, "a", record, neutral_params())
    by_target = {l.target_concept_id: l for l in links}
    assert by_target["b"].annotation is Annotation.RECOMMENDED


def test_links_ordered_by_topology_and_well_formed(demo_course):
    rng = random.Random(77)
    record = make_record(courses=(demo_course.course_id,))
    for concept_id in demo_course.concepts:
        overlay = {cid: rng.random() for cid in demo_course.concepts}
        links = build_links(
            demo_course, concept_id, replace(record, overlay=overlay), style1_params()
        )
        for link in links:
            assert link.target_concept_id in demo_course.concepts
            assert link.target_concept_id != concept_id
            if link.annotation is Annotation.RECOMMENDED:
                assert link.annotation is not Annotation.NOT_READY
        assert len({l.target_concept_id for l in links}) == len(links)


def test_unknown_concept_link_target():
    course = chain_abc()
    record = make_record(courses=(course.course_id,))
    with pytest.raises(UnknownConcept):
        build_links(course, "zzz", record, neutral_params())


# ---------------------------------------------------------------------------
# generate_page
# ---------------------------------------------------------------------------

GOLDEN_FRAGMENTS = [
    fragment_doc("theory-text", "a", role="theory", pole_tags=["Verbal"]),
    fragment_doc("example-text", "a", role="example", pole_tags=["Verbal"]),
    fragment_doc("example-video", "a", role="example", media="video", pole_tags=["Visual"]),
    fragment_doc("activity-text", "a", role="activity", pole_tags=["Active"]),
]


def golden_course():
    return ingest_course(course_doc(
        [concept_doc("a"), concept_doc("b", prerequisites=["a"]),
         concept_doc("c", prerequisites=["b"])],
        GOLDEN_FRAGMENTS + [fragment_doc(f"{cid}-f", cid) for cid in ("b", "c")],
        tests=[knowledge_test_doc("pre", [item_doc("i1", concept_id="a")])],
    ))


def enrolled_beginner(course, instrument, poles=None, fraction_wrong=True):
    """Registered learner with a scored style and a graded zero pre-test."""
    record = make_record(courses=(course.course_id,))
    sheet = sheet_for_poles(instrument, poles or STYLE1_POLES)
    record = set_style_from_questionnaire(record, sheet, instrument)
    pretest = course.tests["pre"]
    answers = {i.item_id: (i.correct_option + 1) % len(i.options) for i in pretest.items}
    _result, record = grade_pretest(record, course, pretest, answers)
    return record


def test_golden_style1_pipeline(instrument):
    # Hand trace: Verbal-strict removes example-video; Beginner keeps the
    # rest; inductive ordering puts example before activity before theory;
    # Sequential hides the not-ready link to c.
    course = golden_course()
    record = enrolled_beginner(course, instrument)
    page, updated = generate_page(record, course, "a", at=T0)
    assert list(page.fragments) == ["example-text", "activity-text", "theory-text"]
    assert page.warnings == ()
    by_target = {l.target_concept_id: l for l in page.links}
    assert by_target["b"].visible is True
    assert by_target["c"].visible is False
    assert page.progress.course_level is Level.BEGINNER
    assert updated.traces[-1].kind is TraceKind.PAGE_VISITED


def test_all_off_expert_gets_authored_page(instrument):
    course = golden_course()
    record = make_record(courses=(course.course_id,))
    record = set_style_from_questionnaire(
        record,
        sheet_for_poles(instrument, STYLE1_POLES, flip_ids={"q1", "q2", "q3", "q4",
                                                            "q5", "q6", "q7", "q8",
                                                            "q13", "q14", "q15", "q16",
                                                            "q21", "q22", "q23", "q24"}),
        instrument,
    )
    # Flips above leave every |value| <= 3: all dimensions Uncertain.
    assert all(s.confidence.value == "Uncertain" for s in record.style.scores)
    pretest = course.tests["pre"]
    answers = {i.item_id: i.correct_option for i in pretest.items}
    _result, record = grade_pretest(record, course, pretest, answers)
    assert record.status[course.course_id] is Level.EXPERT

    page, _ = generate_page(record, course, "a", at=T0)
    authored = [f.fragment_id for f in fragments_for_concept(course, "a")]
    assert list(page.fragments) == authored
    assert all(link.visible for link in page.links)


def test_page_requires_pretest(instrument):
    course = golden_course()
    record = make_record(courses=(course.course_id,))
    record = set_style_from_questionnaire(record, uniform_sheet(instrument, "a"), instrument)
    with pytest.raises(PretestMissing):
        generate_page(record, course, "a")


def test_page_requires_enrollment():
    course = golden_course()
    record = make_record(courses=("elsewhere",))
    with pytest.raises(NotEnrolled):
        generate_page(record, course, "a")


def test_page_unknown_concept(instrument):
    course = golden_course()
    record = enrolled_beginner(course, instrument)
    with pytest.raises(UnknownConcept):
        generate_page(record, course, "nope")


def test_page_is_deterministic(instrument):
    course = golden_course()
    record = enrolled_beginner(course, instrument)
    first, _ = generate_page(record, course, "a", at=T0)
    second, _ = generate_page(record, course, "a", at=T0)
    assert first == second


def test_regeneration_opens_dependent_link(instrument):
    # d needs both a and x; studying at x, the link to d opens once a is
    # learned well enough.
    course = ingest_course(course_doc(
        [concept_doc("a"), concept_doc("x"),
         concept_doc("d", prerequisites=["a", "x"])],
        [fragment_doc(f"{cid}-f", cid) for cid in ("a", "x", "d")],
        tests=[knowledge_test_doc("pre", [item_doc("i1", concept_id="a")])],
    ))
    record = enrolled_beginner(course, instrument)

    before, record = generate_page(record, course, "x", at=T0)
    assert {l.target_concept_id: l.visible for l in before.links}["d"] is False

    record = update_concept_score(record, "a", 1.0)  # overlay 0.7 >= readiness
    after, _ = generate_page(record, course, "x", at=T0)
    link = {l.target_concept_id: l for l in after.links}["d"]
    assert link.visible is True
    assert link.annotation in (Annotation.NEUTRAL, Annotation.RECOMMENDED)


def test_pipeline_subset_and_never_empty_properties(instrument, demo_course):
    rng = random.Random(99)
    sheet_letters = ["a", "b"]
    for _ in range(40):
        record = make_record(
            login=f"l{rng.randint(0, 10**9)}", courses=(demo_course.course_id,),
            goal=Goal.GENERAL if rng.random() < 0.5 else Goal.IN_DEPTH,
        )
        answers = {qid: rng.choice(sheet_letters) for qid in instrument.question_ids()}
        from adaptcourse.instrument import ResponseSheet

        record = set_style_from_questionnaire(
            record, ResponseSheet(instrument.instrument_id, answers), instrument
        )
        pretest = demo_course.tests["entry-check"]
        p_answers = {
            i.item_id: (i.correct_option if rng.random() < 0.5
                        else (i.correct_option + 1) % len(i.options))
            for i in pretest.items
        }
        _res, record = grade_pretest(record, demo_course, pretest, p_answers)
        concept_id = rng.choice(list(demo_course.concepts))
        page, _ = generate_page(record, demo_course, concept_id, at=T0)

        concept_fragments = {f.fragment_id for f in
                             fragments_for_concept(demo_course, concept_id)}
        assert set(page.fragments) <= concept_fragments
        assert len(page.fragments) >= 1
        assert len(set(page.fragments)) == len(page.fragments)


def test_page_document_shape(instrument):
    course = golden_course()
    record = enrolled_beginner(course, instrument)
    page, _ = generate_page(record, course, "a", at=T0)
    doc = page_document(page)
    assert doc["concept_id"] == "a"
    assert doc["fragments"] == ["example-text", "activity-text", "theory-text"]
    assert doc["progress"]["course_level"] == "Beginner"
    assert doc["generated_at"] == T0.isoformat()


def test_opposite_strict_poles_get_disjoint_variants():
    # A concept holding both pole-exclusive variants: strict learners on
    # opposite Perception poles receive disjoint choices.
    course = course_with_fragments([
        fragment_doc("verbal-variant", "a", pole_tags=["Verbal"]),
        fragment_doc("visual-variant", "a", media="image", pole_tags=["Visual"]),
    ])
    fragments = fragments_for_concept(course, "a")

    verbal = adaptation_params(profile_with(FULL_STRENGTH))
    visual = adaptation_params(
        profile_with({**FULL_STRENGTH, Dimension.PERCEPTION: -11})
    )
    kept_verbal, _ = filter_by_style(fragments, verbal)
    kept_visual, _ = filter_by_style(fragments, visual)
    ids_verbal = {f.fragment_id for f in kept_verbal}
    ids_visual = {f.fragment_id for f in kept_visual}
    assert ids_verbal == {"verbal-variant"}
    assert ids_visual == {"visual-variant"}
    assert ids_verbal.isdisjoint(ids_visual)
