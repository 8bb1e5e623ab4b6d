import threading

import pytest

from adaptcourse.assessment import grade_posttest, grade_pretest
from adaptcourse.content import ingest_course
from adaptcourse.errors import (
    DuplicateLogin,
    IntegrityViolation,
    UnknownCourse,
    UnknownLearner,
)
from adaptcourse.instrument import default_instrument
from adaptcourse.learner import Identity, get_concept_score, update_concept_score
from adaptcourse.store import EngineStore
from adaptcourse.vocab import Goal
from helpers import (
    answers_with_fraction,
    concept_doc,
    course_doc,
    fragment_doc,
    item_doc,
    knowledge_test_doc,
    make_record,
    pretest_doc,
)

IDENTITY = Identity("mara", "Curie", "Mara", 31, "mara@example.org")


@pytest.fixture()
def store(tmp_path):
    return EngineStore(tmp_path / "store")


@pytest.fixture()
def course():
    return ingest_course(course_doc(
        [concept_doc("alpha"), concept_doc("beta", prerequisites=["alpha"])],
        [fragment_doc("alpha-f", "alpha"), fragment_doc("beta-f", "beta")],
        tests=[
            pretest_doc(["alpha"], items_per_concept=2, test_id="pre"),
            knowledge_test_doc("post-alpha", [item_doc(f"i{k}") for k in range(4)],
                               concept_id="alpha"),
        ],
    ))


def register(store, course, login="mara"):
    store.put_course(course)
    identity = Identity(login, "Curie", "Mara", 31, f"{login}@example.org")
    return store.create_learner(identity, "pw", Goal.GENERAL, (course.course_id,),
                                kdf_iterations=1_000)


def test_learner_round_trip(store, course):
    record = register(store, course)
    assert store.get_learner("mara") == record


def test_duplicate_login_rejected(store, course):
    register(store, course)
    with pytest.raises(DuplicateLogin):
        register(store, course)


def test_unknown_learner(store):
    with pytest.raises(UnknownLearner):
        store.get_learner("nobody")


def test_course_round_trip(store, course):
    store.put_course(course)
    assert store.get_course(course.course_id) == course
    assert store.course_ids() == [course.course_id]


def test_unknown_course(store):
    with pytest.raises(UnknownCourse):
        store.get_course("ghost")


def test_course_with_missing_instrument_rejected(store, course):
    from dataclasses import replace

    bound = replace(course, instrument_id="not-there")
    with pytest.raises(IntegrityViolation):
        store.put_course(bound)


def test_course_with_present_instrument_accepted(store, course):
    from dataclasses import replace

    instrument = default_instrument()
    store.put_instrument(instrument)
    bound = replace(course, instrument_id=instrument.instrument_id)
    store.put_course(bound)
    assert store.get_course(course.course_id).instrument_id == instrument.instrument_id


def test_enrollment_requires_course(store):
    with pytest.raises(IntegrityViolation):
        store.create_learner(IDENTITY, "pw", Goal.GENERAL, ("ghost-course",),
                             kdf_iterations=1_000)


def test_failed_mutation_leaves_record_untouched(store, course):
    record = register(store, course)

    def explode(r):
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        store.mutate_learner("mara", explode)
    assert store.get_learner("mara") == record


def test_mutations_apply_in_sequence(store, course):
    register(store, course)
    store.mutate_learner("mara", lambda r: update_concept_score(r, "alpha", 1.0))
    updated = store.mutate_learner("mara", lambda r: update_concept_score(r, "alpha", 1.0))
    assert get_concept_score(updated, "alpha") == pytest.approx(0.91)


def test_concurrent_posttests_serialize(store, course):
    # Oracle: both sequential orders of (1.0, 0.5) on a fresh overlay.
    #   1.0 then 0.5: 0.3*(0.7) + 0.7*0.5 = 0.56
    #   0.5 then 1.0: 0.3*(0.35) + 0.7*1.0 = 0.805
    record = register(store, course)
    pretest = course.tests["pre"]
    store.mutate_learner(
        "mara",
        lambda r: grade_pretest(r, course, pretest,
                                answers_with_fraction(pretest, 0.0))[1],
    )
    post = course.tests["post-alpha"]
    barrier = threading.Barrier(2)

    def submit(fraction):
        def apply(r):
            return grade_posttest(r, course, post,
                                  answers_with_fraction(post, fraction))[1]

        barrier.wait()
        store.mutate_learner("mara", apply)

    threads = [threading.Thread(target=submit, args=(f,)) for f in (1.0, 0.5)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    final = get_concept_score(store.get_learner("mara"), "alpha")
    assert final == pytest.approx(0.56) or final == pytest.approx(0.805)


def test_sheets_round_trip(store):
    store.save_sheet("mara", {"q1": "a"}, "inst-1")
    store.save_sheet("nils", {"q1": "b"}, "inst-1")
    sheets = store.sheets()
    assert {doc["learner_id"] for doc in sheets} == {"mara", "nils"}


def test_learners_iterates_all(store, course):
    register(store, course, "a-one")
    register_second = Identity("b-two", "X", "Y", 20, "b@example.org")
    store.create_learner(register_second, "pw", Goal.GENERAL, (), kdf_iterations=1_000)
    assert [r.learner_id for r in store.learners()] == ["a-one", "b-two"]
