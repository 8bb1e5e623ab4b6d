"""Deterministic synthetic-learner simulation.

Runs the whole engine loop headlessly: agents with a known ground-truth
style register, answer the questionnaire with a configurable noise rate,
take the course pre-test, then study in sessions of page generation plus
post-test. Everything is driven by one seeded RNG and a simulated clock,
so a fixed seed reproduces the transcript byte for byte.

The transcript doubles as a measurement bench: it reports how often pages
respect the role-ordering rules and how often strongly measured
dimensions recover the agent's ground-truth pole.
"""

from __future__ import annotations

import json
import tempfile
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from random import Random
from typing import Mapping, Sequence

from . import learner as learner_ops
from .assessment import TestDefinition, grade_posttest, grade_pretest
from .content import CourseGraph, load_course
from .errors import MalformedDocument
from .generator import CoursePage, generate_page
from .instrument import Instrument, ResponseSheet, default_instrument, style_poles
from .learner import Identity
from .pedagogy import adaptation_params, predict_next_concept
from .store import EngineStore
from .vocab import Dimension, Goal, Pole, Role, Strength

SIM_EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)

DEFAULT_NOISE = 0.1

# Roles the ordering conformance check watches: concrete material versus
# principle material.
CONCRETE_ROLES = frozenset({Role.EXAMPLE, Role.FACT})
PRINCIPLE_ROLES = frozenset({Role.THEORY, Role.DEFINITION})

_PRETEST_SKILL = 0.25
_SKILL_BASE = 0.35
_SKILL_PER_VISIT = 0.30
_SKILL_CAP = 0.95


@dataclass(frozen=True)
class SimConfig:
    population: int
    style_mix: Mapping[int, float]
    course_path: Path
    seed: int
    sessions_per_learner: int
    noise: float = DEFAULT_NOISE


def load_sim_config(path: str | Path) -> SimConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise MalformedDocument(f"cannot read sim config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"sim config is not valid JSON: {exc}") from exc
    return sim_config_from_document(doc, base_dir=Path(path).parent)


def sim_config_from_document(doc: dict, *, base_dir: Path | None = None) -> SimConfig:
    if not isinstance(doc, dict):
        raise MalformedDocument("sim config must be a JSON object")
    population = doc.get("population")
    if not isinstance(population, int) or population < 1:
        raise MalformedDocument("population must be an integer >= 1")
    raw_mix = doc.get("style_mix")
    if not isinstance(raw_mix, dict) or not raw_mix:
        raise MalformedDocument("style_mix must map style ids to weights")
    style_mix: dict[int, float] = {}
    for key, weight in raw_mix.items():
        style_id = int(key)
        if not 1 <= style_id <= 16:
            raise MalformedDocument(f"style_mix id {style_id} out of 1..16")
        style_mix[style_id] = float(weight)
    if abs(sum(style_mix.values()) - 1.0) > 1e-9:
        raise MalformedDocument("style_mix weights must sum to 1")
    course_path = doc.get("course_path")
    if not isinstance(course_path, str) or not course_path:
        raise MalformedDocument("course_path is required")
    path = Path(course_path)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    sessions = doc.get("sessions_per_learner", 3)
    if not isinstance(sessions, int) or sessions < 1:
        raise MalformedDocument("sessions_per_learner must be an integer >= 1")
    noise = float(doc.get("noise", DEFAULT_NOISE))
    if not 0.0 <= noise <= 1.0:
        raise MalformedDocument("noise must be in [0, 1]")
    return SimConfig(
        population=population,
        style_mix=style_mix,
        course_path=path,
        seed=int(doc.get("seed", 0)),
        sessions_per_learner=sessions,
        noise=noise,
    )


class _Clock:
    """Monotonic simulated clock: one second per event."""

    def __init__(self, start: datetime = SIM_EPOCH):
        self._now = start

    def tick(self) -> datetime:
        self._now += timedelta(seconds=1)
        return self._now


def truth_sheet(
    instrument: Instrument,
    truth_poles: Mapping[Dimension, Pole],
    rng: Random,
    noise: float,
) -> ResponseSheet:
    """Answers aligned with the ground-truth poles, each flipped with p=noise."""
    answers = {}
    for question in instrument.questions:
        pole_a, _pole_b = instrument.dimension_poles[question.dimension]
        aligned = "a" if truth_poles[question.dimension] is pole_a else "b"
        if rng.random() < noise:
            aligned = "b" if aligned == "a" else "a"
        answers[question.question_id] = aligned
    return ResponseSheet(instrument.instrument_id, answers)


def _answer_test(test: TestDefinition, p_correct: float, rng: Random) -> dict[str, int]:
    answers = {}
    for item in test.items:
        if rng.random() < p_correct:
            answers[item.item_id] = item.correct_option
        else:
            answers[item.item_id] = (item.correct_option + 1) % len(item.options)
    return answers


def ordering_conformant(roles: Sequence[Role], reasoning_pole: Pole) -> bool:
    """No principle-role fragment before a concrete one for inductive
    learners; the mirror for deductive learners."""
    first, second = (CONCRETE_ROLES, PRINCIPLE_ROLES)
    if reasoning_pole is Pole.DEDUCTIVE:
        first, second = second, first
    seen_second = False
    for role in roles:
        if role in second:
            seen_second = True
        elif role in first and seen_second:
            return False
    return True


def _page_entry(page: CoursePage, roles: Sequence[Role]) -> dict:
    return {
        "concept_id": page.concept_id,
        "fragments": list(page.fragments),
        "roles": [role.value for role in roles],
        "links": [
            {
                "target_concept_id": link.target_concept_id,
                "annotation": link.annotation.value,
                "visible": link.visible,
            }
            for link in page.links
        ],
        "warnings": list(page.warnings),
    }


def run_sim(
    config: SimConfig,
    *,
    instrument: Instrument | None = None,
    course: CourseGraph | None = None,
    store_dir: str | Path | None = None,
) -> dict:
    """Run the simulation and return the transcript document."""
    instrument = instrument if instrument is not None else default_instrument()
    course = course if course is not None else load_course(config.course_path)
    if store_dir is None:
        with tempfile.TemporaryDirectory(prefix="adaptcourse-sim-") as tmp:
            return _run(config, instrument, course, EngineStore(tmp))
    return _run(config, instrument, course, EngineStore(store_dir))


def _run(
    config: SimConfig,
    instrument: Instrument,
    course: CourseGraph,
    store: EngineStore,
) -> dict:
    store.put_instrument(instrument)
    store.put_course(course)
    rng = Random(config.seed)
    clock = _Clock()

    pretest = next((t for t in course.tests.values() if t.concept_id is None), None)
    if pretest is None:
        raise MalformedDocument(f"course {course.course_id!r} ships no pre-test")
    posttests = {t.concept_id: t for t in course.tests.values() if t.concept_id}

    style_ids = sorted(config.style_mix)
    weights = [config.style_mix[s] for s in style_ids]

    agents = []
    pages_generated = 0
    pages_checked = 0
    pages_conformant = 0
    strong_checked = 0
    strong_correct = 0
    final_levels: dict[str, int] = {}

    for index in range(config.population):
        truth_style_id = rng.choices(style_ids, weights=weights)[0]
        truth_poles = style_poles(truth_style_id)
        login = f"agent-{index:04d}"
        goal = Goal.GENERAL if rng.random() < 0.5 else Goal.IN_DEPTH
        record = store.create_learner(
            Identity(
                login=login,
                name="Synthetic",
                first_name=f"Agent{index}",
                age=18 + index % 40,
                email=f"{login}@example.org",
            ),
            password=f"pw-{index}",
            goal=goal,
            course_ids=(course.course_id,),
            at=clock.tick(),
            kdf_iterations=1_000,  # synthetic agents; hashes never leave the run
        )

        sheet = truth_sheet(instrument, truth_poles, rng, config.noise)
        record = store.mutate_learner(
            login,
            lambda r: learner_ops.set_style_from_questionnaire(
                r, sheet, instrument, at=clock.tick()
            ),
        )
        store.save_sheet(login, dict(sheet.answers), instrument.instrument_id)
        measured = record.style
        params = adaptation_params(measured)

        dimension_report = []
        for score in measured.scores:
            truth_pole = truth_poles[score.dimension]
            dimension_report.append(
                {
                    "dimension": score.dimension.value,
                    "truth_pole": truth_pole.value,
                    "measured_pole": score.pole.value,
                    "value": score.value,
                    "confidence": score.confidence.value,
                }
            )
            if score.confidence.value == "Strong":
                strong_checked += 1
                if score.pole is truth_pole:
                    strong_correct += 1

        pretest_answers = _answer_test(pretest, _PRETEST_SKILL, rng)
        result_holder: dict = {}

        def apply_pretest(r):
            result, updated = grade_pretest(
                r, course, pretest, pretest_answers, at=clock.tick()
            )
            result_holder["result"] = result
            return updated

        record = store.mutate_learner(login, apply_pretest)
        levels = [record.status[course.course_id].value]
        pretest_fraction = result_holder["result"].fraction

        visits: dict[str, int] = {}
        page_entries = []
        agent_conformant = True
        for _session in range(config.sessions_per_learner):
            concept_id = predict_next_concept(course, record)
            if concept_id is None:
                break
            page_holder: dict = {}

            def apply_page(r):
                built, updated = generate_page(r, course, concept_id, at=clock.tick())
                page_holder["page"] = built
                return updated

            record = store.mutate_learner(login, apply_page)
            page = page_holder["page"]
            pages_generated += 1
            roles = [course.fragments[fid].role for fid in page.fragments]
            page_entries.append(_page_entry(page, roles))

            reasoning = params.by_dimension[Dimension.REASONING]
            if reasoning.strength is not Strength.OFF:
                pages_checked += 1
                if ordering_conformant(roles, reasoning.pole):
                    pages_conformant += 1
                else:
                    agent_conformant = False

            visits[concept_id] = visits.get(concept_id, 0) + 1
            posttest = posttests.get(concept_id)
            if posttest is not None:
                p_correct = min(
                    _SKILL_CAP, _SKILL_BASE + _SKILL_PER_VISIT * visits[concept_id]
                )
                answers = _answer_test(posttest, p_correct, rng)

                def apply_posttest(r):
                    _result, updated = grade_posttest(
                        r, course, posttest, answers, at=clock.tick()
                    )
                    return updated

                record = store.mutate_learner(login, apply_posttest)
                levels.append(record.status[course.course_id].value)

        final_level = record.status[course.course_id].value
        final_levels[final_level] = final_levels.get(final_level, 0) + 1
        agents.append(
            {
                "agent_id": index,
                "login": login,
                "goal": goal.value,
                "truth_style_id": truth_style_id,
                "measured_style_id": measured.style_id,
                "dimensions": dimension_report,
                "pretest_fraction": pretest_fraction,
                "levels": levels,
                "pages": page_entries,
                "ordering_conformant": agent_conformant,
            }
        )

    return {
        "config": {
            "population": config.population,
            "seed": config.seed,
            "sessions_per_learner": config.sessions_per_learner,
            "noise": config.noise,
            "style_mix": {str(k): v for k, v in sorted(config.style_mix.items())},
            "course_id": course.course_id,
        },
        "agents": agents,
        "summary": {
            "pages_generated": pages_generated,
            "ordering_conformance": {
                "pages_checked": pages_checked,
                "conformant": pages_conformant,
                "rate": (pages_conformant / pages_checked) if pages_checked else 1.0,
            },
            "strong_recovery": {
                "checked": strong_checked,
                "correct": strong_correct,
                "accuracy": (strong_correct / strong_checked) if strong_checked else 1.0,
            },
            "final_level_counts": dict(sorted(final_levels.items())),
        },
    }


def transcript_text(transcript: dict) -> str:
    """Canonical serialization; identical transcripts give identical bytes."""
    return json.dumps(transcript, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
