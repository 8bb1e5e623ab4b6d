"""Document store: one JSON file per entity, atomic rename on write.

Collections live as subdirectories of the store root (learners, courses,
instruments, cohort_stats). Writes go through a temp file plus os.replace,
so readers never observe a torn document. Mutations of one learner are
serialized through a per-learner lock: concurrent writers queue up and
each mutation sees the previous one's result, never an interleaving.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from collections import defaultdict
from pathlib import Path
from typing import Callable, Iterator

from .content import CourseGraph, course_to_document, ingest_course
from .errors import (
    DuplicateLogin,
    IntegrityViolation,
    StoreUnavailable,
    UnknownCourse,
    UnknownLearner,
)
from .instrument import (
    Instrument,
    instrument_from_document,
    instrument_to_document,
)
from .learner import (
    Identity,
    LearnerRecord,
    record_from_document,
    record_to_document,
    register_learner,
)
from .vocab import Goal

COLLECTIONS = ("learners", "courses", "instruments", "cohort_stats")


class EngineStore:
    """Disk-backed store for learners, courses, instruments and sheets."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            for collection in COLLECTIONS:
                (self.root / collection).mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreUnavailable(f"cannot prepare store at {self.root}: {exc}") from exc
        self._locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._locks_guard = threading.Lock()

    # -- low-level document IO -------------------------------------------

    def _path(self, collection: str, key: str) -> Path:
        return self.root / collection / f"{key}.json"

    def _write(self, collection: str, key: str, document: dict) -> None:
        path = self._path(collection, key)
        try:
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(document, handle, ensure_ascii=False, indent=2)
            os.replace(tmp, path)
        except OSError as exc:
            raise StoreUnavailable(f"cannot write {path}: {exc}") from exc

    def _read(self, collection: str, key: str) -> dict | None:
        path = self._path(collection, key)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise StoreUnavailable(f"cannot read {path}: {exc}") from exc

    def _keys(self, collection: str) -> list[str]:
        directory = self.root / collection
        return sorted(p.stem for p in directory.glob("*.json"))

    def _learner_lock(self, learner_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks[learner_id]

    # -- instruments -------------------------------------------------------

    def put_instrument(self, instrument: Instrument) -> None:
        self._write(
            "instruments", instrument.instrument_id, instrument_to_document(instrument)
        )

    def get_instrument(self, instrument_id: str) -> Instrument | None:
        doc = self._read("instruments", instrument_id)
        return instrument_from_document(doc) if doc else None

    # -- courses -----------------------------------------------------------

    def put_course(self, course: CourseGraph) -> None:
        if course.instrument_id is not None:
            if self._read("instruments", course.instrument_id) is None:
                raise IntegrityViolation(
                    f"course {course.course_id!r} references missing"
                    f" instrument {course.instrument_id!r}"
                )
        self._write("courses", course.course_id, course_to_document(course))

    def get_course(self, course_id: str) -> CourseGraph:
        doc = self._read("courses", course_id)
        if doc is None:
            raise UnknownCourse(f"unknown course {course_id!r}")
        return ingest_course(doc)

    def course_ids(self) -> list[str]:
        return self._keys("courses")

    # -- learners ----------------------------------------------------------

    def create_learner(
        self,
        identity: Identity,
        password: str,
        goal: Goal,
        course_ids: tuple[str, ...] = (),
        **kwargs,
    ) -> LearnerRecord:
        """Register and persist a new learner; logins are unique."""
        for course_id in course_ids:
            if self._read("courses", course_id) is None:
                raise IntegrityViolation(
                    f"enrollment references missing course {course_id!r}"
                )
        record = register_learner(identity, password, goal, course_ids, **kwargs)
        with self._learner_lock(record.learner_id):
            if self._read("learners", record.learner_id) is not None:
                raise DuplicateLogin(f"login {identity.login!r} is already registered")
            self._write("learners", record.learner_id, record_to_document(record))
        return record

    def get_learner(self, learner_id: str) -> LearnerRecord:
        doc = self._read("learners", learner_id)
        if doc is None:
            raise UnknownLearner(f"unknown learner {learner_id!r}")
        return record_from_document(doc)

    def mutate_learner(
        self, learner_id: str, mutate: Callable[[LearnerRecord], LearnerRecord]
    ) -> LearnerRecord:
        """Apply a record transformation under the per-learner lock.

        The callable receives the freshly read record and returns the
        replacement; raising inside leaves the stored record untouched.
        """
        with self._learner_lock(learner_id):
            record = self.get_learner(learner_id)
            updated = mutate(record)
            self._write("learners", learner_id, record_to_document(updated))
            return updated

    def learners(self) -> Iterator[LearnerRecord]:
        for learner_id in self._keys("learners"):
            yield self.get_learner(learner_id)

    # -- cohort stats --------------------------------------------------------

    def save_sheet(self, learner_id: str, answers: dict[str, str], instrument_id: str) -> None:
        self._write(
            "cohort_stats",
            learner_id,
            {"learner_id": learner_id, "instrument_id": instrument_id, "answers": answers},
        )

    def sheets(self) -> list[dict]:
        return [doc for key in self._keys("cohort_stats")
                if (doc := self._read("cohort_stats", key)) is not None]
