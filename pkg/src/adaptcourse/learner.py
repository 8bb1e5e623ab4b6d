"""Learner model: identity, goal, style profile, overlay knowledge, traces.

Records are immutable; every operation returns a fresh record and appends
exactly one trace event, so a failed operation leaves the input untouched.
The overlay maps concept ids to scores in [0, 1]; unassessed concepts read
as 0. Post-test updates blend the old score with the new result through a
convex rule, so scores can never leave the unit interval.
"""

from __future__ import annotations

import hashlib
import hmac
import os
import re
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from typing import Mapping

from .errors import (
    MalformedDocument,
    MissingField,
    OutOfRange,
    StyleAlreadySet,
)
from .instrument import (
    Instrument,
    ResponseSheet,
    StyleProfile,
    profile_from_sheet,
    style_profile_document,
    style_profile_from_document,
    uncertain_profile,
)
from .psychometrics import StyleHistogram, modal_style
from .vocab import Goal, Level, StyleSource, TraceKind

# Weight kept from the previous overlay score on each post-test update.
DEFAULT_RETENTION = 0.3

LOGIN_PATTERN = re.compile(r"[A-Za-z0-9][A-Za-z0-9_.@-]{0,63}")

_PBKDF2_ITERATIONS = 120_000


@dataclass(frozen=True)
class Identity:
    login: str
    name: str
    first_name: str
    age: int
    email: str


@dataclass(frozen=True)
class TraceEvent:
    timestamp: datetime
    kind: TraceKind
    payload: Mapping[str, object]


@dataclass(frozen=True)
class LearnerRecord:
    learner_id: str
    identity: Identity
    credential_hash: str
    goal: Goal
    enrolled_courses: tuple[str, ...]
    style: StyleProfile | None
    style_source: StyleSource | None
    overlay: Mapping[str, float]
    status: Mapping[str, Level]
    traces: tuple[TraceEvent, ...]


# ---------------------------------------------------------------------------
# Credentials
# ---------------------------------------------------------------------------

def hash_credential(
    password: str, *, salt: bytes | None = None, iterations: int = _PBKDF2_ITERATIONS
) -> str:
    salt = salt if salt is not None else os.urandom(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return f"pbkdf2-sha256${iterations}${salt.hex()}${digest.hex()}"


def verify_credential(record: LearnerRecord, password: str) -> bool:
    try:
        _scheme, iterations, salt_hex, digest_hex = record.credential_hash.split("$")
        digest = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(iterations)
        )
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(digest.hex(), digest_hex)


# ---------------------------------------------------------------------------
# State transitions
# ---------------------------------------------------------------------------

def _now(at: datetime | None) -> datetime:
    return at if at is not None else datetime.now(timezone.utc)


def with_trace(
    record: LearnerRecord,
    kind: TraceKind,
    payload: Mapping[str, object],
    at: datetime | None,
    **changes,
) -> LearnerRecord:
    """Apply field changes and append the single trace event for them."""
    # Traces must stay strictly time-ordered even when the wall clock
    # repeats a microsecond; nudge forward if needed.
    timestamp = _now(at)
    if record.traces and timestamp <= record.traces[-1].timestamp:
        timestamp = record.traces[-1].timestamp + timedelta(microseconds=1)
    event = TraceEvent(timestamp=timestamp, kind=kind, payload=dict(payload))
    return replace(record, traces=record.traces + (event,), **changes)


def register_learner(
    identity: Identity,
    password: str,
    goal: Goal,
    course_ids: tuple[str, ...] = (),
    *,
    at: datetime | None = None,
    kdf_iterations: int = _PBKDF2_ITERATIONS,
) -> LearnerRecord:
    """Create a fresh record: no style, empty overlay, one registered event.

    The learner id is the login, which keeps ids stable and deterministic;
    login uniqueness is enforced where records are persisted. The stored
    hash embeds its iteration count, so kdf_iterations may be lowered for
    synthetic cohorts without breaking verification.
    """
    for field_name in ("login", "name", "first_name", "email"):
        value = getattr(identity, field_name)
        if not isinstance(value, str) or not value.strip():
            raise MissingField(f"identity field {field_name!r} is required")
    if not isinstance(identity.age, int) or identity.age <= 0:
        raise MissingField("identity field 'age' must be a positive integer")
    if not password:
        raise MissingField("password is required")
    if not LOGIN_PATTERN.fullmatch(identity.login):
        raise MalformedDocument(
            "login must be 1-64 characters from letters, digits, '_', '.', '@', '-'"
        )
    record = LearnerRecord(
        learner_id=identity.login,
        identity=identity,
        credential_hash=hash_credential(password, iterations=kdf_iterations),
        goal=Goal(goal),
        enrolled_courses=tuple(course_ids),
        style=None,
        style_source=None,
        overlay={},
        status={},
        traces=(),
    )
    return with_trace(record, TraceKind.REGISTERED, {"login": identity.login}, at)


def set_style_from_questionnaire(
    record: LearnerRecord,
    sheet: ResponseSheet,
    instrument: Instrument,
    *,
    at: datetime | None = None,
) -> LearnerRecord:
    """Score a complete sheet and store the resulting profile.

    Replaces a default-assigned style; a questionnaire result itself is
    only replaced by a newer questionnaire result.
    """
    profile = profile_from_sheet(sheet, instrument)
    payload = {
        "instrument_id": instrument.instrument_id,
        "style_id": profile.style_id,
        "values": {s.dimension.value: s.value for s in profile.scores},
    }
    return with_trace(
        record,
        TraceKind.QUESTIONNAIRE_SUBMITTED,
        payload,
        at,
        style=profile,
        style_source=StyleSource.QUESTIONNAIRE,
    )


def assign_default_style(
    record: LearnerRecord,
    cohort: StyleHistogram,
    *,
    at: datetime | None = None,
) -> LearnerRecord:
    """Give a learner who skipped the questionnaire the cohort's modal style.

    Every dimension is set to the weakest confidence so adaptation stays
    mild until a real measurement arrives. Never overwrites a
    questionnaire-derived style.
    """
    if record.style_source is StyleSource.QUESTIONNAIRE:
        raise StyleAlreadySet(
            f"learner {record.learner_id!r} already has a questionnaire-derived style"
        )
    style_id = modal_style(cohort)
    profile = uncertain_profile(style_id)
    return with_trace(
        record,
        TraceKind.DEFAULT_STYLE_ASSIGNED,
        {"style_id": style_id, "cohort_total": cohort.total},
        at,
        style=profile,
        style_source=StyleSource.DEFAULT,
    )


def get_concept_score(record: LearnerRecord, concept_id: str) -> float:
    """Stored overlay score, 0.0 for concepts never assessed."""
    return record.overlay.get(concept_id, 0.0)


def update_concept_score(
    record: LearnerRecord,
    concept_id: str,
    test_fraction: float,
    *,
    retention: float = DEFAULT_RETENTION,
    detail: Mapping[str, object] | None = None,
    at: datetime | None = None,
) -> LearnerRecord:
    """Blend a post-test result into the overlay.

    new = retention * old + (1 - retention) * test_fraction, a convex
    combination, so scores stay in [0, 1] under any update sequence.
    """
    if not 0.0 <= test_fraction <= 1.0:
        raise OutOfRange(f"test fraction must be in [0, 1], got {test_fraction}")
    if not 0.0 <= retention < 1.0:
        raise OutOfRange(f"retention must be in [0, 1), got {retention}")
    old = get_concept_score(record, concept_id)
    new = retention * old + (1.0 - retention) * test_fraction
    overlay = dict(record.overlay)
    overlay[concept_id] = new
    payload: dict[str, object] = {
        "concept_id": concept_id,
        "test_fraction": test_fraction,
        "old_score": old,
        "new_score": new,
    }
    if detail:
        payload.update(detail)
    return with_trace(record, TraceKind.POSTTEST, payload, at, overlay=overlay)


def has_pretest(record: LearnerRecord, course_id: str) -> bool:
    """Whether the one-time course pre-test has been graded."""
    return any(
        event.kind is TraceKind.PRETEST and event.payload.get("course_id") == course_id
        for event in record.traces
    )


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def record_to_document(record: LearnerRecord) -> dict:
    """Full persistence form, including the credential hash."""
    doc = public_record_document(record)
    doc["credential_hash"] = record.credential_hash
    return doc


def public_record_document(record: LearnerRecord) -> dict:
    """API-facing form: everything except the credential hash."""
    return {
        "learner_id": record.learner_id,
        "identity": {
            "login": record.identity.login,
            "name": record.identity.name,
            "first_name": record.identity.first_name,
            "age": record.identity.age,
            "email": record.identity.email,
        },
        "goal": record.goal.value,
        "enrolled_courses": list(record.enrolled_courses),
        "style": style_profile_document(record.style) if record.style else None,
        "style_source": record.style_source.value if record.style_source else None,
        "overlay": dict(record.overlay),
        "status": {course: level.value for course, level in record.status.items()},
        "traces": [
            {
                "timestamp": event.timestamp.isoformat(),
                "kind": event.kind.value,
                "payload": dict(event.payload),
            }
            for event in record.traces
        ],
    }


def record_from_document(doc: Mapping) -> LearnerRecord:
    identity = doc["identity"]
    return LearnerRecord(
        learner_id=doc["learner_id"],
        identity=Identity(
            login=identity["login"],
            name=identity["name"],
            first_name=identity["first_name"],
            age=int(identity["age"]),
            email=identity["email"],
        ),
        credential_hash=doc.get("credential_hash", ""),
        goal=Goal(doc["goal"]),
        enrolled_courses=tuple(doc.get("enrolled_courses", ())),
        style=style_profile_from_document(doc["style"]) if doc.get("style") else None,
        style_source=StyleSource(doc["style_source"]) if doc.get("style_source") else None,
        overlay={k: float(v) for k, v in doc.get("overlay", {}).items()},
        status={k: Level(v) for k, v in doc.get("status", {}).items()},
        traces=tuple(
            TraceEvent(
                timestamp=datetime.fromisoformat(event["timestamp"]),
                kind=TraceKind(event["kind"]),
                payload=dict(event["payload"]),
            )
            for event in doc.get("traces", ())
        ),
    )
