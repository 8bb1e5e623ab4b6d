"""HTTP facade over the engine.

Every handler is a thin shell: parse the request, run the corresponding
engine operation against the store, serialize the result with the same
document helpers the engine exposes. That keeps the API observably equal
to in-process calls on the same state.

Learner-scoped routes require a bearer token from POST /login. Mutations
of one learner run through the store's per-learner lock.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import assessment, generator, learner, psychometrics
from .config import ServiceConfig
from .content import course_to_document, ingest_course
from .errors import (
    AlreadyTaken,
    DuplicateLogin,
    EngineError,
    MalformedDocument,
    MissingField,
    NotEnrolled,
    PretestMissing,
    StoreUnavailable,
    StyleAlreadySet,
    TooFewRows,
    UnknownConcept,
    UnknownCourse,
    UnknownLearner,
)
from .instrument import (
    ResponseSheet,
    default_instrument,
    instrument_to_document,
    load_instrument,
    style_profile_document,
)
from .learner import Identity, public_record_document, verify_credential
from .store import EngineStore
from .vocab import Goal, InstrumentKind, TraceKind

HTTP_STATUS: dict[type[EngineError], int] = {
    DuplicateLogin: 409,
    StyleAlreadySet: 409,
    AlreadyTaken: 409,
    PretestMissing: 409,
    NotEnrolled: 409,
    UnknownLearner: 404,
    UnknownCourse: 404,
    UnknownConcept: 404,
    MissingField: 400,
    MalformedDocument: 400,
    StoreUnavailable: 503,
}
DEFAULT_STATUS = 422


@dataclass(frozen=True)
class SessionToken:
    token: str
    learner_id: str
    issued_at: datetime
    expires_at: datetime


class RegisterBody(BaseModel):
    login: str
    password: str
    name: str
    first_name: str
    age: int
    email: str
    goal: Goal = Goal.GENERAL
    courses: list[str] = Field(default_factory=list)


class LoginBody(BaseModel):
    login: str
    password: str


class QuestionnaireBody(BaseModel):
    answers: dict[str, str]


class TestBody(BaseModel):
    test_id: str
    answers: dict[str, int]


class _Denied(Exception):
    """Internal: carries a ready 401 response out of the auth check."""

    def __init__(self, message: str):
        self.message = message


def create_app(config: ServiceConfig) -> FastAPI:
    store = EngineStore(config.store_dir)
    instrument = (
        load_instrument(config.instrument_path)
        if config.instrument_path
        else default_instrument()
    )
    store.put_instrument(instrument)
    bounds = config.thresholds
    tokens: dict[str, SessionToken] = {}

    app = FastAPI(title="adaptcourse", version="0.1.0")

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request: Request, exc: EngineError):
        status = HTTP_STATUS.get(type(exc), DEFAULT_STATUS)
        return JSONResponse(
            status_code=status, content={"code": exc.code, "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "validation_error", "message": str(exc.errors()[:3])},
        )

    def authorize(learner_id: str, authorization: str | None) -> None:
        if not authorization or not authorization.startswith("Bearer "):
            raise _Denied("missing bearer token")
        session = tokens.get(authorization.removeprefix("Bearer ").strip())
        if session is None:
            raise _Denied("unknown token")
        if session.expires_at <= datetime.now(timezone.utc):
            raise _Denied("token expired")
        if session.learner_id != learner_id:
            raise _Denied("token does not match learner")

    @app.exception_handler(_Denied)
    async def denied_handler(_request: Request, exc: _Denied):
        return JSONResponse(
            status_code=401, content={"code": "unauthorized", "message": exc.message}
        )

    def bearer(authorization: str | None = Header(default=None)) -> str | None:
        return authorization

    # -- registration and sessions ------------------------------------------

    @app.post("/learners", status_code=201)
    def register(body: RegisterBody):
        record = store.create_learner(
            Identity(
                login=body.login,
                name=body.name,
                first_name=body.first_name,
                age=body.age,
                email=body.email,
            ),
            body.password,
            body.goal,
            tuple(body.courses),
        )
        return public_record_document(record)

    @app.post("/login")
    def login(body: LoginBody):
        try:
            record = store.get_learner(body.login)
        except UnknownLearner:
            return JSONResponse(
                status_code=401,
                content={"code": "bad_credentials", "message": "unknown login or wrong password"},
            )
        if not verify_credential(record, body.password):
            return JSONResponse(
                status_code=401,
                content={"code": "bad_credentials", "message": "unknown login or wrong password"},
            )
        issued = datetime.now(timezone.utc)
        session = SessionToken(
            token=secrets.token_hex(16),
            learner_id=record.learner_id,
            issued_at=issued,
            expires_at=issued + timedelta(seconds=config.token_ttl_seconds),
        )
        tokens[session.token] = session
        return {
            "token": session.token,
            "learner_id": session.learner_id,
            "expires_at": session.expires_at.isoformat(),
        }

    @app.get("/learners/{learner_id}")
    def learner_profile(learner_id: str, authorization: str | None = Depends(bearer)):
        authorize(learner_id, authorization)
        return public_record_document(store.get_learner(learner_id))

    # -- profiling -------------------------------------------------------------

    @app.post("/learners/{learner_id}/questionnaire")
    def submit_questionnaire(
        learner_id: str,
        body: QuestionnaireBody,
        authorization: str | None = Depends(bearer),
    ):
        authorize(learner_id, authorization)
        sheet = ResponseSheet(instrument.instrument_id, dict(body.answers))
        record = store.mutate_learner(
            learner_id,
            lambda r: learner.set_style_from_questionnaire(r, sheet, instrument),
        )
        store.save_sheet(learner_id, dict(body.answers), instrument.instrument_id)
        doc = style_profile_document(record.style)
        doc["style_source"] = record.style_source.value
        return doc

    @app.post("/learners/{learner_id}/default-style")
    def default_style(learner_id: str, authorization: str | None = Depends(bearer)):
        authorize(learner_id, authorization)
        histogram = psychometrics.style_distribution(
            r.style for r in store.learners() if r.style is not None
        )
        record = store.mutate_learner(
            learner_id, lambda r: learner.assign_default_style(r, histogram)
        )
        doc = style_profile_document(record.style)
        doc["style_source"] = record.style_source.value
        return doc

    # -- assessment ---------------------------------------------------------------

    def _find_test(course, test_id: str):
        test = course.tests.get(test_id)
        if test is None:
            raise MalformedDocument(
                f"course {course.course_id!r} has no test {test_id!r}"
            )
        return test

    @app.post("/learners/{learner_id}/courses/{course_id}/pretest")
    def pretest(
        learner_id: str,
        course_id: str,
        body: TestBody,
        authorization: str | None = Depends(bearer),
    ):
        authorize(learner_id, authorization)
        course = store.get_course(course_id)
        test = _find_test(course, body.test_id)
        holder: dict = {}

        def apply(record):
            result, updated = assessment.grade_pretest(
                record,
                course,
                test,
                body.answers,
                lower=bounds.level_lower,
                upper=bounds.level_upper,
            )
            holder["result"] = result
            return updated

        store.mutate_learner(learner_id, apply)
        return assessment.test_result_document(holder["result"])

    @app.post(
        "/learners/{learner_id}/courses/{course_id}/concepts/{concept_id}/posttest"
    )
    def posttest(
        learner_id: str,
        course_id: str,
        concept_id: str,
        body: TestBody,
        authorization: str | None = Depends(bearer),
    ):
        authorize(learner_id, authorization)
        course = store.get_course(course_id)
        test = _find_test(course, body.test_id)
        if test.concept_id != concept_id:
            raise MalformedDocument(
                f"test {test.test_id!r} is not a post-test for concept {concept_id!r}"
            )
        holder: dict = {}

        def apply(record):
            result, updated = assessment.grade_posttest(
                record,
                course,
                test,
                body.answers,
                retention=bounds.overlay_retention,
                lower=bounds.level_lower,
                upper=bounds.level_upper,
            )
            holder["result"] = result
            return updated

        store.mutate_learner(learner_id, apply)
        return assessment.test_result_document(holder["result"])

    # -- course pages -----------------------------------------------------------

    @app.get("/learners/{learner_id}/courses/{course_id}/concepts/{concept_id}/page")
    def page(
        learner_id: str,
        course_id: str,
        concept_id: str,
        from_concept: str | None = Query(default=None),
        authorization: str | None = Depends(bearer),
    ):
        authorize(learner_id, authorization)
        course = store.get_course(course_id)
        if from_concept is not None:
            store.mutate_learner(
                learner_id,
                lambda r: learner.with_trace(
                    r,
                    TraceKind.LINK_FOLLOWED,
                    {"course_id": course_id, "from": from_concept, "to": concept_id},
                    None,
                ),
            )
        holder: dict = {}

        def apply(record):
            built, updated = generator.generate_page(
                record,
                course,
                concept_id,
                mastery=bounds.mastery_bound,
                readiness=bounds.readiness_bound,
            )
            holder["page"] = built
            return updated

        store.mutate_learner(learner_id, apply)
        return generator.page_document(holder["page"])

    # -- courses and instrument ----------------------------------------------------

    @app.put("/courses")
    def put_course(document: dict):
        course = ingest_course(document)
        store.put_course(course)
        return {
            "course_id": course.course_id,
            "concepts": len(course.concepts),
            "fragments": len(course.fragments),
            "tests": len(course.tests),
        }

    @app.get("/courses/{course_id}")
    def get_course(course_id: str):
        return course_to_document(store.get_course(course_id))

    @app.get("/instrument")
    def get_instrument():
        return instrument_to_document(instrument)

    # -- cohort analytics -------------------------------------------------------------

    @app.get("/cohort/style-distribution")
    def cohort_styles():
        histogram = psychometrics.style_distribution(
            r.style for r in store.learners() if r.style is not None
        )
        return psychometrics.style_histogram_document(histogram)

    @app.get("/cohort/alpha")
    def cohort_alpha(kind: InstrumentKind = Query(default=InstrumentKind.PREFERENCE)):
        sheets = [
            ResponseSheet(doc["instrument_id"], doc["answers"])
            for doc in store.sheets()
            if doc["instrument_id"] == instrument.instrument_id
        ]
        if len(sheets) < 2:
            raise TooFewRows(
                "cohort alpha needs at least two stored questionnaire sheets"
            )
        matrix = psychometrics.matrix_from_sheets(sheets, instrument)
        report = psychometrics.reliability_report(matrix, kind)
        return psychometrics.reliability_report_document(report)

    return app


def run(config: ServiceConfig) -> None:
    """Blocking server start; used by the CLI's serve command."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port)
