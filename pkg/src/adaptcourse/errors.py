"""Domain error taxonomy.

Every error carries a stable machine code (used in API bodies) and a
process exit code (used by the CLI). Codes are part of the external
contract; do not renumber casually.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every domain error raised by the engine."""

    code = "engine_error"
    exit_code = 1


# -- instrument / scoring ---------------------------------------------------

class MalformedDocument(EngineError):
    code = "malformed_document"
    exit_code = 10


class WrongQuestionCount(EngineError):
    code = "wrong_question_count"
    exit_code = 11


class DuplicateQuestionId(EngineError):
    code = "duplicate_question_id"
    exit_code = 12


class UnknownDimension(EngineError):
    code = "unknown_dimension"
    exit_code = 13


class IncompleteSheet(EngineError):
    code = "incomplete_sheet"
    exit_code = 14


class InstrumentMismatch(EngineError):
    code = "instrument_mismatch"
    exit_code = 15


class OutOfRange(EngineError):
    code = "out_of_range"
    exit_code = 16


class MissingDimension(EngineError):
    code = "missing_dimension"
    exit_code = 17


class DuplicateDimension(EngineError):
    code = "duplicate_dimension"
    exit_code = 18


# -- psychometrics ------------------------------------------------------------

class DegenerateMatrix(EngineError):
    code = "degenerate_matrix"
    exit_code = 20


class TooFewItems(EngineError):
    code = "too_few_items"
    exit_code = 21


class TooFewRows(EngineError):
    code = "too_few_rows"
    exit_code = 22


# -- course content -----------------------------------------------------------

class CyclicPrerequisites(EngineError):
    code = "cyclic_prerequisites"
    exit_code = 30

    def __init__(self, message: str, cycle: list[str] | None = None):
        super().__init__(message)
        self.cycle = cycle or []


class DanglingReference(EngineError):
    code = "dangling_reference"
    exit_code = 31


class EmptyCourse(EngineError):
    code = "empty_course"
    exit_code = 32


class UnreachableConcept(EngineError):
    code = "unreachable_concept"
    exit_code = 33


class UnknownConcept(EngineError):
    code = "unknown_concept"
    exit_code = 34


class UnknownCourse(EngineError):
    code = "unknown_course"
    exit_code = 35


# -- learner state ------------------------------------------------------------

class DuplicateLogin(EngineError):
    code = "duplicate_login"
    exit_code = 40


class MissingField(EngineError):
    code = "missing_field"
    exit_code = 41


class StyleAlreadySet(EngineError):
    code = "style_already_set"
    exit_code = 42


class UnknownLearner(EngineError):
    code = "unknown_learner"
    exit_code = 43


# -- assessment / generation ----------------------------------------------------

class NotEnrolled(EngineError):
    code = "not_enrolled"
    exit_code = 50


class PretestMissing(EngineError):
    code = "pretest_missing"
    exit_code = 51


class AlreadyTaken(EngineError):
    code = "already_taken"
    exit_code = 52


class AnswerCountMismatch(EngineError):
    code = "answer_count_mismatch"
    exit_code = 53


# -- persistence ----------------------------------------------------------------

class StoreUnavailable(EngineError):
    code = "store_unavailable"
    exit_code = 60


class IntegrityViolation(EngineError):
    code = "integrity_violation"
    exit_code = 61
