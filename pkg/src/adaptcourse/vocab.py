"""Closed vocabularies shared across the engine.

Every enumeration here is a deliberate closed set: parsers reject values
outside it, adaptation rules key on it, and persistence round-trips it by
string value.
"""

from __future__ import annotations

from enum import Enum


class Dimension(str, Enum):
    """The four bipolar axes of the learning-style model."""

    PROCESSING = "Processing"
    REASONING = "Reasoning"
    PERCEPTION = "Perception"
    PROGRESS = "Progress"


class Pole(str, Enum):
    """One end of a dimension."""

    ACTIVE = "Active"
    REFLECTIVE = "Reflective"
    INDUCTIVE = "Inductive"
    DEDUCTIVE = "Deductive"
    VERBAL = "Verbal"
    VISUAL = "Visual"
    SEQUENTIAL = "Sequential"
    GLOBAL = "Global"


# Canonical pole pair per dimension. The first pole of each pair is the
# "zero" pole of the 16-way style encoding and the default pole_a of the
# shipped instrument.
POLES_BY_DIMENSION: dict[Dimension, tuple[Pole, Pole]] = {
    Dimension.PROCESSING: (Pole.ACTIVE, Pole.REFLECTIVE),
    Dimension.REASONING: (Pole.INDUCTIVE, Pole.DEDUCTIVE),
    Dimension.PERCEPTION: (Pole.VERBAL, Pole.VISUAL),
    Dimension.PROGRESS: (Pole.SEQUENTIAL, Pole.GLOBAL),
}

DIMENSION_ORDER: tuple[Dimension, ...] = tuple(POLES_BY_DIMENSION)

# Bit weight of each dimension in the style id (1 + sum of set bits).
STYLE_BIT_WEIGHT: dict[Dimension, int] = {
    Dimension.PROCESSING: 1,
    Dimension.REASONING: 2,
    Dimension.PERCEPTION: 4,
    Dimension.PROGRESS: 8,
}

ZERO_POLES: frozenset[Pole] = frozenset(pair[0] for pair in POLES_BY_DIMENSION.values())

DIMENSION_OF_POLE: dict[Pole, Dimension] = {
    pole: dim for dim, pair in POLES_BY_DIMENSION.items() for pole in pair
}


def opposite_pole(pole: Pole) -> Pole:
    a, b = POLES_BY_DIMENSION[DIMENSION_OF_POLE[pole]]
    return b if pole is a else a


class Confidence(str, Enum):
    """Band of |M - N| for one dimension measurement."""

    UNCERTAIN = "Uncertain"
    MODERATE = "Moderate"
    STRONG = "Strong"


class Level(str, Enum):
    """Cognitive status of a learner on a course."""

    BEGINNER = "Beginner"
    INTERMEDIATE = "Intermediate"
    EXPERT = "Expert"


LEVEL_ORDER: dict[Level, int] = {
    Level.BEGINNER: 0,
    Level.INTERMEDIATE: 1,
    Level.EXPERT: 2,
}


class Media(str, Enum):
    TEXT = "text"
    AUDIO = "audio"
    IMAGE = "image"
    CHART = "chart"
    ANIMATION = "animation"
    VIDEO = "video"


class Role(str, Enum):
    """Pedagogical role of a content fragment."""

    EXAMPLE = "example"
    FACT = "fact"
    ACTIVITY = "activity"
    PRACTICE = "practice"
    THEORY = "theory"
    DEFINITION = "definition"
    DEMONSTRATION = "demonstration"
    DISCUSSION = "discussion"


class Strength(str, Enum):
    """How firmly one dimension drives adaptation."""

    OFF = "off"
    SOFT = "soft"
    STRICT = "strict"


class Annotation(str, Enum):
    """Adaptive annotation on a navigation link."""

    RECOMMENDED = "recommended"
    NEUTRAL = "neutral"
    NOT_READY = "not_ready"


class Goal(str, Enum):
    GENERAL = "general"
    IN_DEPTH = "in_depth"


class StyleSource(str, Enum):
    QUESTIONNAIRE = "questionnaire"
    DEFAULT = "default"


class TraceKind(str, Enum):
    REGISTERED = "registered"
    QUESTIONNAIRE_SUBMITTED = "questionnaire_submitted"
    DEFAULT_STYLE_ASSIGNED = "default_style_assigned"
    PRETEST = "pretest"
    POSTTEST = "posttest"
    PAGE_VISITED = "page_visited"
    LINK_FOLLOWED = "link_followed"


class InstrumentKind(str, Enum):
    """What a questionnaire measures; decides the reliability threshold."""

    PREFERENCE = "preference"
    KNOWLEDGE = "knowledge"
