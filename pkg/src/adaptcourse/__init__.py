"""Deterministic adaptive-hypermedia course engine.

Profiles learners with a forced-choice learning-style questionnaire,
tracks what they know in an overlay model updated by pre- and post-tests,
and generates course pages by filtering and ordering content fragments to
match both the style profile and the current cognitive status.
"""

__version__ = "0.1.0"
