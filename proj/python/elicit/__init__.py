"""Python bindings for the elicit fitting engine.

Judgements are sequences of ``(p, x)`` or ``(p, x, dp, dx)`` rows.
"""

import json

from ._core import Distribution, ElicitError
from . import _core

__all__ = ["Distribution", "ElicitError", "fit", "feasible", "feedback", "Session"]

DEFAULT_FAMILIES = "normal,t5,cauchy"


def _rows(judgements):
    return [[float(v) for v in row] for row in judgements]


def _families(families):
    return families if isinstance(families, str) else ",".join(families)


def fit(judgements, families=DEFAULT_FAMILIES):
    """Exact, least-squares and feasibility results per family."""
    return json.loads(_core.fit_json(_rows(judgements), _families(families)))


def feasible(judgements, families=DEFAULT_FAMILIES):
    return json.loads(_core.feasible_json(_rows(judgements), _families(families)))


def feedback(judgements, families=DEFAULT_FAMILIES, probabilities=(), thresholds=()):
    return json.loads(
        _core.feedback_json(_rows(judgements), _families(families), list(probabilities), list(thresholds))
    )


class Session:
    """An elicitation session held as its canonical JSON document."""

    def __init__(self, document):
        self.document = document

    @classmethod
    def new(cls, session_id, quantity_label=""):
        return cls(_core.new_session(session_id, quantity_label))

    def apply(self, event):
        self.document = _core.apply_event(self.document, json.dumps(event))
        return self

    @property
    def state(self):
        return json.loads(self.document)["state"]

    def replay_matches(self):
        return _core.replay_matches(self.document)
