"""Invariant approximate subgroups from uniform commensurable families over finite groups.

Instances and reports are exchanged as JSON; the helpers below accept either
JSON text or an already-decoded dict and return decoded JSON.
"""

import json

from ._core import AsgError, LemmaViolation
from . import _core

__all__ = ["AsgError", "LemmaViolation", "validate", "run", "oracle", "battery", "verify", "digest"]


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def validate(instance):
    """Return the family constants (K, N)."""
    return _core.validate(_text(instance))


def run(instance, check_lemmas=False, oracle=False):
    """Run the construction and return the report as a dict."""
    return json.loads(_core.run(_text(instance), check_lemmas, oracle))


def oracle(instance):
    """Map each compared field to whether the pipeline and the exhaustive recomputation agree."""
    return _core.oracle(_text(instance))


def battery(seed=0, trials=1, group_cap=24):
    """Run the seeded lemma battery and return its tallies."""
    return json.loads(_core.battery(seed, trials, group_cap))


def verify(report):
    """List the problems found re-checking a report; empty when every certificate holds."""
    return _core.verify(_text(report))


def digest(instance):
    """Hex SHA-256 of the canonical serialization of an instance."""
    return _core.digest(_text(instance))
