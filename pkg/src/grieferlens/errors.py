"""Exception hierarchy shared across the toolkit.

Every error carries an optional ``path`` naming the offending document
location or record index (e.g. ``position_samples[12].x``) so callers and
HTTP handlers can surface precise diagnostics.
"""

from __future__ import annotations


class GrieferLensError(Exception):
    """Base class for all toolkit errors."""

    def __init__(self, message: str, path: str | None = None):
        self.message = message
        self.path = path
        super().__init__(message if path is None else f"{path}: {message}")

    code = "error"


class MalformedInput(GrieferLensError):
    """Input is not syntactically valid (e.g. broken JSON)."""

    code = "malformed_input"


class SchemaViolation(GrieferLensError):
    """A required field is missing or has the wrong type."""

    code = "schema_violation"


class InvariantViolation(GrieferLensError):
    """Structurally valid input that breaks a domain invariant."""

    code = "invariant_violation"


class UnknownPlayer(GrieferLensError):
    code = "unknown_player"


class NoSamples(GrieferLensError):
    code = "no_samples"


class OutOfBounds(GrieferLensError):
    code = "out_of_bounds"


class BadWindow(GrieferLensError):
    code = "bad_window"


class BadTime(GrieferLensError):
    code = "bad_time"


class MissingEvidenceKey(GrieferLensError):
    code = "missing_evidence_key"


class InvalidScenario(GrieferLensError):
    code = "invalid_scenario"


class IoFailure(GrieferLensError):
    code = "io_failure"
