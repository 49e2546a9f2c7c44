"""Exception hierarchy.

Every error that can cross the HTTP boundary carries a stable kebab-case
``code`` used verbatim in API error payloads and CLI diagnostics.
"""

from __future__ import annotations


class PwimError(Exception):
    """Base class for all domain errors."""

    code = "error"


class MalformedFactError(PwimError):
    code = "malformed-fact"


class UnsafePatternError(PwimError):
    code = "unsafe-pattern"


class SchemaError(PwimError):
    """Domain document validation failure, qualified by a JSON path."""

    code = "schema-error"

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class MissingBindingError(PwimError):
    code = "missing-binding"


class StaleActionError(PwimError):
    code = "stale-action"


class UnknownActionError(PwimError):
    code = "unknown-action"


class UnknownDomainError(PwimError):
    code = "unknown-domain"


class NoSessionError(PwimError):
    code = "no-session"


class EmptyIntentError(PwimError):
    code = "empty-intent"


class ProviderUnavailableError(PwimError):
    code = "provider-unavailable"


class DimensionMismatchError(PwimError):
    code = "dimension-mismatch"


class ZeroVectorError(PwimError):
    code = "zero-vector"


class CorruptSaveError(PwimError):
    code = "corrupt-save"


class InvalidCaseError(PwimError):
    code = "invalid-case"
