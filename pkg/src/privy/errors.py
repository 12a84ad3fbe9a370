"""Shared error hierarchy.

Every failure path in the package raises a subclass of PrivyError carrying a
stable machine-readable ``code``; the HTTP layer maps codes to status codes
and the CLI maps them to exit codes.
"""

from __future__ import annotations

from typing import Any


class PrivyError(Exception):
    """Base error with a stable code and optional structured details."""

    code = "error"

    def __init__(self, message: str, *, code: str | None = None, details: Any = None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details is not None:
            payload["details"] = self.details
        return payload


class ValidationError(PrivyError):
    """Input violates a precondition or invariant."""

    code = "validation_error"


class NotFoundError(PrivyError):
    """A referenced entity does not exist."""

    code = "not_found"


class VersionConflictError(PrivyError):
    """Optimistic-concurrency check failed: the caller mutated a stale version."""

    code = "version_conflict"


class ConfigError(PrivyError):
    """Missing or inconsistent runtime configuration."""

    code = "config_error"


class BackendError(PrivyError):
    """The LLM backend failed (transport, auth, or provider error payload)."""

    code = "backend_error"


class LlmOutputInvalid(PrivyError):
    """LLM output failed structured validation even after the single repair turn."""

    code = "llm_output_invalid"
