#!/usr/bin/env python3
"""
Exception Handler Module

Exception hierarchy for the toolkit plus consistent handling, severity
classification and CLI exit-code mapping.
"""

import logging
import traceback
from enum import Enum
from typing import Any, Dict, List, Optional


class ExceptionSeverity(Enum):
    """Severity levels for exceptions."""

    CRITICAL = "CRITICAL"  # Program-breaking errors that should terminate execution
    HIGH = "HIGH"  # Input or precondition errors that stop the requested operation
    MEDIUM = "MEDIUM"  # Degraded answers (unachievable, caps) the caller can report
    LOW = "LOW"  # Minor errors that can be safely ignored or logged only


class JsccForgeError(Exception):
    """Base exception for jscc-forge errors."""

    default_severity = ExceptionSeverity.HIGH

    def __init__(
        self,
        message: str,
        severity: Optional[ExceptionSeverity] = None,
        user_message: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message)
        self.severity = severity or self.default_severity
        self.user_message = user_message or message
        self.details = details or {}


class ModelError(JsccForgeError):
    """Raised when a pmf, channel or input distribution is invalid."""

    pass


class ModelFileError(ModelError):
    """Raised when a model file cannot be read or parsed."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"Model file {path}: {message}", details={"path": path})


class UnknownVariableError(ModelError):
    """Raised when a variable name is not part of a joint pmf."""

    def __init__(self, name: str, known: List[str]) -> None:
        self.name = name
        super().__init__(
            f"Unknown variable '{name}' (known: {', '.join(known)})",
            details={"variable": name, "known": list(known)},
        )


class OverlapError(ModelError):
    """Raised when variable subsets that must be disjoint overlap."""

    def __init__(self, overlap: List[str]) -> None:
        super().__init__(
            f"Variable subsets overlap on {', '.join(overlap)}",
            details={"overlap": list(overlap)},
        )


class ConfigurationError(JsccForgeError):
    """Raised when a run configuration is invalid."""

    pass


class CapExceededError(JsccForgeError):
    """Raised when a candidate, codebook, bin or enumeration cap is exceeded."""

    def __init__(self, what: str, size: float, cap: float) -> None:
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(
            f"{what} size {size:.0f} exceeds cap {cap:.0f}",
            details={"what": what, "size": size, "cap": cap},
        )


class PreconditionError(JsccForgeError):
    """Raised when a theorem's structural precondition does not hold."""

    def __init__(
        self, theorem: str, reports: List[Dict[str, Any]], message: str = ""
    ) -> None:
        self.theorem = theorem
        self.reports = reports
        failed = [r for r in reports if not r.get("holds", False)]
        worst = max((r.get("max_deviation", 0.0) for r in failed), default=0.0)
        self.max_deviation = worst
        text = message or (
            f"Precondition of {theorem} violated "
            f"({len(failed)} failing check(s), max deviation {worst:.3g})"
        )
        super().__init__(
            text, details={"theorem": theorem, "precondition_report": reports}
        )


class UnachievableError(JsccForgeError):
    """Raised when a requirement is positive where the region is identically zero."""

    default_severity = ExceptionSeverity.MEDIUM

    def __init__(self, message: str, components: Optional[List[int]] = None) -> None:
        self.components = components or []
        super().__init__(
            f"Unachievable at any b: {message}",
            details={"components": self.components},
        )


class ExceptionHandler:
    """Centralized exception handling for the toolkit."""

    # CLI exit codes
    EXIT_OK = 0
    EXIT_PRECONDITION = 1
    EXIT_INPUT = 2
    EXIT_INTERNAL = 3

    @staticmethod
    def handle_exception(
        e: Exception,
        context: str = "",
        log_level: int = logging.ERROR,
    ) -> Dict[str, Any]:
        """
        Handle an exception with appropriate logging and a user message.

        Args:
            e: The exception that occurred
            context: Description of where the exception occurred
            log_level: Logging level for this exception

        Returns:
            Dictionary with handling results and user messages
        """
        exc_type = type(e).__name__
        exc_message = str(e)
        exc_traceback = traceback.format_exc()

        severity = ExceptionHandler._determine_severity(e)

        log_message = (
            f"{context}: {exc_type}: {exc_message}"
            if context
            else f"{exc_type}: {exc_message}"
        )
        logging.log(log_level, log_message)
        logging.debug(f"Full traceback for {context or exc_type}:")
        logging.debug(exc_traceback)

        user_message = ExceptionHandler._create_user_message(e, context, severity)

        return {
            "severity": severity,
            "user_message": user_message,
            "log_message": log_message,
            "traceback": exc_traceback,
            "exception_type": exc_type,
            "context": context,
            "exit_code": ExceptionHandler.exit_code_for(e),
            "details": getattr(e, "details", {}),
        }

    @staticmethod
    def _determine_severity(e: Exception) -> ExceptionSeverity:
        """Determine the severity of an exception based on its type."""
        if isinstance(e, JsccForgeError):
            return e.severity

        exc_type = type(e).__name__

        critical_exceptions = ["SystemExit", "KeyboardInterrupt", "MemoryError"]

        high_severity_exceptions = [
            "FileNotFoundError",
            "PermissionError",
            "OSError",
            "IOError",
            "JSONDecodeError",
            "ImportError",
        ]

        medium_severity_exceptions = [
            "ValueError",
            "TypeError",
            "KeyError",
            "IndexError",
            "RuntimeError",
            "FloatingPointError",
        ]

        if exc_type in critical_exceptions:
            return ExceptionSeverity.CRITICAL
        elif exc_type in high_severity_exceptions:
            return ExceptionSeverity.HIGH
        elif exc_type in medium_severity_exceptions:
            return ExceptionSeverity.MEDIUM
        else:
            return ExceptionSeverity.LOW

    @staticmethod
    def _create_user_message(
        e: Exception, context: str, severity: ExceptionSeverity
    ) -> str:
        """Create a user-facing message for the exception."""
        message = getattr(e, "user_message", None) or str(e)

        if severity == ExceptionSeverity.CRITICAL:
            prefix = "CRITICAL ERROR"
        elif severity == ExceptionSeverity.HIGH:
            prefix = "ERROR"
        elif severity == ExceptionSeverity.MEDIUM:
            prefix = "WARNING"
        else:
            prefix = "INFO"

        if context:
            return f"{prefix} [{context}]: {message}"
        return f"{prefix}: {message}"

    @staticmethod
    def exit_code_for(e: Exception) -> int:
        """Map an exception to the CLI exit code contract."""
        if isinstance(e, PreconditionError):
            return ExceptionHandler.EXIT_PRECONDITION
        if isinstance(e, UnachievableError):
            return ExceptionHandler.EXIT_OK
        if isinstance(e, (ModelError, ConfigurationError, CapExceededError)):
            return ExceptionHandler.EXIT_INPUT
        if isinstance(e, (OSError, ValueError, KeyError)):
            return ExceptionHandler.EXIT_INPUT
        return ExceptionHandler.EXIT_INTERNAL

    @staticmethod
    def format_exception_summary(results: Dict[str, Any]) -> str:
        """Format exception results into a summary string for display."""
        return str(results["user_message"])
