"""
Error handling utilities for the AQ-guided RAG engine.

This module provides the exception hierarchy shared by every layer, a
centralized error handler, the retry decorator used by the HTTP gateway,
and logging setup.
"""

from typing import Any, Callable, Dict, Optional, Tuple, Type
from functools import wraps
from datetime import datetime, timezone
import logging
import time

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
ROOT_LOGGER = "src"


class AqragError(Exception):
    """Base exception for all engine errors."""

    def __init__(
        self,
        message: str,
        code: str = "AQRAG_ERROR",
        details: Optional[Dict[str, Any]] = None,
        original_error: Optional[Exception] = None,
    ):
        """
        Initialize engine error.

        Args:
            message: Error message
            code: Error code for identification
            details: Additional error details
            original_error: Original exception if wrapped
        """
        super().__init__(message)
        self.message = message
        self.code = code
        self.details = details or {}
        self.original_error = original_error
        self.timestamp = datetime.now(timezone.utc)

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary."""
        return {
            "code": self.code,
            "message": self.message,
            "details": self.details,
            "timestamp": self.timestamp.isoformat(),
            "type": self.__class__.__name__,
        }


class ConfigurationError(AqragError):
    """Error in configuration."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None, **kwargs: Any):
        super().__init__(message, code="CONFIG_ERROR", details=details, **kwargs)


class ValidationError(AqragError):
    """A precondition or invariant was violated."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None, **kwargs: Any):
        super().__init__(message, code="VALIDATION_ERROR", details=details, **kwargs)


class CorpusError(AqragError):
    """Malformed corpus file."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
        **kwargs: Any,
    ):
        if details is None:
            details = {}
        if line is not None:
            details["line"] = line
        super().__init__(message, code="CORPUS_ERROR", details=details, **kwargs)


class BackendError(AqragError):
    """Error from a model backend."""

    def __init__(
        self,
        message: str,
        status_code: Optional[int] = None,
        body: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        code: str = "BACKEND_ERROR",
        **kwargs: Any,
    ):
        if details is None:
            details = {}
        if status_code is not None:
            details["status_code"] = status_code
        if body is not None:
            details["body"] = body[:500]
        super().__init__(message, code=code, details=details, **kwargs)

    @property
    def status_code(self) -> Optional[int]:
        """HTTP status, when the error came from a response."""
        return self.details.get("status_code")


class TransientBackendError(BackendError):
    """Transport failure that persisted through all retries."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None, **kwargs: Any):
        super().__init__(message, details=details, code="TRANSIENT_BACKEND_ERROR", **kwargs)


class UnscriptedPromptError(BackendError):
    """The mock chat backend received a prompt it has no reply for."""

    def __init__(self, fingerprint: str, details: Optional[Dict[str, Any]] = None):
        if details is None:
            details = {}
        details["fingerprint"] = fingerprint
        super().__init__(
            f"Unscripted prompt {fingerprint[:12]}", details=details, code="UNSCRIPTED_PROMPT"
        )


class ParseError(AqragError):
    """Model output could not be parsed."""

    def __init__(self, message: str, offset: int = 0, details: Optional[Dict[str, Any]] = None):
        if details is None:
            details = {}
        details["offset"] = offset
        super().__init__(message, code="PARSE_ERROR", details=details)

    @property
    def offset(self) -> int:
        """Byte offset of the failure within the raw output."""
        return int(self.details["offset"])


class TransformError(AqragError):
    """An LLM transformation failed."""

    def __init__(
        self,
        message: str,
        raw_output: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        **kwargs: Any,
    ):
        if details is None:
            details = {}
        if raw_output is not None:
            details["raw_output"] = raw_output
        super().__init__(message, code="TRANSFORM_ERROR", details=details, **kwargs)


class IndexBuildError(AqragError):
    """Index construction or persistence failed."""

    def __init__(
        self,
        message: str,
        chunk_id: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        **kwargs: Any,
    ):
        details = dict(details or {})
        if chunk_id is not None:
            details["chunk_id"] = chunk_id
        super().__init__(message, code="INDEX_BUILD_ERROR", details=details, **kwargs)


class IndexLoadError(AqragError):
    """A persisted index could not be loaded."""

    def __init__(self, message: str, file: str, **kwargs: Any):
        super().__init__(
            f"{file}: {message}", code="INDEX_LOAD_ERROR", details={"file": file}, **kwargs
        )


class PipelineError(AqragError):
    """A pipeline stage failed."""

    def __init__(
        self,
        message: str,
        stage: str,
        subquestion_index: Optional[int] = None,
        **kwargs: Any,
    ):
        details: Dict[str, Any] = {"stage": stage}
        if subquestion_index is not None:
            details["subquestion_index"] = subquestion_index
        super().__init__(f"[{stage}] {message}", code="PIPELINE_ERROR", details=details, **kwargs)

    @property
    def stage(self) -> str:
        """Label of the failing stage."""
        return str(self.details["stage"])


class DatasetError(AqragError):
    """Malformed evaluation dataset."""

    def __init__(self, message: str, line: Optional[int] = None, **kwargs: Any):
        details = {"line": line} if line is not None else {}
        super().__init__(message, code="DATASET_ERROR", details=details, **kwargs)


class EvaluationError(AqragError):
    """A record failed during a strict evaluation run."""

    def __init__(self, message: str, record_id: str, **kwargs: Any):
        super().__init__(
            message, code="EVALUATION_ERROR", details={"record_id": record_id}, **kwargs
        )


def configure_logging(level: str = "INFO") -> logging.Logger:
    """
    Configure the package logger to write diagnostics to stderr.

    Args:
        level: Logging level name

    Returns:
        The configured package logger
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(getattr(logging, str(level).upper(), logging.INFO))

    if not any(getattr(h, "_aqrag", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._aqrag = True  # type: ignore[attr-defined]
        logger.addHandler(handler)

    return logger


class ErrorHandler:
    """
    Centralized error handler.

    Dispatches exceptions to registered handlers by type, falling back to
    logging them.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize error handler.

        Args:
            logger: Logger instance (package logger if None)
        """
        self.logger = logger or logging.getLogger(ROOT_LOGGER)
        self._error_handlers: Dict[Type[Exception], Callable[[Exception], None]] = {}
        self._fallback_handler = self._default_fallback

    def handle(self, error: Exception) -> None:
        """
        Handle an error.

        Args:
            error: The exception to handle
        """
        handler = self._error_handlers.get(type(error))

        if handler is None:
            for registered_type, registered_handler in self._error_handlers.items():
                if isinstance(error, registered_type):
                    handler = registered_handler
                    break

        if handler is None:
            handler = self._fallback_handler

        try:
            handler(error)
        except Exception as e:
            self.logger.error(f"Error in error handler: {e}")

    def register_handler(
        self, error_type: Type[Exception], handler: Callable[[Exception], None]
    ) -> None:
        """
        Register a handler for a specific error type.

        Args:
            error_type: The exception type to handle
            handler: The handler function
        """
        self._error_handlers[error_type] = handler

    def _default_fallback(self, error: Exception) -> None:
        if isinstance(error, AqragError):
            self.logger.error(f"{error.code}: {error.message}", extra={"details": error.details})
        else:
            self.logger.error(f"Unexpected error: {str(error)}", exc_info=error)


def retry_on_error(
    error_types: Tuple[Type[Exception], ...] = (TransientBackendError,),
    max_retries: int = 3,
    backoff_factor: float = 1.0,
    should_retry: Optional[Callable[[Exception], bool]] = None,
    sleep: Callable[[float], None] = time.sleep,
    logger: Optional[logging.Logger] = None,
) -> Callable:
    """
    Decorator to retry functions on specific errors.

    Performs at most ``max_retries + 1`` attempts, waiting
    ``backoff_factor * 2**attempt`` seconds between them.

    Args:
        error_types: Error types that may be retried
        max_retries: Maximum number of retry attempts
        backoff_factor: Exponential backoff factor
        should_retry: Optional predicate vetoing retries for a given error
        sleep: Sleep function (injectable for tests)
        logger: Logger for retry warnings

    Returns:
        Decorator function
    """
    log = logger or logging.getLogger(__name__)

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            for attempt in range(max_retries + 1):
                try:
                    return func(*args, **kwargs)
                except error_types as e:
                    retryable = should_retry(e) if should_retry is not None else True
                    if not retryable or attempt >= max_retries:
                        if retryable:
                            log.error(f"Max retries exceeded for {func.__name__}")
                        raise
                    wait_time = backoff_factor * (2**attempt)
                    log.warning(
                        f"Retry {attempt + 1}/{max_retries} for {func.__name__} "
                        f"after {wait_time}s due to: {str(e)}"
                    )
                    sleep(wait_time)
            raise RuntimeError("Unexpected error in retry logic")

        return wrapper

    return decorator


def wrap_errors(error_type: Type[AqragError], message: str = "An error occurred") -> Callable:
    """
    Convenience decorator for error wrapping.

    Args:
        error_type: The type of error to raise
        message: Error message to use

    Returns:
        Decorator function
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except AqragError:
                raise
            except Exception as e:
                raise error_type(
                    message=f"{message}: {e}",
                    original_error=e,
                    details={"function": func.__name__},
                ) from e

        return wrapper

    return decorator
