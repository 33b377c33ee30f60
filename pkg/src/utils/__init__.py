"""
Utility modules for the AQ-guided RAG engine.

This package provides error handling, retries, logging setup, request
throttling and bounded concurrency.
"""

from .error_handler import (
    AqragError,
    ConfigurationError,
    ValidationError,
    CorpusError,
    BackendError,
    TransientBackendError,
    UnscriptedPromptError,
    ParseError,
    TransformError,
    IndexBuildError,
    IndexLoadError,
    PipelineError,
    DatasetError,
    EvaluationError,
    ErrorHandler,
    configure_logging,
    retry_on_error,
    wrap_errors,
)
from .rate_limiter import RateLimiter, build_rate_limiter
from .concurrency import bounded_map

__all__ = [
    # Error handling
    "AqragError",
    "ConfigurationError",
    "ValidationError",
    "CorpusError",
    "BackendError",
    "TransientBackendError",
    "UnscriptedPromptError",
    "ParseError",
    "TransformError",
    "IndexBuildError",
    "IndexLoadError",
    "PipelineError",
    "DatasetError",
    "EvaluationError",
    "ErrorHandler",
    "configure_logging",
    "retry_on_error",
    "wrap_errors",
    # Throttling and concurrency
    "RateLimiter",
    "build_rate_limiter",
    "bounded_map",
]
