"""
AQ-guided RAG engine.

Multihop question answering that indexes documents through generated
answerable questions and retrieves evidence through decomposed
single-hop subquestions, with offline mock backends for every model.
"""

__version__ = "0.1.0"

from .core import *
from .utils import *

__all__ = [
    # Core
    "Config",
    "get_config",
    "EngineSettings",
    "BackendConfig",
    "ChunkingConfig",
    "PipelineConfig",
    "Document",
    "Chunk",
    "SubQuestion",
    "EmbeddingVector",
    "IndexMode",
    "Answer",
    "EvalRecord",
    "CountStats",
    # Utils
    "AqragError",
    "ConfigurationError",
    "ValidationError",
    "BackendError",
    "TransformError",
    "IndexLoadError",
    "PipelineError",
    "ErrorHandler",
    "configure_logging",
]
