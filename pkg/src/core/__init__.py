"""
Core package for the AQ-guided RAG engine.

This package provides configuration, the shared domain data models and
count statistics.
"""

from .config import (
    Config,
    get_config,
    EngineSettings,
    BackendConfig,
    ChunkingConfig,
    PipelineConfig,
    BackendKind,
    RerankMode,
    InferenceMode,
    ContextOrder,
    LogLevel,
    live_tests_enabled,
)
from .base import (
    Document,
    Chunk,
    AnswerableQuestion,
    SubQuestion,
    EmbeddingVector,
    IndexEntry,
    SearchHit,
    Candidate,
    CandidateSource,
    RankedChunk,
    Trace,
    Answer,
    EvalRecord,
    TransformKind,
    EntryKind,
    IndexMode,
    EmbedKind,
)
from .stats import CountStats, format_stats_table

__all__ = [
    # Configuration
    "Config",
    "get_config",
    "EngineSettings",
    "BackendConfig",
    "ChunkingConfig",
    "PipelineConfig",
    "BackendKind",
    "RerankMode",
    "InferenceMode",
    "ContextOrder",
    "LogLevel",
    "live_tests_enabled",
    # Data models
    "Document",
    "Chunk",
    "AnswerableQuestion",
    "SubQuestion",
    "EmbeddingVector",
    "IndexEntry",
    "SearchHit",
    "Candidate",
    "CandidateSource",
    "RankedChunk",
    "Trace",
    "Answer",
    "EvalRecord",
    "TransformKind",
    "EntryKind",
    "IndexMode",
    "EmbedKind",
    # Statistics
    "CountStats",
    "format_stats_table",
]
