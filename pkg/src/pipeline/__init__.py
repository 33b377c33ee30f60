"""
Online inference: retrieval, reranking, answer generation.
"""

from .retrieval import embed_subquestions, rerank, retrieve_candidates
from .generation import (
    answer_sequential,
    answer_unified,
    build_context,
    chunk_delimiter,
    context_chunk_ids,
)
from .engine import QueryPipeline, run_query

__all__ = [
    "embed_subquestions",
    "rerank",
    "retrieve_candidates",
    "answer_sequential",
    "answer_unified",
    "build_context",
    "chunk_delimiter",
    "context_chunk_ids",
    "QueryPipeline",
    "run_query",
]
