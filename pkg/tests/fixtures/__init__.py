"""Test Fixtures Package"""

from .backend_fixtures import (
    ANSWER_SYSTEM_MATCH,
    StaticEmbeddingBackend,
    hash_embedder,
    http_response,
    mock_backends,
    mock_session,
    offline_chat,
    script_answer,
    script_decomposition,
    static_backends,
)
from .data_fixtures import (
    EVAL_ANSWER_RULES,
    EVAL_RECORDS,
    FIXED_BUILT_AT,
    PLANTED_ANSWER,
    PLANTED_CORPUS,
    PLANTED_GOLD_CHUNK,
    PLANTED_QUESTION,
    oracle_search,
    random_index,
    write_jsonl,
)

__all__ = [
    "ANSWER_SYSTEM_MATCH",
    "StaticEmbeddingBackend",
    "hash_embedder",
    "http_response",
    "mock_backends",
    "mock_session",
    "offline_chat",
    "script_answer",
    "script_decomposition",
    "static_backends",
    "EVAL_ANSWER_RULES",
    "EVAL_RECORDS",
    "FIXED_BUILT_AT",
    "PLANTED_ANSWER",
    "PLANTED_CORPUS",
    "PLANTED_GOLD_CHUNK",
    "PLANTED_QUESTION",
    "oracle_search",
    "random_index",
    "write_jsonl",
]
