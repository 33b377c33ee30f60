"""
Model gateway: chat, embedding and rerank backends.
"""

from .base import Backends, ChatBackend, ChatRequest, EmbeddingBackend, RerankBackend
from .mock import (
    HashEmbeddingBackend,
    LexicalRerankBackend,
    MockChatBackend,
    lexical_overlap,
    prompt_fingerprint,
)
from .http import (
    ChatRerankBackend,
    HttpChatBackend,
    HttpEmbeddingBackend,
    HttpRerankBackend,
    HttpTransport,
)
from .factory import build_backends

__all__ = [
    "Backends",
    "ChatBackend",
    "ChatRequest",
    "EmbeddingBackend",
    "RerankBackend",
    "HashEmbeddingBackend",
    "LexicalRerankBackend",
    "MockChatBackend",
    "lexical_overlap",
    "prompt_fingerprint",
    "ChatRerankBackend",
    "HttpChatBackend",
    "HttpEmbeddingBackend",
    "HttpRerankBackend",
    "HttpTransport",
    "build_backends",
]
