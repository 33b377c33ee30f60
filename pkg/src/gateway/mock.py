"""
Deterministic in-process backends for offline runs and tests.

- MockChatBackend answers only scripted prompts; anything else raises
  UnscriptedPromptError.
- HashEmbeddingBackend expands a seeded hash of the text into a vector.
- LexicalRerankBackend scores by query-token coverage.

Each keeps a call ledger guarded by a lock.
"""

from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union
from pathlib import Path
import hashlib
import json
import re
import threading

import numpy as np

from .base import ChatBackend, ChatRequest, EmbeddingBackend, RerankBackend
from ..utils.error_handler import ConfigurationError, UnscriptedPromptError

ChatHandler = Callable[[ChatRequest], Optional[str]]

TOKEN_PATTERN = re.compile(r"\w+")


def prompt_fingerprint(system_prompt: str, user_prompt: str) -> str:
    """Stable fingerprint of a (system, user) prompt pair."""
    digest = hashlib.sha256()
    digest.update(system_prompt.encode("utf-8"))
    digest.update(b"\x1f")
    digest.update(user_prompt.encode("utf-8"))
    return digest.hexdigest()


class MockChatBackend(ChatBackend):
    """
    Scripted chat backend.

    Lookup order: exact prompt fingerprint, then substring rules on the user
    prompt (optionally also on the system prompt), then handler callables.
    """

    def __init__(
        self,
        replies: Optional[Dict[str, str]] = None,
        rules: Optional[Sequence[Tuple[str, str]]] = None,
        handlers: Optional[Sequence[ChatHandler]] = None,
        model_name: str = "mock-chat",
    ):
        super().__init__(model_name)
        self._replies: Dict[str, str] = dict(replies or {})
        self._rules: List[Tuple[str, Optional[str], str]] = [
            (match, None, reply) for match, reply in (rules or [])
        ]
        self._handlers: List[ChatHandler] = list(handlers or [])
        self._lock = threading.Lock()
        self.calls: List[ChatRequest] = []

    def script(self, system_prompt: str, user_prompt: str, reply: str) -> None:
        """Script an exact prompt pair."""
        self._replies[prompt_fingerprint(system_prompt, user_prompt)] = reply

    def add_rule(self, match: str, reply: str, system_match: Optional[str] = None) -> None:
        """Reply whenever the user prompt contains ``match``."""
        self._rules.append((match, system_match, reply))

    def add_handler(self, handler: ChatHandler) -> None:
        """Register a callable consulted after scripts and rules."""
        self._handlers.append(handler)

    @property
    def call_count(self) -> int:
        """Number of chat calls received."""
        with self._lock:
            return len(self.calls)

    def calls_with_system(self, system_prompt: str) -> List[ChatRequest]:
        """Ledger entries whose system prompt equals ``system_prompt``."""
        with self._lock:
            return [c for c in self.calls if c.system_prompt == system_prompt]

    def reset(self) -> None:
        """Clear the call ledger."""
        with self._lock:
            self.calls = []

    def _complete(self, request: ChatRequest) -> str:
        with self._lock:
            self.calls.append(request)

        fingerprint = prompt_fingerprint(request.system_prompt, request.user_prompt)
        if fingerprint in self._replies:
            return self._replies[fingerprint]

        for match, system_match, reply in self._rules:
            if match in request.user_prompt and (
                system_match is None or system_match in request.system_prompt
            ):
                return reply

        for handler in self._handlers:
            reply = handler(request)
            if reply is not None:
                return reply

        raise UnscriptedPromptError(fingerprint)

    @classmethod
    def from_script_file(
        cls, path: Union[str, Path], handlers: Optional[Sequence[ChatHandler]] = None
    ) -> "MockChatBackend":
        """
        Load scripted replies from a JSON file.

        The file holds ``{"rules": [{"match", "reply", "system_match"?}],
        "replies": [{"system", "user", "reply"}]}``; both keys are optional.

        Args:
            path: Script file
            handlers: Extra handlers consulted after the script

        Returns:
            Configured MockChatBackend
        """
        try:
            data: Any = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Cannot read mock script {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"Mock script {path} must be a JSON object")

        backend = cls(handlers=handlers)
        try:
            for item in data.get("replies", []):
                backend.script(item["system"], item["user"], item["reply"])
            for item in data.get("rules", []):
                backend.add_rule(item["match"], item["reply"], item.get("system_match"))
        except (KeyError, TypeError) as e:
            raise ConfigurationError(f"Malformed mock script {path}: {e}") from e
        return backend


class HashEmbeddingBackend(EmbeddingBackend):
    """Deterministic embedder: seeded hash of the text expanded to ``dims`` reals."""

    def __init__(
        self,
        dims: int = 64,
        prefix_query: str = "query: ",
        prefix_passage: str = "passage: ",
        model_name: str = "mock-hash-embedder",
    ):
        super().__init__(model_name, prefix_query, prefix_passage)
        if dims < 1:
            raise ConfigurationError("dims must be positive")
        self.dims = dims
        self._lock = threading.Lock()
        self.embedded_texts: List[str] = []

    @property
    def call_count(self) -> int:
        """Number of texts embedded."""
        with self._lock:
            return len(self.embedded_texts)

    def raw_vector(self, text: str) -> np.ndarray:
        """Unnormalized pseudo-random vector for an already-prefixed text."""
        seed = int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "little")
        return np.random.default_rng(seed).standard_normal(self.dims)

    def _embed_raw(self, texts: List[str]) -> List[Sequence[float]]:
        with self._lock:
            self.embedded_texts.extend(texts)
        return [self.raw_vector(text) for text in texts]


def token_set(text: str) -> frozenset:
    """Lowercased word tokens."""
    return frozenset(TOKEN_PATTERN.findall(text.lower()))


def lexical_overlap(query: str, passage: str) -> float:
    """|q ∩ p| / |q| over token sets; 0.0 for a token-less query."""
    query_tokens = token_set(query)
    if not query_tokens:
        return 0.0
    return len(query_tokens & token_set(passage)) / len(query_tokens)


class LexicalRerankBackend(RerankBackend):
    """Token-overlap reranker."""

    def __init__(self, model_name: str = "mock-lexical-reranker"):
        super().__init__(model_name)
        self._lock = threading.Lock()
        self.pairs_scored = 0

    def _score(self, query: str, passages: List[str]) -> List[float]:
        with self._lock:
            self.pairs_scored += len(passages)
        return [lexical_overlap(query, passage) for passage in passages]
