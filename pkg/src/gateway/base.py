"""
Base classes for model backends.

Chat completion, text embedding and pairwise reranking are defined as
abstract interfaces so HTTP and mock backends are interchangeable. The
public methods enforce preconditions and postconditions (prefixing,
normalization, dimension checks); subclasses implement the raw calls.
"""

from typing import List, Optional, Sequence
from abc import ABC, abstractmethod
from dataclasses import dataclass
import math

from ..core.base import EmbedKind, EmbeddingVector
from ..utils.error_handler import BackendError, ValidationError


@dataclass(frozen=True)
class ChatRequest:
    """A single-turn chat completion request."""

    system_prompt: str
    user_prompt: str
    temperature: float = 0.0
    max_output_tokens: int = 1024

    def __post_init__(self) -> None:
        if not self.system_prompt or not self.user_prompt:
            raise ValidationError("Chat prompts must be non-empty")
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0")
        if self.max_output_tokens < 1:
            raise ValidationError("max_output_tokens must be positive")


class ChatBackend(ABC):
    """Abstract chat completion backend."""

    def __init__(self, model_name: str):
        self.model_name = model_name

    def chat(self, request: ChatRequest) -> str:
        """
        Run a chat completion.

        Args:
            request: The request

        Returns:
            The model's text output, verbatim

        Raises:
            BackendError: On backend failure
        """
        return self._complete(request)

    @abstractmethod
    def _complete(self, request: ChatRequest) -> str:
        pass


class EmbeddingBackend(ABC):
    """Abstract embedding backend."""

    def __init__(
        self,
        model_name: str,
        prefix_query: str = "query: ",
        prefix_passage: str = "passage: ",
    ):
        self.model_name = model_name
        self.prefix_query = prefix_query
        self.prefix_passage = prefix_passage

    def prefix_for(self, kind: EmbedKind) -> str:
        """Configured prefix for an embedding kind."""
        return self.prefix_query if EmbedKind(kind) is EmbedKind.QUERY else self.prefix_passage

    def embed_batch(self, texts: Sequence[str], kind: EmbedKind) -> List[EmbeddingVector]:
        """
        Embed texts, prefixing them for ``kind`` and L2-normalizing results.

        Args:
            texts: Non-empty texts
            kind: query or passage

        Returns:
            One normalized vector per text, in input order

        Raises:
            ValidationError: On empty input
            BackendError: On count or dimension mismatch
        """
        if not texts:
            raise ValidationError("embed_batch requires at least one text")
        for i, text in enumerate(texts):
            if not text:
                raise ValidationError(f"Text {i} is empty", details={"position": i})

        prefix = self.prefix_for(kind)
        raw = self._embed_raw([prefix + text for text in texts])

        if len(raw) != len(texts):
            raise BackendError(
                f"Embedder returned {len(raw)} vectors for {len(texts)} texts"
            )
        try:
            vectors = [EmbeddingVector.from_raw(values) for values in raw]
        except ValidationError as e:
            raise BackendError(f"Invalid embedding: {e.message}", original_error=e) from e

        dims = {v.dims for v in vectors}
        if len(dims) != 1:
            raise BackendError(
                "Embedding dimension mismatch within batch",
                details={"dims": sorted(dims)},
            )
        return vectors

    @abstractmethod
    def _embed_raw(self, texts: List[str]) -> List[Sequence[float]]:
        pass


class RerankBackend(ABC):
    """Abstract pairwise relevance scorer (cross-encoder)."""

    def __init__(self, model_name: str):
        self.model_name = model_name

    def rerank_score(self, query: str, passage: str) -> float:
        """
        Score one (query, passage) pair; higher is more relevant.

        Raises:
            ValidationError: On empty strings
            BackendError: On backend failure or non-finite scores
        """
        return self.rerank_batch(query, [passage])[0]

    def rerank_batch(self, query: str, passages: Sequence[str]) -> List[float]:
        """
        Score many passages against one query.

        Args:
            query: Query text
            passages: Passage texts

        Returns:
            Scores in passage order
        """
        if not query:
            raise ValidationError("Rerank query must be non-empty")
        if not passages:
            return []
        if any(not p for p in passages):
            raise ValidationError("Rerank passages must be non-empty")

        scores = [float(s) for s in self._score(query, list(passages))]
        if len(scores) != len(passages):
            raise BackendError(
                f"Reranker returned {len(scores)} scores for {len(passages)} passages"
            )
        if not all(math.isfinite(s) for s in scores):
            raise BackendError("Reranker returned a non-finite score")
        return scores

    @abstractmethod
    def _score(self, query: str, passages: List[str]) -> List[float]:
        pass


@dataclass(frozen=True)
class Backends:
    """
    The model roles used by the engine.

    ``aq_generator`` serves offline transforms, ``decomposer`` splits
    questions, ``generator`` writes answers.
    """

    generator: ChatBackend
    embedder: EmbeddingBackend
    reranker: RerankBackend
    decomposer: Optional[ChatBackend] = None
    aq_generator: Optional[ChatBackend] = None
    parallelism: int = 1
    temperature: float = 0.0
    max_output_tokens: int = 1024

    @property
    def decomposition_chat(self) -> ChatBackend:
        """Chat backend for decomposition."""
        return self.decomposer or self.generator

    @property
    def transform_chat(self) -> ChatBackend:
        """Chat backend for document-side transforms."""
        return self.aq_generator or self.generator

    def request(self, system_prompt: str, user_prompt: str) -> ChatRequest:
        """Build a request with the configured sampling settings."""
        return ChatRequest(
            system_prompt=system_prompt,
            user_prompt=user_prompt,
            temperature=self.temperature,
            max_output_tokens=self.max_output_tokens,
        )
