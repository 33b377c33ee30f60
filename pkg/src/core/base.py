"""
Domain data models for the AQ-guided RAG engine.

This module defines the data classes that flow between the corpus,
transform, index, pipeline and evaluation layers. Every model offers
``to_dict`` / ``from_dict`` for line-record serialization.
"""

from typing import Any, Dict, List, Optional, Tuple
from enum import Enum
from dataclasses import dataclass, field

import numpy as np

from ..utils.error_handler import ValidationError


class TransformKind(str, Enum):
    """LLM-generated surrogate kinds."""

    AQ = "aq"
    SUMMARY = "summary"
    PARAPHRASE = "paraphrase"


class EntryKind(str, Enum):
    """Kinds of surrogate text stored in an index."""

    DOCUMENT = "document"
    AQ = "aq"
    SUMMARY = "summary"
    PARAPHRASE = "paraphrase"


class IndexMode(str, Enum):
    """Which surrogates are embedded for each chunk."""

    DOCUMENT = "document"
    AQ = "aq"
    BOTH = "both"
    SUMMARY = "summary"
    PARAPHRASE = "paraphrase"

    def entry_kinds(self) -> Tuple[EntryKind, ...]:
        """Entry kinds produced by this mode, in per-chunk storage order."""
        if self is IndexMode.BOTH:
            return (EntryKind.DOCUMENT, EntryKind.AQ)
        return (EntryKind(self.value),)


class EmbedKind(str, Enum):
    """Embedding prefix selector."""

    QUERY = "query"
    PASSAGE = "passage"


@dataclass(frozen=True)
class Document:
    """A source document."""

    doc_id: str
    text: str
    title: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise ValidationError("Document id must be non-empty")
        if not self.text:
            raise ValidationError(
                f"Document '{self.doc_id}' has empty text", details={"doc_id": self.doc_id}
            )

    def to_dict(self) -> Dict[str, Any]:
        """Convert document to a corpus line-record."""
        record: Dict[str, Any] = {"id": self.doc_id, "text": self.text}
        if self.title is not None:
            record["title"] = self.title
        return record


@dataclass(frozen=True)
class Chunk:
    """A character-window slice of a document."""

    chunk_id: str
    doc_id: str
    start: int
    end: int
    text: str

    def to_dict(self) -> Dict[str, Any]:
        """Convert chunk to dictionary."""
        return {
            "chunk_id": self.chunk_id,
            "doc_id": self.doc_id,
            "start": self.start,
            "end": self.end,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Chunk":
        """Create chunk from dictionary."""
        return cls(**data)


@dataclass(frozen=True)
class AnswerableQuestion:
    """A question generated from, and answerable by, a single chunk."""

    aq_id: str
    chunk_id: str
    text: str
    ordinal: int


@dataclass(frozen=True)
class SubQuestion:
    """One single-hop step of a decomposed question."""

    index: int
    text: str
    is_fallback: bool = False

    def to_dict(self) -> Dict[str, Any]:
        """Convert subquestion to dictionary."""
        return {"index": self.index, "text": self.text, "is_fallback": self.is_fallback}


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """An L2-normalized embedding."""

    values: np.ndarray

    @property
    def dims(self) -> int:
        """Embedding dimension."""
        return int(self.values.shape[0])

    @classmethod
    def from_raw(cls, raw: Any) -> "EmbeddingVector":
        """
        Normalize raw values into an embedding.

        Args:
            raw: Sequence of reals

        Returns:
            Unit-length float32 EmbeddingVector

        Raises:
            ValidationError: If the vector is empty, non-finite or zero
        """
        values = np.asarray(raw, dtype=np.float64).reshape(-1)
        if values.size == 0:
            raise ValidationError("Embedding has no dimensions")
        if not np.all(np.isfinite(values)):
            raise ValidationError("Embedding contains non-finite values")
        norm = float(np.linalg.norm(values))
        if norm == 0.0:
            raise ValidationError("Cannot normalize a zero embedding")
        normalized = (values / norm).astype("<f4")
        normalized.setflags(write=False)
        return cls(values=normalized)

    def cosine(self, other: "EmbeddingVector") -> float:
        """Cosine similarity with another normalized vector."""
        return float(np.dot(self.values.astype(np.float64), other.values.astype(np.float64)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingVector):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash(self.values.tobytes())


@dataclass(frozen=True)
class IndexEntry:
    """One embedded surrogate text mapped to its source chunk."""

    entry_id: str
    chunk_id: str
    kind: EntryKind
    text: str
    vector: EmbeddingVector

    def to_dict(self) -> Dict[str, Any]:
        """Convert entry metadata (without the vector) to dictionary."""
        return {
            "entry_id": self.entry_id,
            "chunk_id": self.chunk_id,
            "kind": self.kind.value,
            "text": self.text,
        }


@dataclass(frozen=True)
class SearchHit:
    """One search result."""

    entry_id: str
    chunk_id: str
    score: float


@dataclass(frozen=True)
class CandidateSource:
    """An (entry, subquestion) pair that retrieved a candidate chunk."""

    entry_id: str
    subquestion_index: int
    score: float


@dataclass(frozen=True)
class Candidate:
    """A deduplicated chunk collected from stage-one retrieval."""

    chunk_id: str
    best_score: float
    sources: Tuple[CandidateSource, ...]

    def __post_init__(self) -> None:
        if not self.sources:
            raise ValidationError(f"Candidate '{self.chunk_id}' has no sources")


@dataclass(frozen=True)
class RankedChunk:
    """A candidate chunk after cross-encoder reranking."""

    chunk_id: str
    rerank_score: float
    rank: int


@dataclass
class Trace:
    """Per-query stage timings, counts and intermediate results."""

    question: str
    timings: Dict[str, float] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    subquestions: List[SubQuestion] = field(default_factory=list)
    candidate_ids: List[str] = field(default_factory=list)
    ranked_ids: List[str] = field(default_factory=list)
    intermediate: List[Dict[str, str]] = field(default_factory=list)
    answer: Optional[str] = None
    settings: Dict[str, Any] = field(default_factory=dict)

    def bump(self, counter: str, amount: int = 1) -> None:
        """Increment a named counter."""
        self.counts[counter] = self.counts.get(counter, 0) + amount

    def to_dict(self) -> Dict[str, Any]:
        """Convert trace to a structured line-record."""
        return {
            "question": self.question,
            "timings": dict(self.timings),
            "counts": dict(self.counts),
            "subquestions": [s.to_dict() for s in self.subquestions],
            "candidate_ids": list(self.candidate_ids),
            "ranked_ids": list(self.ranked_ids),
            "intermediate": list(self.intermediate),
            "answer": self.answer,
            "settings": dict(self.settings),
        }


@dataclass
class Answer:
    """Pipeline output."""

    text: str
    used_chunks: List[str]
    subquestions: List[SubQuestion]
    trace: Trace

    def to_dict(self) -> Dict[str, Any]:
        """Convert answer to dictionary."""
        return {
            "text": self.text,
            "used_chunks": list(self.used_chunks),
            "subquestions": [s.to_dict() for s in self.subquestions],
            "trace": self.trace.to_dict(),
        }


@dataclass
class EvalRecord:
    """One benchmark example and, once evaluated, its prediction."""

    record_id: str
    question: str
    context: str
    gold_answers: List[str]
    prediction: Optional[str] = None
    f1: Optional[float] = None
    error: Optional[str] = None
    subquestions: List[str] = field(default_factory=list)
    ranked_ids: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.gold_answers:
            raise ValidationError(
                f"Record '{self.record_id}' has no gold answers",
                details={"record_id": self.record_id},
            )
        if (self.prediction is None) != (self.f1 is None):
            raise ValidationError("f1 must be present exactly when prediction is")

    def to_dict(self) -> Dict[str, Any]:
        """Convert the scored record to a report line-record."""
        return {
            "record_id": self.record_id,
            "question": self.question,
            "gold_answers": list(self.gold_answers),
            "prediction": self.prediction,
            "f1": self.f1,
            "error": self.error,
            "subquestions": list(self.subquestions),
            "ranked_ids": list(self.ranked_ids),
        }
