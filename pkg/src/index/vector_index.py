"""
Exact cosine-similarity vector index.

Entries are embedded surrogate texts mapped back to their source chunks.
Search is a brute-force scan over a read-only float32 matrix.
"""

from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple
from datetime import datetime, timezone
from types import MappingProxyType

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.base import Chunk, EmbeddingVector, IndexEntry, IndexMode, SearchHit
from ..core.config import ChunkingConfig
from ..utils.error_handler import ValidationError

FORMAT_VERSION = "1"


class IndexManifest(BaseModel):
    """Build metadata recorded with every index."""

    model_config = ConfigDict(frozen=True)

    format_version: str = FORMAT_VERSION
    mode: IndexMode
    dims: int = Field(ge=0)
    entry_count: int = Field(ge=0)
    chunk_count: int = Field(ge=0)
    embed_model: str
    aq_model: Optional[str] = None
    chunking: ChunkingConfig
    prompt_hashes: Dict[str, str] = Field(default_factory=dict)
    built_at: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )
    content_hash: str = ""
    files: Dict[str, str] = Field(default_factory=dict)


class VectorIndex:
    """
    Immutable AQ index.

    Holds the entries in build order, their normalized vectors stacked into
    one matrix, and the chunk store every entry resolves into.
    """

    def __init__(
        self,
        entries: Sequence[IndexEntry],
        chunks: Sequence[Chunk],
        manifest: IndexManifest,
    ):
        """
        Initialize index.

        Args:
            entries: Index entries
            chunks: All chunks of the corpus, including zero-entry ones
            manifest: Build metadata

        Raises:
            ValidationError: On dimension mismatch or dangling chunk references
        """
        self._entries: Tuple[IndexEntry, ...] = tuple(entries)
        self._chunks: Dict[str, Chunk] = {chunk.chunk_id: chunk for chunk in chunks}
        self.manifest = manifest

        dims = {entry.vector.dims for entry in self._entries}
        if len(dims) > 1:
            raise ValidationError("Index entries have mixed dimensions", details={"dims": sorted(dims)})
        self._dims = dims.pop() if dims else manifest.dims

        for entry in self._entries:
            if entry.chunk_id not in self._chunks:
                raise ValidationError(
                    f"Entry {entry.entry_id} references unknown chunk {entry.chunk_id}"
                )

        if self._entries:
            matrix = np.vstack([entry.vector.values for entry in self._entries]).astype("<f4")
        else:
            matrix = np.zeros((0, self._dims), dtype="<f4")
        matrix.setflags(write=False)
        self._matrix = matrix

        ids = np.array([entry.entry_id for entry in self._entries], dtype=object)
        self._id_rank = np.empty(len(ids), dtype=np.int64)
        self._id_rank[np.argsort(ids, kind="stable")] = np.arange(len(ids))

    @property
    def dims(self) -> int:
        """Embedding dimension."""
        return self._dims

    @property
    def mode(self) -> IndexMode:
        """Which surrogates the index embeds."""
        return self.manifest.mode

    @property
    def entries(self) -> Tuple[IndexEntry, ...]:
        """Entries in storage order."""
        return self._entries

    @property
    def chunks(self) -> Mapping[str, Chunk]:
        """Read-only chunk store keyed by chunk_id."""
        return MappingProxyType(self._chunks)

    @property
    def matrix(self) -> np.ndarray:
        """Read-only (entries x dims) float32 matrix."""
        return self._matrix

    def __len__(self) -> int:
        return len(self._entries)

    def chunk(self, chunk_id: str) -> Chunk:
        """Look up a chunk by id."""
        try:
            return self._chunks[chunk_id]
        except KeyError:
            raise ValidationError(f"Unknown chunk '{chunk_id}'") from None

    def entries_per_chunk(self) -> Dict[str, int]:
        """Entry count for every stored chunk (zero-entry chunks included)."""
        counts = {chunk_id: 0 for chunk_id in self._chunks}
        for entry in self._entries:
            counts[entry.chunk_id] += 1
        return counts

    def scores(self, query_vec: EmbeddingVector) -> np.ndarray:
        """Cosine score of every entry against a normalized query, in float64."""
        if query_vec.dims != self._dims:
            raise ValidationError(
                f"Query has {query_vec.dims} dims, index has {self._dims}",
                details={"query_dims": query_vec.dims, "index_dims": self._dims},
            )
        # row-wise reduction: identical rows always score identically
        return (self._matrix.astype(np.float64) * query_vec.values.astype(np.float64)).sum(axis=1)

    def search(self, query_vec: EmbeddingVector, k: int) -> List[SearchHit]:
        """
        Top-k entries by cosine similarity.

        Ties are broken by entry_id ascending.

        Args:
            query_vec: Normalized query embedding
            k: Result count (>= 1)

        Returns:
            min(k, len(index)) hits, score descending

        Raises:
            ValidationError: If k < 1 or dimensions differ
        """
        if k < 1:
            raise ValidationError(f"k must be >= 1, got {k}")
        if not self._entries:
            return []
        scores = self.scores(query_vec)

        order = np.lexsort((self._id_rank, -scores))[:k]
        return [
            SearchHit(
                entry_id=self._entries[i].entry_id,
                chunk_id=self._entries[i].chunk_id,
                score=float(scores[i]),
            )
            for i in order
        ]

    def describe(self) -> Dict[str, Any]:
        """Short summary for logs and CLI output."""
        return {
            "mode": self.mode.value,
            "dims": self.dims,
            "entries": len(self._entries),
            "chunks": len(self._chunks),
            "embed_model": self.manifest.embed_model,
        }
