"""
Two-stage retrieval: AQ-similarity search per subquestion, then
cross-encoder reranking of the pooled chunks.
"""

from typing import Dict, List, Mapping, Sequence
import logging

from ..core.base import (
    Candidate,
    CandidateSource,
    Chunk,
    EmbedKind,
    EmbeddingVector,
    RankedChunk,
    SubQuestion,
)
from ..gateway.base import EmbeddingBackend, RerankBackend
from ..index.vector_index import VectorIndex
from ..utils.concurrency import bounded_map
from ..utils.error_handler import AqragError, PipelineError, ValidationError

logger = logging.getLogger(__name__)


def embed_subquestions(
    subqs: Sequence[SubQuestion], embed_backend: EmbeddingBackend, parallelism: int = 1
) -> List[EmbeddingVector]:
    """
    Query-prefixed embedding of every subquestion.

    Raises:
        PipelineError: Naming the subquestion whose embedding failed
    """

    def embed_one(subq: SubQuestion) -> EmbeddingVector:
        try:
            return embed_backend.embed_batch([subq.text], EmbedKind.QUERY)[0]
        except AqragError as e:
            raise PipelineError(
                f"Embedding subquestion {subq.index} failed: {e.message}",
                stage="retrieve",
                subquestion_index=subq.index,
                original_error=e,
            ) from e

    return bounded_map(embed_one, subqs, parallelism)


def retrieve_candidates(
    subqs: Sequence[SubQuestion],
    index: VectorIndex,
    embed_backend: EmbeddingBackend,
    k1: int,
    parallelism: int = 1,
) -> List[Candidate]:
    """
    Pool top-k1 hits of every subquestion into deduplicated chunk candidates.

    Each candidate keeps every (entry, subquestion) pair that retrieved it;
    its best_score is the maximum over those pairs.

    Args:
        subqs: Subquestions (non-empty)
        index: AQ index
        embed_backend: Embedder for the subquestions
        k1: Per-subquestion retrieval depth
        parallelism: Concurrent embedding calls

    Returns:
        Candidates sorted by best_score descending, then chunk_id ascending
    """
    if not subqs:
        raise ValidationError("retrieve_candidates requires at least one subquestion")
    if k1 < 1:
        raise ValidationError(f"k1 must be >= 1, got {k1}")

    vectors = embed_subquestions(subqs, embed_backend, parallelism)

    pooled: Dict[str, List[CandidateSource]] = {}
    for subq, vector in zip(subqs, vectors):
        for hit in index.search(vector, k1):
            pooled.setdefault(hit.chunk_id, []).append(
                CandidateSource(entry_id=hit.entry_id, subquestion_index=subq.index, score=hit.score)
            )

    candidates = [
        Candidate(
            chunk_id=chunk_id,
            best_score=max(source.score for source in sources),
            sources=tuple(sources),
        )
        for chunk_id, sources in pooled.items()
    ]
    candidates.sort(key=lambda c: (-c.best_score, c.chunk_id))
    logger.debug(
        f"{len(subqs)} subquestions retrieved "
        f"{sum(len(c.sources) for c in candidates)} pairs over {len(candidates)} chunks"
    )
    return candidates


def rerank(
    question: str,
    candidates: Sequence[Candidate],
    chunks: Mapping[str, Chunk],
    rerank_backend: RerankBackend,
    k2: int,
) -> List[RankedChunk]:
    """
    Score every candidate chunk against ``question`` and keep the best k2.

    Args:
        question: Query the chunks are scored against
        candidates: Non-empty candidate set
        chunks: Chunk store
        rerank_backend: Cross-encoder
        k2: Output size

    Returns:
        min(k2, len(candidates)) chunks, score descending, chunk_id ascending on ties
    """
    if not candidates:
        raise ValidationError("rerank requires at least one candidate")
    if k2 < 1:
        raise ValidationError(f"k2 must be >= 1, got {k2}")

    chunk_ids = [candidate.chunk_id for candidate in candidates]
    scores = rerank_backend.rerank_batch(question, [chunks[chunk_id].text for chunk_id in chunk_ids])

    ordered = sorted(zip(chunk_ids, scores), key=lambda pair: (-pair[1], pair[0]))[:k2]
    return [
        RankedChunk(chunk_id=chunk_id, rerank_score=score, rank=rank)
        for rank, (chunk_id, score) in enumerate(ordered, start=1)
    ]
