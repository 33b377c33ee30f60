"""
Sliding-window document chunking.

Windows are exact code-point slices; no snapping to whitespace or sentence
edges. The trailing window is kept even when shorter than ``window``.
"""

from typing import Iterable, List
import math

from ..core.base import Chunk, Document
from ..core.config import ChunkingConfig


def chunk_id_for(doc_id: str, start: int) -> str:
    """Deterministic, sortable chunk identifier."""
    return f"{doc_id}:{start:08d}"


def expected_chunk_count(length: int, cfg: ChunkingConfig) -> int:
    """Number of windows covering a text of ``length`` characters."""
    if length <= cfg.window:
        return 1
    return 1 + math.ceil((length - cfg.window) / cfg.stride)


def chunk_document(doc: Document, cfg: ChunkingConfig) -> List[Chunk]:
    """
    Segment a document into overlapping character windows.

    Starts are 0, stride, 2*stride, ...; the final chunk ends at len(text).

    Args:
        doc: Source document
        cfg: Window and stride

    Returns:
        Chunks in offset order
    """
    text = doc.text
    length = len(text)
    chunks: List[Chunk] = []

    for i in range(expected_chunk_count(length, cfg)):
        start = i * cfg.stride
        end = min(start + cfg.window, length)
        chunks.append(
            Chunk(
                chunk_id=chunk_id_for(doc.doc_id, start),
                doc_id=doc.doc_id,
                start=start,
                end=end,
                text=text[start:end],
            )
        )

    return chunks


def chunk_corpus(docs: Iterable[Document], cfg: ChunkingConfig) -> List[Chunk]:
    """Chunk every document, preserving document order."""
    chunks: List[Chunk] = []
    for doc in docs:
        chunks.extend(chunk_document(doc, cfg))
    return chunks
