"""
Offline index construction.

Chunks the corpus, runs the document-side transforms the mode needs and
embeds every surrogate. AQs use the query prefix (they are questions,
matched against subquestions); documents, summaries and paraphrases use
the passage prefix.
"""

from typing import Dict, List, Optional, Sequence, Tuple
import logging
import time

from .storage import compute_content_hash
from .vector_index import IndexManifest, VectorIndex
from ..core.base import Chunk, Document, EmbedKind, EntryKind, IndexEntry, IndexMode, TransformKind
from ..core.config import ChunkingConfig
from ..corpus.chunker import chunk_corpus
from ..gateway.base import Backends
from ..transform.generators import surrogate_id, transform_for
from ..transform.prompts import template_hashes
from ..utils.concurrency import bounded_map
from ..utils.error_handler import AqragError, IndexBuildError, ValidationError

logger = logging.getLogger(__name__)

EMBED_KIND: Dict[EntryKind, EmbedKind] = {
    EntryKind.DOCUMENT: EmbedKind.PASSAGE,
    EntryKind.AQ: EmbedKind.QUERY,
    EntryKind.SUMMARY: EmbedKind.PASSAGE,
    EntryKind.PARAPHRASE: EmbedKind.PASSAGE,
}


def prompt_hashes_for(mode: IndexMode) -> Dict[str, str]:
    """Hashes of the transform templates an index mode depends on."""
    names = tuple(
        kind.value for kind in IndexMode(mode).entry_kinds() if kind is not EntryKind.DOCUMENT
    )
    return template_hashes(names)


class IndexBuilder:
    """Builds a VectorIndex for one mode and chunking configuration."""

    def __init__(self, mode: IndexMode, cfg: ChunkingConfig, backends: Backends):
        """
        Initialize builder.

        Args:
            mode: Which surrogates to embed
            cfg: Chunking configuration
            backends: Model backends (transform chat and embedder are used)
        """
        self.mode = IndexMode(mode)
        self.cfg = cfg
        self.backends = backends
        self._transforms = {
            kind: transform_for(
                TransformKind(kind.value),
                backends.transform_chat,
                temperature=backends.temperature,
                max_output_tokens=backends.max_output_tokens,
            )
            for kind in self.mode.entry_kinds()
            if kind is not EntryKind.DOCUMENT
        }

    def surrogates(self, chunk: Chunk) -> List[Tuple[str, EntryKind, str]]:
        """(entry_id, kind, text) for every surrogate of a chunk, in storage order."""
        items: List[Tuple[str, EntryKind, str]] = []
        for kind in self.mode.entry_kinds():
            if kind is EntryKind.DOCUMENT:
                texts = [chunk.text]
            else:
                texts = self._transforms[kind].generate(chunk)
            for ordinal, text in enumerate(texts, start=1):
                items.append((surrogate_id(chunk.chunk_id, kind.value, ordinal), kind, text))
        return items

    def entries_for(self, chunk: Chunk) -> List[IndexEntry]:
        """
        Transform and embed one chunk.

        Raises:
            IndexBuildError: Carrying the failing chunk_id
        """
        try:
            items = self.surrogates(chunk)
            vectors = {}
            for embed_kind in (EmbedKind.QUERY, EmbedKind.PASSAGE):
                group = [item for item in items if EMBED_KIND[item[1]] is embed_kind]
                if not group:
                    continue
                embedded = self.backends.embedder.embed_batch([text for _, _, text in group], embed_kind)
                for (entry_id, _, _), vector in zip(group, embedded):
                    vectors[entry_id] = vector
        except AqragError as e:
            raise IndexBuildError(
                f"Indexing chunk {chunk.chunk_id} failed: {e.message}",
                chunk_id=chunk.chunk_id,
                original_error=e,
            ) from e

        return [
            IndexEntry(entry_id=entry_id, chunk_id=chunk.chunk_id, kind=kind, text=text, vector=vectors[entry_id])
            for entry_id, kind, text in items
        ]

    def build(self, docs: Sequence[Document], built_at: Optional[str] = None) -> VectorIndex:
        """
        Build the index. Any chunk failure discards the whole build.

        Args:
            docs: Non-empty corpus
            built_at: Fixed build timestamp (defaults to now)

        Returns:
            Immutable VectorIndex
        """
        if not docs:
            raise ValidationError("build_index requires at least one document")

        started = time.perf_counter()
        chunks = sorted(chunk_corpus(docs, self.cfg), key=lambda c: c.chunk_id)
        per_chunk = bounded_map(self.entries_for, chunks, self.backends.parallelism)
        entries = [entry for chunk_entries in per_chunk for entry in chunk_entries]

        dims = {entry.vector.dims for entry in entries}
        if len(dims) > 1:
            raise IndexBuildError("Embedder returned inconsistent dimensions across chunks")

        hashes = prompt_hashes_for(self.mode)
        manifest_fields = dict(
            mode=self.mode,
            dims=dims.pop() if dims else 0,
            entry_count=len(entries),
            chunk_count=len(chunks),
            embed_model=self.backends.embedder.model_name,
            aq_model=self.backends.transform_chat.model_name if self._transforms else None,
            chunking=self.cfg,
            prompt_hashes=hashes,
            content_hash=compute_content_hash(entries, chunks, hashes),
        )
        if built_at is not None:
            manifest_fields["built_at"] = built_at
        index = VectorIndex(entries, chunks, IndexManifest(**manifest_fields))

        logger.info(
            f"Built {self.mode.value} index: {len(entries)} entries over {len(chunks)} chunks "
            f"in {time.perf_counter() - started:.2f}s"
        )
        return index


def build_index(
    docs: Sequence[Document],
    mode: IndexMode,
    cfg: ChunkingConfig,
    backends: Backends,
    built_at: Optional[str] = None,
) -> VectorIndex:
    """Build a VectorIndex over ``docs``."""
    return IndexBuilder(mode, cfg, backends).build(docs, built_at=built_at)
