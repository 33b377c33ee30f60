"""Per-chunk entry statistics of an index."""

from typing import Any, Dict, List, Tuple
from collections import Counter
from dataclasses import dataclass, field

from .vector_index import VectorIndex
from ..core.base import EntryKind
from ..core.stats import CountStats


@dataclass(frozen=True)
class IndexStats:
    """Entries per chunk, overall and per entry kind."""

    entries_per_chunk: CountStats
    zero_entry_chunks: int
    duplicate_texts: int
    per_kind: Dict[str, CountStats] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert statistics to dictionary."""
        return {
            "entries_per_chunk": self.entries_per_chunk.to_dict(),
            "zero_entry_chunks": self.zero_entry_chunks,
            "duplicate_texts": self.duplicate_texts,
            "per_kind": {kind: stats.to_dict() for kind, stats in self.per_kind.items()},
        }

    def table_rows(self, label: str) -> List[Tuple[str, CountStats]]:
        """Rows for ``format_stats_table``."""
        rows = [(label, self.entries_per_chunk)]
        if len(self.per_kind) > 1:
            rows.extend((f"{label} [{kind}]", stats) for kind, stats in self.per_kind.items())
        return rows


def index_stats(index: VectorIndex) -> IndexStats:
    """
    Statistics over every stored chunk, zero-entry chunks included.

    Duplicate texts counts surrogates repeating an earlier surrogate of the
    same kind within the same chunk.
    """
    counts = index.entries_per_chunk()

    kinds = list(index.mode.entry_kinds())
    per_kind_counts: Dict[EntryKind, Dict[str, int]] = {
        kind: {chunk_id: 0 for chunk_id in counts} for kind in kinds
    }
    seen: Counter = Counter()
    for entry in index.entries:
        per_kind_counts.setdefault(entry.kind, {chunk_id: 0 for chunk_id in counts})
        per_kind_counts[entry.kind][entry.chunk_id] += 1
        seen[(entry.chunk_id, entry.kind, entry.text)] += 1

    return IndexStats(
        entries_per_chunk=CountStats.from_counts(counts.values()),
        zero_entry_chunks=sum(1 for c in counts.values() if c == 0),
        duplicate_texts=sum(n - 1 for n in seen.values()),
        per_kind={
            kind.value: CountStats.from_counts(chunk_counts.values())
            for kind, chunk_counts in per_kind_counts.items()
        },
    )
