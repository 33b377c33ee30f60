"""Corpus, dataset and index builders shared by the tests."""

from typing import Any, Dict, List, Sequence, Tuple
from pathlib import Path
import json

import numpy as np

from src.core.base import Chunk, EmbeddingVector, EntryKind, IndexEntry, IndexMode
from src.core.config import ChunkingConfig
from src.index.storage import compute_content_hash
from src.index.vector_index import IndexManifest, VectorIndex

FIXED_BUILT_AT = "2026-01-01T00:00:00+00:00"

# A small corpus where exactly one chunk overlaps the question lexically.
PLANTED_QUESTION = "Which river flows through the capital of Zembla?"
PLANTED_ANSWER = "Ulva River"
PLANTED_CORPUS: List[Dict[str, str]] = [
    {
        "id": "bergen",
        "title": "Bergen",
        "text": "Bergen is a rainy city on the western coast of Norway with many mountains.",
    },
    {
        "id": "volga",
        "text": "The Volga is the longest river in Europe. It drains into the Caspian Sea.",
    },
    {
        "id": "zembla",
        "text": "Zembla is a northern kingdom ruled from Onhava. "
        "The Ulva river flows through the capital of Zembla.",
    },
]
PLANTED_GOLD_CHUNK = "zembla:00000000"

# Three evaluation records, each answerable from its own context.
EVAL_RECORDS: List[Dict[str, Any]] = [
    {
        "_id": "r1",
        "input": "Who founded the Orrery Guild?",
        "context": "The Orrery Guild was founded by Mira Castell in 1821. It built clocks.",
        "answers": ["Mira Castell"],
    },
    {
        "_id": "r2",
        "input": "In which year did the Keld bridge open?",
        "context": "The Keld bridge opened in 1904 after six years of work. It spans a gorge.",
        "answers": ["1904"],
    },
    {
        "_id": "r3",
        "input": "What colour is the Tessaly flag?",
        "context": "The Tessaly flag is green with a white star. It was adopted in 1950.",
        "answers": ["green"],
    },
]
# Unique phrase of each context mapped to its gold answer.
EVAL_ANSWER_RULES: List[Tuple[str, str]] = [
    ("Orrery Guild was founded", "Mira Castell"),
    ("Keld bridge opened", "1904"),
    ("Tessaly flag is green", "green"),
]


def write_jsonl(path: Path, records: Sequence[Dict[str, Any]]) -> Path:
    """Write line-records."""
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


def random_index(
    rng: np.random.Generator,
    n_entries: int,
    n_chunks: int = 5,
    dims: int = 64,
    duplicate_every: int = 0,
) -> VectorIndex:
    """
    A synthetic index with random unit vectors.

    With ``duplicate_every`` > 0 every such entry repeats the previous
    vector, producing exact score ties.
    """
    chunks = [
        Chunk(chunk_id=f"doc:{i * 600:08d}", doc_id="doc", start=i * 600, end=i * 600 + 10, text=f"chunk {i}")
        for i in range(n_chunks)
    ]
    entries: List[IndexEntry] = []
    previous = None
    for i in range(n_entries):
        if duplicate_every and previous is not None and i % duplicate_every == 0:
            vector = previous
        else:
            vector = EmbeddingVector.from_raw(rng.standard_normal(dims))
        previous = vector
        chunk = chunks[int(rng.integers(n_chunks))]
        entries.append(
            IndexEntry(
                entry_id=f"{chunk.chunk_id}#aq-{i:05d}",
                chunk_id=chunk.chunk_id,
                kind=EntryKind.AQ,
                text=f"question {i}?",
                vector=vector,
            )
        )
    manifest = IndexManifest(
        mode=IndexMode.AQ,
        dims=dims,
        entry_count=len(entries),
        chunk_count=len(chunks),
        embed_model="random",
        chunking=ChunkingConfig(),
        prompt_hashes={"aq": "0" * 64},
        built_at=FIXED_BUILT_AT,
        content_hash=compute_content_hash(entries, chunks, {"aq": "0" * 64}),
    )
    return VectorIndex(entries, chunks, manifest)


def oracle_search(index: VectorIndex, query: EmbeddingVector, k: int) -> List[Tuple[str, str]]:
    """Exhaustive cosine sort with the entry_id tie rule."""
    q = query.values.astype(np.float64)
    scored = [
        (float((entry.vector.values.astype(np.float64) * q).sum()), entry.entry_id, entry.chunk_id)
        for entry in index.entries
    ]
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [(entry_id, chunk_id) for _, entry_id, chunk_id in scored[:k]]
