"""
Corpus loading and chunking.
"""

from .loader import load_corpus, parse_corpus_record
from .chunker import chunk_document, chunk_corpus, chunk_id_for, expected_chunk_count

__all__ = [
    "load_corpus",
    "parse_corpus_record",
    "chunk_document",
    "chunk_corpus",
    "chunk_id_for",
    "expected_chunk_count",
]
