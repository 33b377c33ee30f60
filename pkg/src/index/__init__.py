"""
Vector index: construction, exact search, persistence and statistics.
"""

from .vector_index import FORMAT_VERSION, IndexManifest, VectorIndex
from .storage import compute_content_hash, load_index, save_index
from .builder import IndexBuilder, build_index, prompt_hashes_for
from .stats import IndexStats, index_stats

__all__ = [
    "FORMAT_VERSION",
    "IndexManifest",
    "VectorIndex",
    "compute_content_hash",
    "load_index",
    "save_index",
    "IndexBuilder",
    "build_index",
    "prompt_hashes_for",
    "IndexStats",
    "index_stats",
]
