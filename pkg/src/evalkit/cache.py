"""
Per-corpus index cache shared across experiments.

Indexes are keyed by everything that determines their contents, so an
ablation that only changes query-time settings reuses them.
"""

from typing import Callable, Dict, Optional, Union
from pathlib import Path
import hashlib
import json
import logging
import threading

from ..core.base import IndexMode
from ..core.config import ChunkingConfig
from ..index.storage import load_index, save_index
from ..index.vector_index import VectorIndex
from ..utils.error_handler import IndexLoadError

logger = logging.getLogger(__name__)


def cache_key(
    corpus_text: str,
    mode: IndexMode,
    chunking: ChunkingConfig,
    prompt_hashes: Dict[str, str],
    embed_model: str,
    aq_model: Optional[str],
) -> str:
    """Content hash identifying an index build."""
    payload = {
        "corpus_sha256": hashlib.sha256(corpus_text.encode("utf-8")).hexdigest(),
        "mode": IndexMode(mode).value,
        "chunking": chunking.model_dump(mode="json"),
        "prompt_hashes": prompt_hashes,
        "embed_model": embed_model,
        "aq_model": aq_model,
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


class IndexCache:
    """
    Thread-safe index store, optionally mirrored on disk.

    Concurrent requests for the same key build once; the others wait.
    """

    def __init__(self, cache_dir: Optional[Union[str, Path]] = None):
        """
        Initialize cache.

        Args:
            cache_dir: Directory for on-disk copies (memory only if None)
        """
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._indexes: Dict[str, VectorIndex] = {}
        self._locks: Dict[str, threading.Lock] = {}
        self._guard = threading.Lock()
        self.builds = 0
        self.hits = 0

    def _lock_for(self, key: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def get_or_build(self, key: str, build: Callable[[], VectorIndex]) -> VectorIndex:
        """
        Return the cached index for ``key``, building it on a miss.

        Args:
            key: Cache key
            build: Zero-argument builder

        Returns:
            VectorIndex
        """
        with self._lock_for(key):
            index = self._indexes.get(key)
            if index is None and self.cache_dir is not None:
                index = self._load_from_disk(key)
            if index is not None:
                with self._guard:
                    self.hits += 1
                self._indexes[key] = index
                return index

            index = build()
            with self._guard:
                self.builds += 1
            self._indexes[key] = index
            if self.cache_dir is not None:
                save_index(index, self.cache_dir / key)
            return index

    def _load_from_disk(self, key: str) -> Optional[VectorIndex]:
        assert self.cache_dir is not None
        path = self.cache_dir / key
        if not path.is_dir():
            return None
        try:
            return load_index(path)
        except IndexLoadError as e:
            logger.warning(f"Ignoring unreadable cached index {path}: {e.message}")
            return None

    def __len__(self) -> int:
        return len(self._indexes)
