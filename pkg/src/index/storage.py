"""
Index persistence.

Directory layout (paths relative to the index root):

    manifest.json   build metadata, per-file sha256, content hash
    entries.jsonl   one record per entry: entry_id, chunk_id, kind, text
    vectors.f32     little-endian float32, row-major, entries x dims
    chunks.jsonl    one record per chunk
"""

from typing import Any, Dict, Iterable, List, Union
from pathlib import Path
import hashlib
import json
import logging

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from .vector_index import FORMAT_VERSION, IndexManifest, VectorIndex
from ..core.base import Chunk, EmbeddingVector, EntryKind, IndexEntry
from ..utils.error_handler import IndexBuildError, IndexLoadError, ValidationError, wrap_errors

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
ENTRIES_FILE = "entries.jsonl"
VECTORS_FILE = "vectors.f32"
CHUNKS_FILE = "chunks.jsonl"


def _jsonl(records: Iterable[Dict[str, Any]]) -> bytes:
    lines = [json.dumps(record, ensure_ascii=False, sort_keys=True) for record in records]
    return "".join(line + "\n" for line in lines).encode("utf-8")


def entries_bytes(entries: Iterable[IndexEntry]) -> bytes:
    """Serialized entry metadata."""
    return _jsonl(entry.to_dict() for entry in entries)


def chunks_bytes(chunks: Iterable[Chunk]) -> bytes:
    """Serialized chunk store."""
    return _jsonl(chunk.to_dict() for chunk in chunks)


def vectors_bytes(entries: Iterable[IndexEntry]) -> bytes:
    """Row-major little-endian float32 vectors."""
    return b"".join(entry.vector.values.astype("<f4").tobytes() for entry in entries)


def compute_content_hash(
    entries: List[IndexEntry], chunks: List[Chunk], prompt_hashes: Dict[str, str]
) -> str:
    """
    Hash covering entries, vectors, chunks and prompt-template hashes.

    Returns:
        Hex sha256 digest
    """
    digest = hashlib.sha256()
    for part in (
        entries_bytes(entries),
        vectors_bytes(entries),
        chunks_bytes(chunks),
        json.dumps(prompt_hashes, sort_keys=True).encode("utf-8"),
    ):
        digest.update(hashlib.sha256(part).digest())
    return digest.hexdigest()


@wrap_errors(IndexBuildError, "Cannot save index")
def save_index(index: VectorIndex, directory: Union[str, Path]) -> Path:
    """
    Persist an index.

    Args:
        index: Index to save
        directory: Target directory (created if missing)

    Returns:
        The index directory

    Raises:
        IndexBuildError: If the directory cannot be written
    """
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)

    chunks = list(index.chunks.values())
    payloads = {
        ENTRIES_FILE: entries_bytes(index.entries),
        VECTORS_FILE: vectors_bytes(index.entries),
        CHUNKS_FILE: chunks_bytes(chunks),
    }
    for name, data in payloads.items():
        (root / name).write_bytes(data)

    manifest = index.manifest.model_copy(
        update={
            "files": {name: hashlib.sha256(data).hexdigest() for name, data in payloads.items()},
        }
    )
    (root / MANIFEST_FILE).write_text(
        json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    logger.info(f"Saved index ({len(index)} entries, {len(chunks)} chunks) to {root}")
    return root


def _read_manifest(root: Path) -> IndexManifest:
    path = root / MANIFEST_FILE
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise IndexLoadError(f"cannot read manifest ({e})", file=MANIFEST_FILE) from e
    except json.JSONDecodeError as e:
        raise IndexLoadError(f"manifest is not valid JSON ({e})", file=MANIFEST_FILE) from e

    if not isinstance(raw, dict):
        raise IndexLoadError("manifest must be an object", file=MANIFEST_FILE)
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise IndexLoadError(
            f"unsupported format version {version!r} (expected {FORMAT_VERSION!r})",
            file=MANIFEST_FILE,
        )
    try:
        return IndexManifest.model_validate(raw)
    except PydanticValidationError as e:
        raise IndexLoadError(f"invalid manifest ({e.error_count()} errors)", file=MANIFEST_FILE) from e


def _read_checked(root: Path, name: str, manifest: IndexManifest, expected_size: int = -1) -> bytes:
    try:
        data = (root / name).read_bytes()
    except OSError as e:
        raise IndexLoadError(f"cannot read file ({e})", file=name) from e

    if expected_size >= 0 and len(data) != expected_size:
        problem = "truncated" if len(data) < expected_size else "oversized"
        raise IndexLoadError(
            f"{problem} vector file: {len(data)} bytes, expected {expected_size}", file=name
        )

    expected_hash = manifest.files.get(name)
    if expected_hash is None:
        raise IndexLoadError("no checksum recorded in manifest", file=name)
    if hashlib.sha256(data).hexdigest() != expected_hash:
        raise IndexLoadError("checksum mismatch", file=name)
    return data


def _parse_jsonl(data: bytes, name: str) -> List[Dict[str, Any]]:
    records = []
    for line_no, line in enumerate(data.decode("utf-8").split("\n"), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise IndexLoadError(f"line {line_no}: invalid JSON ({e})", file=name) from e
    return records


def load_index(directory: Union[str, Path]) -> VectorIndex:
    """
    Load a persisted index, verifying version, sizes and checksums.

    Args:
        directory: Index directory

    Returns:
        VectorIndex with bit-identical vectors

    Raises:
        IndexLoadError: Naming the offending file
    """
    root = Path(directory)
    if not root.is_dir():
        raise IndexLoadError(f"index directory {root} does not exist", file=str(root))

    manifest = _read_manifest(root)
    dims = manifest.dims
    vector_data = _read_checked(
        root, VECTORS_FILE, manifest, expected_size=manifest.entry_count * dims * 4
    )
    entry_records = _parse_jsonl(_read_checked(root, ENTRIES_FILE, manifest), ENTRIES_FILE)
    chunk_records = _parse_jsonl(_read_checked(root, CHUNKS_FILE, manifest), CHUNKS_FILE)

    if len(entry_records) != manifest.entry_count:
        raise IndexLoadError(
            f"{len(entry_records)} entries, manifest says {manifest.entry_count}", file=ENTRIES_FILE
        )
    if len(chunk_records) != manifest.chunk_count:
        raise IndexLoadError(
            f"{len(chunk_records)} chunks, manifest says {manifest.chunk_count}", file=CHUNKS_FILE
        )

    matrix = np.frombuffer(vector_data, dtype="<f4").reshape(manifest.entry_count, dims)
    try:
        chunks = [Chunk.from_dict(record) for record in chunk_records]
        entries = []
        for record, row in zip(entry_records, matrix):
            values = row.copy()
            values.setflags(write=False)
            entries.append(
                IndexEntry(
                    entry_id=record["entry_id"],
                    chunk_id=record["chunk_id"],
                    kind=EntryKind(record["kind"]),
                    text=record["text"],
                    vector=EmbeddingVector(values=values),
                )
            )
        index = VectorIndex(entries, chunks, manifest)
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise IndexLoadError(f"malformed records ({e})", file=ENTRIES_FILE) from e

    if compute_content_hash(entries, chunks, manifest.prompt_hashes) != manifest.content_hash:
        raise IndexLoadError("content hash mismatch", file=MANIFEST_FILE)

    logger.info(f"Loaded index from {root}: {index.describe()}")
    return index
