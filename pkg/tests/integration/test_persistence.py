"""Integration tests for index save/load."""

import json

import numpy as np
import pytest

from src.core.base import Document, EmbeddingVector, IndexMode
from src.core.config import ChunkingConfig, PipelineConfig
from src.index.builder import build_index
from src.index.storage import (
    CHUNKS_FILE,
    ENTRIES_FILE,
    MANIFEST_FILE,
    VECTORS_FILE,
    load_index,
    save_index,
)
from src.pipeline.engine import run_query
from src.utils.error_handler import IndexBuildError, IndexLoadError

from tests.fixtures import FIXED_BUILT_AT, PLANTED_QUESTION, random_index


def assert_same_index(a, b):
    """Entries, vectors, chunks and manifest match exactly."""
    assert [e.to_dict() for e in a.entries] == [e.to_dict() for e in b.entries]
    assert np.array_equal(a.matrix, b.matrix)
    assert a.matrix.tobytes() == b.matrix.tobytes()
    assert dict(a.chunks) == dict(b.chunks)
    assert a.manifest.content_hash == b.manifest.content_hash
    assert a.manifest.model_dump(exclude={"files"}) == b.manifest.model_dump(exclude={"files"})


@pytest.mark.integration
class TestRoundTrip:
    """Tests for save_index / load_index round trips."""

    def test_random_indexes(self, tmp_path):
        """Test bit-identical vectors and identical search results after reload."""
        rng = np.random.default_rng(21)
        for trial in range(50):
            index = random_index(rng, int(rng.integers(1, 60)), n_chunks=4, dims=int(rng.integers(2, 48)))
            loaded = load_index(save_index(index, tmp_path / f"idx-{trial}"))
            assert_same_index(index, loaded)
            query = EmbeddingVector.from_raw(rng.standard_normal(index.dims))
            assert index.search(query, 10) == loaded.search(query, 10)

    def test_built_index_round_trip(self, tmp_path, planted_index, backends, pipeline_config):
        """Test a loaded index answers exactly like the original."""
        loaded = load_index(save_index(planted_index, tmp_path / "planted"))
        assert_same_index(planted_index, loaded)
        original = run_query(PLANTED_QUESTION, planted_index, backends, pipeline_config)
        reloaded = run_query(PLANTED_QUESTION, loaded, backends, pipeline_config)
        assert original.text == reloaded.text
        assert original.trace.ranked_ids == reloaded.trace.ranked_ids

    def test_zero_entry_index(self, tmp_path, backends):
        """Test an index without entries survives a round trip."""
        index = build_index([Document("t", "12 34 56. 78 90.")], IndexMode.AQ, ChunkingConfig(), backends)
        loaded = load_index(save_index(index, tmp_path / "empty"))
        assert len(loaded) == 0
        assert loaded.entries_per_chunk() == {"t:00000000": 0}

    @pytest.mark.parametrize("mode", [IndexMode.DOCUMENT, IndexMode.BOTH])
    @pytest.mark.parametrize("separator", ["\u2028", "\u2029", "\u0085"])
    def test_unicode_line_separators(self, tmp_path, backends, mode, separator):
        """Test chunk and entry text holding unicode line separators reloads intact."""
        text = f"Keld lies north of Ulva.{separator}The harbour of Keld opened in 1904."
        index = build_index([Document("keld", text)], mode, ChunkingConfig(), backends)
        loaded = load_index(save_index(index, tmp_path / "idx"))
        assert_same_index(index, loaded)
        assert loaded.chunk("keld:00000000").text == text

    def test_unwritable_directory(self, tmp_path, planted_index):
        """Test a save failure is raised as IndexBuildError naming the function."""
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(IndexBuildError) as exc_info:
            save_index(planted_index, blocker / "idx")
        assert exc_info.value.message.startswith("Cannot save index")
        assert exc_info.value.details["function"] == "save_index"
        assert isinstance(exc_info.value.original_error, OSError)

    def test_saved_files_deterministic(self, tmp_path, planted_docs):
        """Test two identical builds write identical bytes."""
        from tests.fixtures import mock_backends

        for name in ("a", "b"):
            index = build_index(planted_docs, IndexMode.BOTH, ChunkingConfig(), mock_backends(), built_at=FIXED_BUILT_AT)
            save_index(index, tmp_path / name)
        for file in (MANIFEST_FILE, ENTRIES_FILE, VECTORS_FILE, CHUNKS_FILE):
            assert (tmp_path / "a" / file).read_bytes() == (tmp_path / "b" / file).read_bytes()

    def test_manifest_contents(self, tmp_path, planted_index):
        """Test the manifest records build metadata and checksums."""
        save_index(planted_index, tmp_path / "idx")
        manifest = json.loads((tmp_path / "idx" / MANIFEST_FILE).read_text())
        assert manifest["format_version"] == "1"
        assert manifest["mode"] == "aq"
        assert manifest["entry_count"] == 5
        assert manifest["chunking"] == {"window": 800, "stride": 600}
        assert set(manifest["files"]) == {ENTRIES_FILE, VECTORS_FILE, CHUNKS_FILE}
        assert (tmp_path / "idx" / VECTORS_FILE).stat().st_size == 5 * 64 * 4


@pytest.mark.integration
class TestLoadFailures:
    """Tests for rejected index directories."""

    @pytest.fixture
    def saved(self, tmp_path, planted_index):
        """A saved planted index."""
        return save_index(planted_index, tmp_path / "idx")

    def load_error(self, path):
        with pytest.raises(IndexLoadError) as exc_info:
            load_index(path)
        return exc_info.value

    def test_missing_directory(self, tmp_path):
        """Test a missing directory is reported."""
        self.load_error(tmp_path / "nope")

    def test_version_mismatch(self, saved):
        """Test unknown format versions are refused."""
        path = saved / MANIFEST_FILE
        manifest = json.loads(path.read_text())
        manifest["format_version"] = "2"
        path.write_text(json.dumps(manifest))
        error = self.load_error(saved)
        assert error.details["file"] == MANIFEST_FILE
        assert "format version" in error.message

    def test_truncated_vectors(self, saved):
        """Test a short vector file is named."""
        path = saved / VECTORS_FILE
        path.write_bytes(path.read_bytes()[:-4])
        error = self.load_error(saved)
        assert error.details["file"] == VECTORS_FILE
        assert "truncated" in error.message

    def test_oversized_vectors(self, saved):
        """Test extra vector bytes are named."""
        path = saved / VECTORS_FILE
        path.write_bytes(path.read_bytes() + b"\x00\x00\x00\x00")
        assert "oversized" in self.load_error(saved).message

    def test_tampered_vector_values(self, saved):
        """Test a flipped byte fails the checksum."""
        path = saved / VECTORS_FILE
        data = bytearray(path.read_bytes())
        data[10] ^= 0xFF
        path.write_bytes(bytes(data))
        error = self.load_error(saved)
        assert error.details["file"] == VECTORS_FILE
        assert "checksum" in error.message

    @pytest.mark.parametrize("name", [ENTRIES_FILE, CHUNKS_FILE])
    def test_tampered_records(self, saved, name):
        """Test edited record files fail their checksum."""
        path = saved / name
        path.write_text(path.read_text().replace("Zembla", "Zenbla"))
        assert self.load_error(saved).details["file"] == name

    def test_content_hash_mismatch(self, saved):
        """Test a forged content hash is detected."""
        path = saved / MANIFEST_FILE
        manifest = json.loads(path.read_text())
        manifest["content_hash"] = "0" * 64
        path.write_text(json.dumps(manifest))
        assert "content hash" in self.load_error(saved).message

    def test_invalid_manifest(self, saved):
        """Test unreadable manifests."""
        (saved / MANIFEST_FILE).write_text("not json")
        assert self.load_error(saved).details["file"] == MANIFEST_FILE

    def test_missing_data_file(self, saved):
        """Test a deleted data file is named."""
        (saved / CHUNKS_FILE).unlink()
        assert self.load_error(saved).details["file"] == CHUNKS_FILE
