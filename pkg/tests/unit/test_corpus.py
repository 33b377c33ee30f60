"""Unit tests for corpus loading and chunking."""

import json
import math

import numpy as np
import pytest

from src.core.base import Document
from src.core.config import ChunkingConfig
from src.corpus.chunker import chunk_corpus, chunk_document, chunk_id_for, expected_chunk_count
from src.corpus.loader import load_corpus, parse_corpus_record
from src.utils.error_handler import CorpusError


@pytest.mark.unit
class TestLoadCorpus:
    """Tests for corpus loading."""

    def test_loads_in_file_order(self, corpus_file):
        """Test documents keep file order and optional titles."""
        docs = load_corpus(corpus_file)
        assert [d.doc_id for d in docs] == ["bergen", "volga", "zembla"]
        assert docs[0].title == "Bergen"
        assert docs[1].title is None

    def test_blank_lines_skipped(self, tmp_path):
        """Test blank lines are ignored."""
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "text": "x"}\n\n   \n{"id": "b", "text": "y"}\n')
        assert [d.doc_id for d in load_corpus(path)] == ["a", "b"]

    def test_duplicate_ids(self, tmp_path):
        """Test duplicate doc ids name the offending line."""
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "text": "x"}\n{"id": "a", "text": "y"}\n')
        with pytest.raises(CorpusError) as exc_info:
            load_corpus(path)
        assert exc_info.value.details["line"] == 2

    def test_missing_file(self, tmp_path):
        """Test unreadable corpora raise CorpusError."""
        with pytest.raises(CorpusError):
            load_corpus(tmp_path / "missing.jsonl")

    def test_unicode_line_separators_inside_text(self, tmp_path):
        """Test U+2028, U+2029 and U+0085 inside a record do not split it."""
        text = "Keld lies north.\u2028It has a harbour.\u2029Boats\u0085leave daily."
        path = tmp_path / "c.jsonl"
        path.write_text(
            json.dumps({"id": "keld", "text": text}, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        docs = load_corpus(path)
        assert [d.doc_id for d in docs] == ["keld"]
        assert docs[0].text == text

    @pytest.mark.parametrize(
        "line",
        [
            "not json",
            "[1, 2]",
            json.dumps({"text": "no id"}),
            json.dumps({"id": "a"}),
            json.dumps({"id": "a", "text": ""}),
            json.dumps({"id": 5, "text": "x"}),
            json.dumps({"id": "a", "text": "x", "title": 3}),
        ],
    )
    def test_malformed_records(self, line):
        """Test malformed records carry their line number."""
        with pytest.raises(CorpusError) as exc_info:
            parse_corpus_record(line, 4)
        assert exc_info.value.details["line"] == 4


@pytest.mark.unit
class TestChunker:
    """Tests for sliding-window chunking."""

    def test_chunk_id_format(self):
        """Test ids are doc id plus zero-padded start."""
        assert chunk_id_for("doc", 600) == "doc:00000600"

    def test_short_document_single_chunk(self):
        """Test a short document is one chunk covering all of it."""
        chunks = chunk_document(Document(doc_id="d", text="short"), ChunkingConfig())
        assert len(chunks) == 1
        assert (chunks[0].start, chunks[0].end, chunks[0].text) == (0, 5, "short")

    def test_worked_example(self):
        """Test window 800 / stride 600 over 2000 characters."""
        text = "".join(chr(ord("a") + i % 26) for i in range(2000))
        chunks = chunk_document(Document(doc_id="d", text=text), ChunkingConfig())
        assert [(c.start, c.end) for c in chunks] == [(0, 800), (600, 1400), (1200, 2000)]
        assert chunks[1].text == text[600:1400]

    def test_trailing_short_window_kept(self):
        """Test the final chunk may be shorter than the window."""
        chunks = chunk_document(Document(doc_id="d", text="x" * 1450), ChunkingConfig())
        assert [(c.start, c.end) for c in chunks] == [(0, 800), (600, 1400), (1200, 1450)]

    def test_code_point_slicing(self):
        """Test multi-byte characters are never split."""
        text = "é" * 10 + "日本" * 5
        chunks = chunk_document(Document(doc_id="d", text=text), ChunkingConfig(window=7, stride=5))
        assert "".join(c.text[: 5] for c in chunks[:-1]) + chunks[-1].text == text

    def test_chunking_law_random_lengths(self):
        """Test count, coverage and offsets over many random lengths."""
        rng = np.random.default_rng(7)
        for _ in range(1000):
            window = int(rng.integers(1, 200))
            stride = int(rng.integers(1, window + 1))
            length = int(rng.integers(1, 2000))
            cfg = ChunkingConfig(window=window, stride=stride)
            text = "".join(chr(ord("a") + i % 26) for i in range(length))
            chunks = chunk_document(Document(doc_id="d", text=text), cfg)

            expected = 1 if length <= window else 1 + math.ceil((length - window) / stride)
            assert len(chunks) == expected == expected_chunk_count(length, cfg)
            assert chunks[-1].end == length
            for i, chunk in enumerate(chunks):
                assert chunk.start == i * stride
                assert chunk.text == text[chunk.start : chunk.end]
                assert 0 < len(chunk.text) <= window
                if i < len(chunks) - 1:
                    assert len(chunk.text) == window
            covered = set()
            for chunk in chunks:
                covered.update(range(chunk.start, chunk.end))
            assert covered == set(range(length))

    def test_chunk_corpus_preserves_document_order(self, planted_docs):
        """Test corpus chunking concatenates per-document chunks."""
        chunks = chunk_corpus(planted_docs, ChunkingConfig())
        assert [c.doc_id for c in chunks] == ["bergen", "volga", "zembla"]
