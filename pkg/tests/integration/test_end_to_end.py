"""End-to-end tests: corpus file to answer through a persisted index."""

import pytest

from src.core.base import Document, IndexMode
from src.core.config import ChunkingConfig, ContextOrder, PipelineConfig
from src.corpus.chunker import expected_chunk_count
from src.corpus.loader import load_corpus
from src.index.builder import build_index
from src.index.stats import index_stats
from src.index.storage import load_index, save_index
from src.pipeline.engine import QueryPipeline

from tests.fixtures import PLANTED_ANSWER, PLANTED_GOLD_CHUNK, PLANTED_QUESTION


@pytest.mark.integration
class TestPlantedCorpus:
    """Planted corpus through every index mode."""

    @pytest.mark.parametrize("mode", [IndexMode.AQ, IndexMode.DOCUMENT, IndexMode.BOTH])
    def test_answer_from_saved_index(self, tmp_path, corpus_file, backends, mode):
        """Test the gold chunk ranks first and the scripted answer comes back."""
        docs = load_corpus(corpus_file)
        save_index(build_index(docs, mode, ChunkingConfig(), backends), tmp_path / "idx")
        index = load_index(tmp_path / "idx")

        answer = QueryPipeline(index, backends, PipelineConfig(k2=1)).run_query(PLANTED_QUESTION)

        assert answer.text == PLANTED_ANSWER
        assert answer.used_chunks == [PLANTED_GOLD_CHUNK]
        assert answer.trace.ranked_ids == [PLANTED_GOLD_CHUNK]
        assert answer.trace.answer == PLANTED_ANSWER

    def test_full_context(self, planted_index, backends):
        """Test the default k2 keeps every candidate, best first."""
        answer = QueryPipeline(planted_index, backends, PipelineConfig()).run_query(PLANTED_QUESTION)
        assert answer.trace.ranked_ids[0] == PLANTED_GOLD_CHUNK
        assert sorted(answer.trace.ranked_ids) == ["bergen:00000000", "volga:00000000", "zembla:00000000"]
        assert answer.text == PLANTED_ANSWER

    def test_document_order_context(self, planted_index, backends):
        """Test document-order context lists chunks by doc then offset."""
        cfg = PipelineConfig(context_order=ContextOrder.DOCUMENT)
        answer = QueryPipeline(planted_index, backends, cfg).run_query(PLANTED_QUESTION)
        assert answer.used_chunks == ["bergen:00000000", "volga:00000000", "zembla:00000000"]

    def test_trace_record(self, planted_index, backends, pipeline_config):
        """Test the trace serializes with counts, timings and settings."""
        answer = QueryPipeline(planted_index, backends, pipeline_config).run_query(PLANTED_QUESTION)
        record = answer.to_dict()["trace"]
        assert record["counts"]["candidates"] == 3
        assert set(record["timings"]) == {"decompose", "retrieve", "rerank", "generate"}
        assert record["settings"]["k2"] == 1
        assert record["subquestions"] == [{"index": 1, "text": PLANTED_QUESTION, "is_fallback": False}]

    def test_index_statistics(self, planted_index):
        """Test entries-per-chunk statistics for the planted corpus."""
        stats = index_stats(planted_index)
        assert stats.entries_per_chunk.mean == pytest.approx(5 / 3)
        assert stats.entries_per_chunk.min == 1
        assert stats.entries_per_chunk.max == 2
        assert stats.zero_entry_chunks == 0

    def test_long_document_chunks(self, tmp_path, backends):
        """Test a long document yields overlapping chunks that all resolve."""
        sentence = "The harbour of Keld shelters fishing boats from winter storms. "
        docs = [Document(doc_id="keld", text=sentence * 40)]
        index = build_index(docs, IndexMode.AQ, ChunkingConfig(), backends)
        loaded = load_index(save_index(index, tmp_path / "keld"))
        starts = [chunk.start for chunk in loaded.chunks.values()]
        expected = expected_chunk_count(len(docs[0].text), ChunkingConfig())
        assert expected > 1
        assert starts == [i * 600 for i in range(expected)]
        assert all(entry.chunk_id in loaded.chunks for entry in loaded.entries)
