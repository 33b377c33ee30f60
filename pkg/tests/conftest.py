# Pytest Configuration and Fixtures
# conftest.py - Test configuration and fixtures

from pathlib import Path
from typing import Generator
import json

import pytest

from src.core.config import ChunkingConfig, PipelineConfig, get_config, live_tests_enabled
from src.core.base import Document, IndexMode
from src.gateway.base import Backends
from src.gateway.mock import MockChatBackend
from src.index.builder import build_index
from src.index.vector_index import VectorIndex

from tests.fixtures import (
    ANSWER_SYSTEM_MATCH,
    EVAL_ANSWER_RULES,
    EVAL_RECORDS,
    FIXED_BUILT_AT,
    PLANTED_ANSWER,
    PLANTED_CORPUS,
    mock_backends,
    offline_chat,
    script_answer,
    write_jsonl,
)


def pytest_collection_modifyitems(config, items):
    """Skip live smoke tests unless AQRAG_LIVE_TESTS=1."""
    if live_tests_enabled():
        return
    skip_live = pytest.mark.skip(reason="set AQRAG_LIVE_TESTS=1 to run live tests")
    for item in items:
        if "live" in item.keywords:
            item.add_marker(skip_live)


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch) -> Generator:
    """Reset cached settings so tests never see a developer's AQRAG_* environment."""
    for name in (
        "AQRAG_BACKEND",
        "AQRAG_PARALLELISM",
        "AQRAG_MOCK_DIMS",
        "AQRAG_LOG_LEVEL",
        "AQRAG_CACHE_DIR",
    ):
        monkeypatch.delenv(name, raising=False)
    get_config().reload()
    yield
    get_config().reload()


# Fixtures


@pytest.fixture
def chat() -> MockChatBackend:
    """Mock chat with offline transforms and the planted answer scripted."""
    backend = offline_chat()
    script_answer(backend, "Ulva", PLANTED_ANSWER)
    return backend


@pytest.fixture
def backends(chat) -> Backends:
    """Mock backend bundle around ``chat``."""
    return mock_backends(chat)


@pytest.fixture
def planted_docs() -> list:
    """Planted corpus as Documents."""
    return [Document(doc_id=d["id"], text=d["text"], title=d.get("title")) for d in PLANTED_CORPUS]


@pytest.fixture
def planted_index(planted_docs, backends) -> VectorIndex:
    """AQ index over the planted corpus."""
    return build_index(planted_docs, IndexMode.AQ, ChunkingConfig(), backends, built_at=FIXED_BUILT_AT)


@pytest.fixture
def pipeline_config() -> PipelineConfig:
    """Unified pipeline keeping one reranked chunk."""
    return PipelineConfig(k2=1)


@pytest.fixture
def corpus_file(tmp_path) -> Path:
    """Planted corpus on disk."""
    return write_jsonl(tmp_path / "corpus.jsonl", PLANTED_CORPUS)


@pytest.fixture
def dataset_file(tmp_path) -> Path:
    """Three-record evaluation dataset on disk."""
    return write_jsonl(tmp_path / "dataset.jsonl", EVAL_RECORDS)


@pytest.fixture
def eval_chat() -> MockChatBackend:
    """Mock chat answering every evaluation record correctly."""
    backend = offline_chat()
    for match, reply in EVAL_ANSWER_RULES:
        script_answer(backend, match, reply)
    return backend


@pytest.fixture
def mock_script(tmp_path) -> Path:
    """Mock chat script file for CLI runs."""
    rules = [{"match": "Ulva", "reply": PLANTED_ANSWER, "system_match": ANSWER_SYSTEM_MATCH}]
    rules += [
        {"match": match, "reply": reply, "system_match": ANSWER_SYSTEM_MATCH}
        for match, reply in EVAL_ANSWER_RULES
    ]
    path = tmp_path / "script.json"
    path.write_text(json.dumps({"rules": rules}), encoding="utf-8")
    return path
