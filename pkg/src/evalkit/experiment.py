"""
Experiment execution.

Each record's context is its own corpus: the record is indexed (or its
index fetched from the cache), the question run through the pipeline and
the prediction scored against the gold answers.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from dataclasses import dataclass, replace
from pathlib import Path
import hashlib
import json
import logging

from pydantic import BaseModel, ConfigDict, Field

from .cache import IndexCache, cache_key
from .dataset import dataset_sha256, load_dataset
from .metrics import qa_f1
from ..core.base import Document, EvalRecord, IndexMode
from ..core.config import (
    BackendConfig,
    BackendKind,
    ChunkingConfig,
    InferenceMode,
    PipelineConfig,
)
from ..core.stats import CountStats
from ..gateway.base import Backends, ChatBackend
from ..gateway.factory import build_backends
from ..index.builder import build_index, prompt_hashes_for
from ..index.vector_index import VectorIndex
from ..pipeline.engine import QueryPipeline
from ..transform.decomposer import QuestionDecomposer
from ..transform.prompts import template_hashes
from ..utils.concurrency import bounded_map
from ..utils.error_handler import AqragError, ConfigurationError, EvaluationError

logger = logging.getLogger(__name__)

# All records share one doc id so identical contexts share an index.
CONTEXT_DOC_ID = "ctx"

# Fields that do not change results and stay out of the fingerprint.
NON_RESULT_FIELDS = {"name", "dataset", "strict", "parallelism"}


class ExperimentConfig(BaseModel):
    """One evaluation run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(default="experiment", description="Label used in reports and tables")
    dataset: Path = Field(description="LongBench-style dataset file")
    index_mode: IndexMode = Field(default=IndexMode.AQ)
    chunking: ChunkingConfig = Field(default_factory=ChunkingConfig)
    pipeline: PipelineConfig = Field(default_factory=PipelineConfig)
    backend: BackendKind = Field(default=BackendKind.MOCK)
    limit: int = Field(default=0, ge=0, description="Evaluate only the first N records (0 = all)")
    strict: bool = Field(default=False, description="Abort on the first failing record")
    parallelism: int = Field(default=1, ge=1, description="Records evaluated concurrently")

    def check(self) -> None:
        """
        Validate assets and mode coupling before any work starts.

        Raises:
            ConfigurationError: Missing dataset or sequential without decomposition
        """
        if not Path(self.dataset).is_file():
            raise ConfigurationError(f"Dataset not found: {self.dataset}")
        if self.pipeline.inference_mode is InferenceMode.SEQUENTIAL and not self.pipeline.decomposition:
            raise ConfigurationError(
                f"{self.name}: sequential inference requires decomposition to be enabled"
            )

    def result_fields(self) -> Dict[str, Any]:
        """Config fields that affect results."""
        return self.model_dump(mode="json", exclude=NON_RESULT_FIELDS)


def backend_models(backends: Backends) -> Dict[str, str]:
    """Model name per backend role."""
    return {
        "generator": backends.generator.model_name,
        "decomposer": backends.decomposition_chat.model_name,
        "aq_generator": backends.transform_chat.model_name,
        "embedder": backends.embedder.model_name,
        "reranker": backends.reranker.model_name,
    }


def experiment_fingerprint(cfg: ExperimentConfig, backends: Backends, dataset_hash: str) -> str:
    """sha256 over result-affecting config, models, prompt hashes and dataset bytes."""
    payload = {
        "config": cfg.result_fields(),
        "models": backend_models(backends),
        "prompt_hashes": template_hashes(),
        "dataset_sha256": dataset_hash,
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


@dataclass
class Report:
    """Scored records and their summary."""

    name: str
    fingerprint: str
    config: Dict[str, Any]
    records: List[EvalRecord]
    decomposition_stats: CountStats
    aq_stats: CountStats
    cache_builds: int = 0

    @property
    def aggregate_f1(self) -> float:
        """Arithmetic mean of per-record F1 (0.0 for no records)."""
        scores = [record.f1 or 0.0 for record in self.records]
        return sum(scores) / len(scores) if scores else 0.0

    @property
    def error_count(self) -> int:
        """Records that failed."""
        return sum(1 for record in self.records if record.error is not None)

    def summary(self) -> Dict[str, Any]:
        """Summary object (no timings, so it is byte-reproducible)."""
        return {
            "name": self.name,
            "fingerprint": self.fingerprint,
            "config": self.config,
            "aggregate_f1": self.aggregate_f1,
            "records": len(self.records),
            "errors": self.error_count,
            "decomposition_stats": self.decomposition_stats.to_dict(),
            "aq_stats": self.aq_stats.to_dict(),
        }

    def summary_line(self) -> str:
        """Human summary."""
        return f"F1: {self.aggregate_f1:.4f}"

    def to_lines(self) -> List[str]:
        """One JSON line per record, then one summary line."""
        lines = [
            json.dumps({"type": "record", **record.to_dict()}, ensure_ascii=False, sort_keys=True)
            for record in self.records
        ]
        lines.append(
            json.dumps({"type": "summary", **self.summary()}, ensure_ascii=False, sort_keys=True)
        )
        return lines

    def write(self, path: Union[str, Path]) -> Path:
        """Write the report as line-records."""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text("\n".join(self.to_lines()) + "\n", encoding="utf-8")
        return target


@dataclass
class _RecordOutcome:
    record: EvalRecord
    subquestion_count: Optional[int]
    entries_per_chunk: List[int]


class ExperimentRunner:
    """Runs one ExperimentConfig against a backend bundle and index cache."""

    def __init__(self, cfg: ExperimentConfig, backends: Backends, cache: IndexCache):
        self.cfg = cfg
        self.backends = backends
        self.cache = cache
        self._prompt_hashes = prompt_hashes_for(cfg.index_mode)
        self._aq_model = (
            backends.transform_chat.model_name if cfg.index_mode is not IndexMode.DOCUMENT else None
        )

    def index_for(self, record: EvalRecord) -> VectorIndex:
        """Cached per-record index."""
        key = cache_key(
            record.context,
            self.cfg.index_mode,
            self.cfg.chunking,
            self._prompt_hashes,
            self.backends.embedder.model_name,
            self._aq_model,
        )
        docs = [Document(doc_id=CONTEXT_DOC_ID, text=record.context)]
        return self.cache.get_or_build(
            key,
            lambda: build_index(docs, self.cfg.index_mode, self.cfg.chunking, self.backends),
        )

    def evaluate(self, record: EvalRecord) -> _RecordOutcome:
        """Index, answer and score one record."""
        try:
            index = self.index_for(record)
            answer = QueryPipeline(index, self.backends, self.cfg.pipeline).run_query(record.question)
        except AqragError as e:
            if self.cfg.strict:
                raise EvaluationError(
                    f"Record {record.record_id} failed: {e.message}",
                    record_id=record.record_id,
                    original_error=e,
                ) from e
            logger.warning(f"Record {record.record_id} failed: {e.message}")
            failed = replace(record, prediction="", f1=0.0, error=f"{type(e).__name__}: {e.message}")
            return _RecordOutcome(failed, None, [])

        scored = replace(
            record,
            prediction=answer.text,
            f1=qa_f1(answer.text, record.gold_answers),
            subquestions=[s.text for s in answer.subquestions],
            ranked_ids=list(answer.trace.ranked_ids),
        )
        return _RecordOutcome(
            scored, len(answer.subquestions), list(index.entries_per_chunk().values())
        )

    def run(self) -> Report:
        """Evaluate every record and assemble the report."""
        self.cfg.check()
        dataset_hash = dataset_sha256(self.cfg.dataset)
        records = load_dataset(self.cfg.dataset, limit=self.cfg.limit)
        builds_before = self.cache.builds

        outcomes = bounded_map(self.evaluate, records, self.cfg.parallelism)

        decomposition_counts = [o.subquestion_count for o in outcomes if o.subquestion_count is not None]
        entry_counts = [count for o in outcomes for count in o.entries_per_chunk]
        report = Report(
            name=self.cfg.name,
            fingerprint=experiment_fingerprint(self.cfg, self.backends, dataset_hash),
            config=self.cfg.result_fields(),
            records=[o.record for o in outcomes],
            decomposition_stats=CountStats.from_counts(decomposition_counts),
            aq_stats=CountStats.from_counts(entry_counts),
            cache_builds=self.cache.builds - builds_before,
        )
        logger.info(
            f"{self.cfg.name}: {report.summary_line()} over {len(records)} records "
            f"({report.error_count} errors)"
        )
        return report


def run_experiment(
    cfg: ExperimentConfig,
    backends: Optional[Backends] = None,
    cache: Optional[IndexCache] = None,
    backend_config: Optional[BackendConfig] = None,
) -> Report:
    """
    Run one experiment.

    Args:
        cfg: Experiment configuration
        backends: Backend bundle (built from ``cfg.backend`` if None)
        cache: Shared index cache (a private one if None)
        backend_config: Settings used when building backends

    Returns:
        Report

    Raises:
        ConfigurationError: Invalid assets or mode coupling
        EvaluationError: A record failed in strict mode
    """
    if backends is None:
        backends = build_backends(cfg.backend, backend_config, parallelism=cfg.parallelism)
    return ExperimentRunner(cfg, backends, cache if cache is not None else IndexCache()).run()


def decomposition_stats(
    questions: Sequence[str],
    chat: ChatBackend,
    max_subquestions: int = 8,
    parallelism: int = 1,
) -> Tuple[CountStats, List[int]]:
    """
    Subquestions per question over a question set.

    Returns:
        (statistics, per-question counts)
    """
    decomposer = QuestionDecomposer(chat, max_subquestions=max_subquestions)
    counts = bounded_map(lambda q: len(decomposer.decompose(q)), questions, parallelism)
    return CountStats.from_counts(counts), counts
