"""
Online query pipeline.

decompose -> retrieve per subquestion -> pool candidates -> rerank
against the original question -> generate (unified or sequential).
"""

from typing import List
import logging

from .generation import answer_sequential, answer_unified
from .retrieval import rerank, retrieve_candidates
from .stages import DECOMPOSE, RERANK, RETRIEVE, stage
from ..core.base import Answer, SubQuestion, Trace
from ..core.config import InferenceMode, PipelineConfig
from ..gateway.base import Backends
from ..index.vector_index import VectorIndex
from ..transform.decomposer import QuestionDecomposer
from ..utils.error_handler import ConfigurationError, ValidationError

logger = logging.getLogger(__name__)


class QueryPipeline:
    """
    Answers questions against one index.

    The pipeline holds no per-query state, so one instance may serve
    concurrent queries.
    """

    def __init__(self, index: VectorIndex, backends: Backends, cfg: PipelineConfig):
        """
        Initialize pipeline.

        Args:
            index: Loaded index
            backends: Model backends
            cfg: Pipeline configuration

        Raises:
            ConfigurationError: Sequential inference with decomposition off
        """
        if cfg.inference_mode is InferenceMode.SEQUENTIAL and not cfg.decomposition:
            raise ConfigurationError("Sequential inference requires decomposition to be enabled")
        self.index = index
        self.backends = backends
        self.cfg = cfg
        self._decomposer = QuestionDecomposer(
            backends.decomposition_chat,
            max_subquestions=cfg.max_subquestions,
            temperature=backends.temperature,
            max_output_tokens=backends.max_output_tokens,
        )

    def subquestions_for(self, question: str, trace: Trace) -> List[SubQuestion]:
        """Decompose, or use the question itself when decomposition is off."""
        if not self.cfg.decomposition:
            return [SubQuestion(index=1, text=question)]
        with stage(trace, DECOMPOSE):
            subqs = self._decomposer.decompose(question)
        trace.bump("decomposition_calls")
        return subqs

    def run_query(self, question: str) -> Answer:
        """
        Answer one question.

        Args:
            question: Multihop question

        Returns:
            Answer with a full trace

        Raises:
            PipelineError: Labelled with the failing stage
        """
        if not question or not question.strip():
            raise ValidationError("Question must be non-empty")
        question = question.strip()

        trace = Trace(question=question, settings=self.cfg.model_dump(mode="json"))
        subqs = self.subquestions_for(question, trace)
        trace.subquestions = list(subqs)
        trace.bump("subquestions", len(subqs))

        if self.cfg.inference_mode is InferenceMode.SEQUENTIAL:
            answer = answer_sequential(question, subqs, self.index, self.backends, self.cfg, trace)
        else:
            answer = self._run_unified(question, subqs, trace)

        logger.debug(f"Query answered: counts={trace.counts}")
        return answer

    def _run_unified(self, question: str, subqs: List[SubQuestion], trace: Trace) -> Answer:
        with stage(trace, RETRIEVE):
            candidates = retrieve_candidates(
                subqs, self.index, self.backends.embedder, self.cfg.k1, self.backends.parallelism
            )
            if not candidates:
                raise ValidationError("No candidates retrieved (empty index)")
        trace.bump("retrieved_pairs", sum(len(c.sources) for c in candidates))
        trace.bump("candidates", len(candidates))
        trace.candidate_ids = [c.chunk_id for c in candidates]

        with stage(trace, RERANK):
            ranked = rerank(question, candidates, self.index.chunks, self.backends.reranker, self.cfg.k2)
        trace.bump("reranked", len(ranked))
        trace.ranked_ids = [r.chunk_id for r in ranked]

        return answer_unified(
            question,
            ranked,
            self.index.chunks,
            self.backends.generator,
            context_order=self.cfg.context_order,
            trace=trace,
            subquestions=subqs,
            temperature=self.backends.temperature,
            max_output_tokens=self.backends.max_output_tokens,
        )


def run_query(question: str, index: VectorIndex, backends: Backends, cfg: PipelineConfig) -> Answer:
    """Answer ``question`` with a one-off QueryPipeline."""
    return QueryPipeline(index, backends, cfg).run_query(question)
