"""
Answer generation over reranked context.

Unified mode makes one call with the original question and the top-k2
chunks. Sequential mode answers each subquestion in turn over its own
retrieval, carrying earlier (subquestion, answer) pairs forward, then
answers the original question from those pairs and the last context.
"""

from typing import List, Mapping, Optional, Sequence, Tuple
import logging

from .retrieval import rerank, retrieve_candidates
from .stages import GENERATE, RERANK, RETRIEVE, stage
from ..core.base import Answer, Chunk, RankedChunk, SubQuestion, Trace
from ..core.config import ContextOrder, PipelineConfig
from ..gateway.base import Backends, ChatBackend, ChatRequest
from ..index.vector_index import VectorIndex
from ..transform.prompts import load_template
from ..utils.error_handler import ConfigurationError, ValidationError

logger = logging.getLogger(__name__)


def chunk_delimiter(chunk_id: str) -> str:
    """Line separating chunks inside a generation context."""
    return f"[chunk {chunk_id}]"


def context_chunk_ids(ranked: Sequence[RankedChunk], order: ContextOrder = ContextOrder.RERANK) -> List[str]:
    """Chunk ids in the order they appear in the context."""
    ids = [r.chunk_id for r in sorted(ranked, key=lambda r: r.rank)]
    if ContextOrder(order) is ContextOrder.DOCUMENT:
        ids.sort()
    return ids


def build_context(chunk_ids: Sequence[str], chunks: Mapping[str, Chunk]) -> str:
    """Concatenate chunk texts, each preceded by its delimiter line."""
    return "\n\n".join(f"{chunk_delimiter(cid)}\n{chunks[cid].text}" for cid in chunk_ids)


def format_qa_pairs(pairs: Sequence[Tuple[str, str]]) -> str:
    """Numbered (question, answer) lines."""
    return "\n".join(
        f"Q{i}: {question}\nA{i}: {answer}" for i, (question, answer) in enumerate(pairs, start=1)
    )


def _ask(
    chat: ChatBackend,
    template: str,
    user_prompt: str,
    temperature: float,
    max_output_tokens: int,
    trace: Optional[Trace],
) -> str:
    reply = chat.chat(
        ChatRequest(
            system_prompt=load_template(template).text,
            user_prompt=user_prompt,
            temperature=temperature,
            max_output_tokens=max_output_tokens,
        )
    )
    if trace is not None:
        trace.bump("generation_calls")
    return reply.strip()


def answer_unified(
    question: str,
    ranked: Sequence[RankedChunk],
    chunks: Mapping[str, Chunk],
    chat_backend: ChatBackend,
    context_order: ContextOrder = ContextOrder.RERANK,
    trace: Optional[Trace] = None,
    subquestions: Optional[Sequence[SubQuestion]] = None,
    temperature: float = 0.0,
    max_output_tokens: int = 1024,
) -> Answer:
    """
    Answer the original question in one call over the ranked chunks.

    Args:
        question: Original question
        ranked: Reranked chunks (non-empty)
        chunks: Chunk store
        chat_backend: Answer generator
        context_order: rerank (default) or document order
        trace: Trace to record into (a fresh one if None)
        subquestions: Subquestions to report on the Answer

    Returns:
        Answer with trimmed text and used_chunks in context order
    """
    if not ranked:
        raise ValidationError("answer_unified requires at least one ranked chunk")
    trace = trace if trace is not None else Trace(question=question)

    used = context_chunk_ids(ranked, context_order)
    user_prompt = f"# Context\n{build_context(used, chunks)}\n\n# Question\n{question}"
    with stage(trace, GENERATE):
        text = _ask(chat_backend, "answer", user_prompt, temperature, max_output_tokens, trace)

    trace.answer = text
    return Answer(text=text, used_chunks=used, subquestions=list(subquestions or []), trace=trace)


def answer_sequential(
    question: str,
    subqs: Sequence[SubQuestion],
    index: VectorIndex,
    backends: Backends,
    cfg: PipelineConfig,
    trace: Optional[Trace] = None,
) -> Answer:
    """
    Answer subquestions one by one, then the original question.

    Every subquestion gets its own retrieval (k1) and rerank (k2, scored
    against that subquestion). Chat calls are strictly serialized:
    len(subqs) intermediate calls plus one final call.

    Raises:
        ConfigurationError: If decomposition is off
        PipelineError: On any stage failure, with the subquestion index
    """
    if not cfg.decomposition:
        raise ConfigurationError("Sequential inference requires decomposition to be enabled")
    if not subqs:
        raise ValidationError("answer_sequential requires at least one subquestion")
    trace = trace if trace is not None else Trace(question=question)

    pairs: List[Tuple[str, str]] = []
    used: List[str] = []
    context = ""
    for subq in subqs:
        with stage(trace, RETRIEVE, subq.index):
            candidates = retrieve_candidates(
                [subq], index, backends.embedder, cfg.k1, backends.parallelism
            )
            if not candidates:
                raise ValidationError("No candidates retrieved (empty index)")
        trace.bump("retrieved_pairs", sum(len(c.sources) for c in candidates))
        trace.bump("candidates", len(candidates))
        trace.candidate_ids.extend(c.chunk_id for c in candidates)

        with stage(trace, RERANK, subq.index):
            ranked = rerank(subq.text, candidates, index.chunks, backends.reranker, cfg.k2)
        trace.bump("reranked", len(ranked))
        trace.ranked_ids.extend(r.chunk_id for r in ranked)

        used = context_chunk_ids(ranked, cfg.context_order)
        context = build_context(used, index.chunks)
        sections = []
        if pairs:
            sections.append(f"# Previous Steps\n{format_qa_pairs(pairs)}")
        sections.append(f"# Context\n{context}")
        sections.append(f"# Subquestion\n{subq.text}")

        with stage(trace, GENERATE, subq.index):
            step_answer = _ask(
                backends.generator,
                "answer_step",
                "\n\n".join(sections),
                backends.temperature,
                backends.max_output_tokens,
                trace,
            )
        pairs.append((subq.text, step_answer))
        trace.intermediate.append({"subquestion": subq.text, "answer": step_answer})

    final_prompt = (
        f"# Subquestion Answers\n{format_qa_pairs(pairs)}\n\n"
        f"# Context\n{context}\n\n"
        f"# Question\n{question}"
    )
    with stage(trace, GENERATE):
        text = _ask(
            backends.generator,
            "answer_final",
            final_prompt,
            backends.temperature,
            backends.max_output_tokens,
            trace,
        )

    trace.answer = text
    return Answer(text=text, used_chunks=used, subquestions=list(subqs), trace=trace)
