"""
Document-side transforms: answerable questions, summaries, paraphrases.

The system prompts are the stored templates verbatim; the chunk text is
sent as the user prompt under a fixed input delimiter.
"""

from typing import Any, Dict, List, Type
import logging

from .base import ListTransform
from .prompts import render_input
from ..core.base import AnswerableQuestion, Chunk, TransformKind
from ..gateway.base import ChatBackend

logger = logging.getLogger(__name__)


def surrogate_id(chunk_id: str, kind: str, ordinal: int) -> str:
    """Identifier of the ``ordinal``-th surrogate of ``kind`` for a chunk."""
    return f"{chunk_id}#{kind}-{ordinal:03d}"


class ChunkTransform(ListTransform):
    """A list transform applied to one chunk."""

    kind: TransformKind

    def render_user_prompt(self, text: str) -> str:
        return render_input(text)

    def generate(self, chunk: Chunk) -> List[str]:
        """
        Generate surrogate texts for a chunk.

        Args:
            chunk: Source chunk

        Returns:
            Surrogates in model output order (duplicates kept)
        """
        texts = self.run(chunk.text)
        logger.debug(f"{self.kind.value} transform produced {len(texts)} texts for {chunk.chunk_id}")
        return texts


class AnswerableQuestionGenerator(ChunkTransform):
    """Generates questions answerable from a single chunk."""

    template_name = "aq"
    kind = TransformKind.AQ

    def generate_questions(self, chunk: Chunk) -> List[AnswerableQuestion]:
        """Generate AQs with dense ordinals starting at 1."""
        return [
            AnswerableQuestion(
                aq_id=surrogate_id(chunk.chunk_id, self.kind.value, ordinal),
                chunk_id=chunk.chunk_id,
                text=text,
                ordinal=ordinal,
            )
            for ordinal, text in enumerate(self.generate(chunk), start=1)
        ]


class Summarizer(ChunkTransform):
    """Up to ten distinct summaries of a chunk."""

    template_name = "summary"
    kind = TransformKind.SUMMARY


class Paraphraser(ChunkTransform):
    """Up to ten distinct paraphrases of a chunk."""

    template_name = "paraphrase"
    kind = TransformKind.PARAPHRASE


TRANSFORMS: Dict[TransformKind, Type[ChunkTransform]] = {
    TransformKind.AQ: AnswerableQuestionGenerator,
    TransformKind.SUMMARY: Summarizer,
    TransformKind.PARAPHRASE: Paraphraser,
}


def transform_for(kind: TransformKind, chat: ChatBackend, **kwargs: Any) -> ChunkTransform:
    """Instantiate the transform for ``kind``."""
    return TRANSFORMS[TransformKind(kind)](chat, **kwargs)


def generate_answerable_questions(chunk: Chunk, chat_backend: ChatBackend) -> List[AnswerableQuestion]:
    """Generate answerable questions for a chunk."""
    return AnswerableQuestionGenerator(chat_backend).generate_questions(chunk)


def generate_summaries(chunk: Chunk, chat_backend: ChatBackend) -> List[str]:
    """Generate summaries for a chunk."""
    return Summarizer(chat_backend).generate(chunk)


def generate_paraphrases(chunk: Chunk, chat_backend: ChatBackend) -> List[str]:
    """Generate paraphrases for a chunk."""
    return Paraphraser(chat_backend).generate(chunk)
