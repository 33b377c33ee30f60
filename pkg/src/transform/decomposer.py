"""
Multihop question decomposition.
"""

from typing import List
import logging

from .base import ListTransform
from .prompts import QUESTION_DELIMITER
from ..core.base import SubQuestion
from ..gateway.base import ChatBackend
from ..utils.error_handler import TransformError

logger = logging.getLogger(__name__)

DEFAULT_MAX_SUBQUESTIONS = 8


class QuestionDecomposer(ListTransform):
    """Splits a multihop question into ordered single-hop subquestions."""

    template_name = "decompose"

    def __init__(
        self,
        chat: ChatBackend,
        max_subquestions: int = DEFAULT_MAX_SUBQUESTIONS,
        temperature: float = 0.0,
        max_output_tokens: int = 1024,
    ):
        super().__init__(chat, temperature=temperature, max_output_tokens=max_output_tokens)
        self.max_subquestions = max_subquestions

    def render_user_prompt(self, text: str) -> str:
        return QUESTION_DELIMITER + text

    def decompose(self, question: str) -> List[SubQuestion]:
        """
        Decompose a question.

        An empty model answer degrades to the original question, flagged
        with ``is_fallback``.

        Args:
            question: Multihop question

        Returns:
            1..max_subquestions SubQuestions indexed from 1

        Raises:
            TransformError: Unparseable output after retry, or too many subquestions
        """
        texts = self.run(question)

        if not texts:
            logger.warning("Decomposition returned no subquestions; using the original question")
            return [SubQuestion(index=1, text=question.strip(), is_fallback=True)]

        if len(texts) > self.max_subquestions:
            raise TransformError(
                f"Decomposition produced {len(texts)} subquestions "
                f"(limit {self.max_subquestions})",
                details={"count": len(texts), "subquestions": texts},
            )

        return [SubQuestion(index=i, text=text) for i, text in enumerate(texts, start=1)]


def decompose_question(
    question: str,
    chat_backend: ChatBackend,
    max_subquestions: int = DEFAULT_MAX_SUBQUESTIONS,
) -> List[SubQuestion]:
    """Decompose ``question`` into single-hop subquestions."""
    return QuestionDecomposer(chat_backend, max_subquestions=max_subquestions).decompose(question)
