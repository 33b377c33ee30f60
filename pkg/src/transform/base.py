"""
Base class for prompted list transformations.

Every transform sends one fixed system prompt plus an input, expects a
string array back and gets exactly one repair retry when the output does
not parse.
"""

from typing import List
from abc import ABC, abstractmethod
import logging

from .parsing import parse_string_array
from .prompts import REPAIR_SUFFIX, PromptTemplate, load_template
from ..gateway.base import ChatBackend, ChatRequest
from ..utils.error_handler import ParseError, TransformError, ValidationError

logger = logging.getLogger(__name__)


class ListTransform(ABC):
    """
    Abstract base class for string-array transforms.

    Subclasses name their prompt template and say how the input text is
    rendered into the user prompt.
    """

    template_name: str = ""

    def __init__(
        self,
        chat: ChatBackend,
        temperature: float = 0.0,
        max_output_tokens: int = 1024,
    ):
        """
        Initialize transform.

        Args:
            chat: Chat backend serving the prompt
            temperature: Sampling temperature
            max_output_tokens: Output token limit
        """
        self.chat = chat
        self.temperature = temperature
        self.max_output_tokens = max_output_tokens

    @property
    def template(self) -> PromptTemplate:
        """The system prompt template."""
        return load_template(self.template_name)

    @abstractmethod
    def render_user_prompt(self, text: str) -> str:
        """
        Build the user prompt for one input.

        Args:
            text: Input text

        Returns:
            User prompt
        """
        pass

    def build_request(self, text: str, repair: bool = False) -> ChatRequest:
        """Request for ``text``; ``repair`` appends the array-only reminder."""
        user_prompt = self.render_user_prompt(text)
        if repair:
            user_prompt += REPAIR_SUFFIX
        return ChatRequest(
            system_prompt=self.template.text,
            user_prompt=user_prompt,
            temperature=self.temperature,
            max_output_tokens=self.max_output_tokens,
        )

    def run(self, text: str) -> List[str]:
        """
        Run the transform and parse its output.

        Args:
            text: Input text (non-empty)

        Returns:
            Parsed strings (possibly empty)

        Raises:
            ValidationError: On empty input
            TransformError: If the output does not parse after one retry
            BackendError: Backend failures propagate unchanged
        """
        if not text or not text.strip():
            raise ValidationError(f"{self.template_name} transform input must be non-empty")

        raw = self.chat.chat(self.build_request(text))
        try:
            return parse_string_array(raw)
        except ParseError as first_error:
            logger.warning(
                f"{self.template_name} output unparseable at byte {first_error.offset}, retrying once"
            )

        repaired = self.chat.chat(self.build_request(text, repair=True))
        try:
            return parse_string_array(repaired)
        except ParseError as e:
            raise TransformError(
                f"{self.template_name} output unparseable after retry: {e.message}",
                raw_output=repaired,
                original_error=e,
            ) from e
