"""
Prompt templates.

Templates are plain-text assets in ``prompts/``, one file per template.
Their sha256 hashes are pinned into index manifests and report
fingerprints so results record which prompt version produced them.
"""

from typing import Dict, Tuple
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
import hashlib

from ..utils.error_handler import ConfigurationError

PROMPT_DIR = Path(__file__).parent / "prompts"

TEMPLATE_NAMES: Tuple[str, ...] = (
    "aq",
    "summary",
    "paraphrase",
    "decompose",
    "answer",
    "answer_step",
    "answer_final",
)

# Delimiter placed before the chunk text in transform prompts.
INPUT_DELIMITER = "# Input Text\n"
QUESTION_DELIMITER = "# Question\n"
REPAIR_SUFFIX = "\n\nReturn only the array."


@dataclass(frozen=True)
class PromptTemplate:
    """An immutable named prompt."""

    name: str
    text: str

    @property
    def sha256(self) -> str:
        """Content hash of the template text."""
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


@lru_cache(maxsize=None)
def load_template(name: str) -> PromptTemplate:
    """
    Load a template by name.

    Args:
        name: One of TEMPLATE_NAMES

    Returns:
        PromptTemplate

    Raises:
        ConfigurationError: If the template is unknown or missing
    """
    if name not in TEMPLATE_NAMES:
        raise ConfigurationError(f"Unknown prompt template '{name}'")
    path = PROMPT_DIR / f"{name}.txt"
    try:
        text = path.read_text(encoding="utf-8").rstrip("\n")
    except OSError as e:
        raise ConfigurationError(f"Prompt template missing: {path}") from e
    return PromptTemplate(name=name, text=text)


def template_hashes(names: Tuple[str, ...] = TEMPLATE_NAMES) -> Dict[str, str]:
    """Hashes of the named templates, keyed by name."""
    return {name: load_template(name).sha256 for name in names}


def render_input(text: str) -> str:
    """User prompt carrying a chunk for a document-side transform."""
    return INPUT_DELIMITER + text
