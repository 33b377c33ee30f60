"""
LLM-prompted text transformations and their output parsing.
"""

from .prompts import (
    PromptTemplate,
    TEMPLATE_NAMES,
    load_template,
    render_input,
    template_hashes,
)
from .parsing import parse_string_array
from .base import ListTransform
from .generators import (
    AnswerableQuestionGenerator,
    ChunkTransform,
    Paraphraser,
    Summarizer,
    generate_answerable_questions,
    generate_paraphrases,
    generate_summaries,
    surrogate_id,
    transform_for,
)
from .decomposer import QuestionDecomposer, decompose_question
from .offline import OfflineTransformHandler

__all__ = [
    "PromptTemplate",
    "TEMPLATE_NAMES",
    "load_template",
    "render_input",
    "template_hashes",
    "parse_string_array",
    "ListTransform",
    "AnswerableQuestionGenerator",
    "ChunkTransform",
    "Paraphraser",
    "Summarizer",
    "generate_answerable_questions",
    "generate_paraphrases",
    "generate_summaries",
    "surrogate_id",
    "transform_for",
    "QuestionDecomposer",
    "decompose_question",
    "OfflineTransformHandler",
]
