"""
Offline heuristic transforms.

Rule-based stand-ins for the document-side prompts and the decomposition
prompt, so indexes can be built without a model. Each rule reads the
request's input and returns a JSON string array, exactly like a model
following the prompt would.
"""

from typing import Callable, Dict, List, Optional
from collections import Counter
import json
import re

from .prompts import INPUT_DELIMITER, QUESTION_DELIMITER, REPAIR_SUFFIX, load_template
from ..gateway.base import ChatRequest

SENTENCE_PATTERN = re.compile(r"(?<=[.!?])\s+")
WORD_PATTERN = re.compile(r"[^\W\d_]+")
MAX_VARIANTS = 10


def split_sentences(text: str, min_words: int = 3) -> List[str]:
    """
    Split text into sentences with at least ``min_words`` alphabetic words.

    Numeric-only fragments are dropped, so tables of figures yield nothing.
    """
    sentences = []
    for sentence in SENTENCE_PATTERN.split(text.strip()):
        sentence = " ".join(sentence.split())
        if len(WORD_PATTERN.findall(sentence)) >= min_words:
            sentences.append(sentence)
    return sentences


def _strip_input(user_prompt: str, delimiter: str) -> Optional[str]:
    if user_prompt.endswith(REPAIR_SUFFIX):
        user_prompt = user_prompt[: -len(REPAIR_SUFFIX)]
    if not user_prompt.startswith(delimiter):
        return None
    return user_prompt[len(delimiter) :]


def heuristic_questions(text: str) -> List[str]:
    """One question per informative sentence."""
    questions = []
    for sentence in split_sentences(text):
        body = sentence.rstrip(".!?")
        questions.append(f"Which passage states that {body[0].lower()}{body[1:]}?")
    return questions


def heuristic_summaries(text: str) -> List[str]:
    """Growing extracts of the highest-scoring sentences, in text order."""
    sentences = split_sentences(text)
    if not sentences:
        return []

    word_freq = Counter(w.lower() for w in WORD_PATTERN.findall(text))

    def score(sentence: str) -> float:
        words = [w.lower() for w in WORD_PATTERN.findall(sentence)]
        return sum(word_freq[w] for w in words) / len(words)

    ranked = sorted(range(len(sentences)), key=lambda i: (-score(sentences[i]), i))
    summaries = []
    for size in range(1, min(len(sentences), MAX_VARIANTS) + 1):
        chosen = sorted(ranked[:size])
        summaries.append(" ".join(sentences[i] for i in chosen))
    return summaries


def heuristic_paraphrases(text: str) -> List[str]:
    """Sentence-order rotations of the text."""
    sentences = split_sentences(text)
    if not sentences:
        return []
    return [
        " ".join(sentences[shift:] + sentences[:shift])
        for shift in range(min(len(sentences), MAX_VARIANTS))
    ]


def identity_decomposition(question: str) -> List[str]:
    """The question itself as its only subquestion."""
    return [question.strip()]


class OfflineTransformHandler:
    """
    Mock chat handler answering transform prompts heuristically.

    Returns None for any other prompt so the caller's lookup continues
    (answer generation is never fabricated).
    """

    def __init__(self) -> None:
        self._rules: Dict[str, Callable[[str], List[str]]] = {
            load_template("aq").text: heuristic_questions,
            load_template("summary").text: heuristic_summaries,
            load_template("paraphrase").text: heuristic_paraphrases,
        }
        self._decompose_prompt = load_template("decompose").text

    def __call__(self, request: ChatRequest) -> Optional[str]:
        if request.system_prompt == self._decompose_prompt:
            question = _strip_input(request.user_prompt, QUESTION_DELIMITER)
            if question is None:
                return None
            return json.dumps(identity_decomposition(question))

        rule = self._rules.get(request.system_prompt)
        if rule is None:
            return None
        text = _strip_input(request.user_prompt, INPUT_DELIMITER)
        if text is None:
            return None
        return json.dumps(rule(text))
