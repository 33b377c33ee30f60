"""
Token-level answer F1.

Normalization: lowercase, strip punctuation, drop the articles a/an/the,
collapse whitespace.
"""

from typing import Optional, Sequence
from collections import Counter
import re

PUNCTUATION_PATTERN = re.compile(r"[^\w\s]")
ARTICLE_PATTERN = re.compile(r"\b(a|an|the)\b")
WHITESPACE_PATTERN = re.compile(r"\s+")


def normalize_answer(text: Optional[str]) -> str:
    """
    Normalize an answer string for comparison.

    Args:
        text: Raw answer

    Returns:
        Normalized string ("" for None)
    """
    if text is None:
        return ""
    text = str(text).lower()
    text = PUNCTUATION_PATTERN.sub("", text)
    text = ARTICLE_PATTERN.sub(" ", text)
    return WHITESPACE_PATTERN.sub(" ", text).strip()


def f1_score(prediction: str, gold: str) -> float:
    """F1 between one prediction and one gold answer."""
    pred_tokens = normalize_answer(prediction).split()
    gold_tokens = normalize_answer(gold).split()

    if not pred_tokens or not gold_tokens:
        return 1.0 if pred_tokens == gold_tokens else 0.0

    common = Counter(pred_tokens) & Counter(gold_tokens)
    overlap = sum(common.values())
    if overlap == 0:
        return 0.0

    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def qa_f1(prediction: str, gold_answers: Sequence[str]) -> float:
    """
    Best F1 of ``prediction`` over all gold answers.

    Args:
        prediction: Predicted answer
        gold_answers: Non-empty gold answers

    Returns:
        F1 in [0, 1]
    """
    if not gold_answers:
        return 0.0
    return max(f1_score(prediction, gold) for gold in gold_answers)
