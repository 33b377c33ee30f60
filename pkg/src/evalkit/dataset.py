"""LongBench-style dataset loading."""

from typing import Any, Dict, List, Union
from pathlib import Path
import hashlib
import json
import logging

from ..core.base import EvalRecord
from ..utils.error_handler import DatasetError, ValidationError

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("input", "context", "answers")


def dataset_sha256(path: Union[str, Path]) -> str:
    """Hash of the dataset file bytes."""
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as e:
        raise DatasetError(f"Cannot read dataset {path}: {e}") from e


def parse_dataset_record(line: str, line_no: int) -> EvalRecord:
    """
    Parse one dataset line.

    Records carry ``input`` (question), ``context`` and ``answers``; the
    record id comes from ``_id`` or ``id`` and defaults to the line number.

    Raises:
        DatasetError: Naming the line
    """
    try:
        record: Any = json.loads(line)
    except json.JSONDecodeError as e:
        raise DatasetError(f"Line {line_no}: invalid JSON ({e.msg})", line=line_no) from e
    if not isinstance(record, dict):
        raise DatasetError(f"Line {line_no}: record must be an object", line=line_no)

    for name in REQUIRED_FIELDS:
        if name not in record:
            raise DatasetError(f"Line {line_no}: missing field '{name}'", line=line_no)

    answers = record["answers"]
    if not isinstance(answers, list) or not all(isinstance(a, str) for a in answers):
        raise DatasetError(f"Line {line_no}: 'answers' must be a list of strings", line=line_no)
    if not isinstance(record["input"], str) or not isinstance(record["context"], str):
        raise DatasetError(f"Line {line_no}: 'input' and 'context' must be strings", line=line_no)

    record_id = record.get("_id", record.get("id", f"line-{line_no:06d}"))
    try:
        return EvalRecord(
            record_id=str(record_id),
            question=record["input"],
            context=record["context"],
            gold_answers=list(answers),
        )
    except ValidationError as e:
        raise DatasetError(f"Line {line_no}: {e.message}", line=line_no) from e


def load_dataset(path: Union[str, Path], limit: int = 0) -> List[EvalRecord]:
    """
    Load evaluation records, one per non-blank line, in file order.

    Contexts are never truncated.

    Args:
        path: Dataset file
        limit: Keep only the first ``limit`` records (0 keeps all)

    Returns:
        EvalRecords
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").split("\n")
    except OSError as e:
        raise DatasetError(f"Cannot read dataset {path}: {e}") from e

    records: List[EvalRecord] = []
    seen: Dict[str, int] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = parse_dataset_record(line, line_no)
        if record.record_id in seen:
            raise DatasetError(
                f"Line {line_no}: duplicate record id '{record.record_id}' "
                f"(first seen on line {seen[record.record_id]})",
                line=line_no,
            )
        seen[record.record_id] = line_no
        records.append(record)
        if limit and len(records) >= limit:
            break

    logger.info(f"Loaded {len(records)} records from {path}")
    return records
