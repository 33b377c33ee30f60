"""
Corpus loading.

Reads the corpus line-record format: one JSON object per line with string
fields ``id`` (required), ``title`` (optional) and ``text`` (required).
"""

from typing import Any, Dict, List, Set, Union
from pathlib import Path
import json
import logging

from ..core.base import Document
from ..utils.error_handler import CorpusError

logger = logging.getLogger(__name__)


def load_corpus(path: Union[str, Path]) -> List[Document]:
    """
    Load documents from a line-record file.

    Args:
        path: Corpus file path

    Returns:
        Documents in file order

    Raises:
        CorpusError: On unreadable files, malformed records or duplicate ids
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusError(f"Cannot read corpus {path}: {e}", original_error=e) from e

    documents: List[Document] = []
    seen: Set[str] = set()

    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        document = parse_corpus_record(line, line_no)
        if document.doc_id in seen:
            raise CorpusError(f"Duplicate doc_id '{document.doc_id}' at line {line_no}", line=line_no)
        seen.add(document.doc_id)
        documents.append(document)

    logger.info(f"Loaded {len(documents)} documents from {path}")
    return documents


def parse_corpus_record(line: str, line_no: int) -> Document:
    """
    Parse one corpus line.

    Args:
        line: Raw line
        line_no: 1-based line number for error messages

    Returns:
        Document

    Raises:
        CorpusError: If the record is malformed
    """
    try:
        record: Any = json.loads(line)
    except json.JSONDecodeError as e:
        raise CorpusError(f"Malformed record at line {line_no}: {e.msg}", line=line_no) from e

    if not isinstance(record, dict):
        raise CorpusError(f"Record at line {line_no} is not an object", line=line_no)

    doc_id = _string_field(record, "id", line_no, required=True)
    text = _string_field(record, "text", line_no, required=True)
    title = _string_field(record, "title", line_no, required=False)

    if not doc_id or not text:
        raise CorpusError(f"Record at line {line_no} has an empty id or text", line=line_no)

    return Document(doc_id=doc_id, text=text, title=title)


def _string_field(record: Dict[str, Any], name: str, line_no: int, required: bool) -> Any:
    value = record.get(name)
    if value is None:
        if required:
            raise CorpusError(f"Record at line {line_no} is missing '{name}'", line=line_no)
        return None
    if not isinstance(value, str):
        raise CorpusError(f"Field '{name}' at line {line_no} must be a string", line=line_no)
    return value
