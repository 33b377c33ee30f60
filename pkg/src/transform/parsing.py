"""
Parsing of string-array model outputs.

Models are asked for ``["...", "..."]`` but often wrap it in markdown
fences or prose, or answer with a Python list literal.
"""

from typing import Any, List, Optional
import ast
import json

from ..utils.error_handler import ParseError

CLOSING = {"[": "]", "{": "}"}


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def _matching_close(text: str, start: int) -> Optional[int]:
    """Index of the bracket closing the ``[`` or ``{`` at ``start``, skipping quoted text."""
    opener = text[start]
    closer = CLOSING[opener]
    depth = 0
    quote: Optional[str] = None
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if quote is not None:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == quote:
                quote = None
            continue
        if ch in ('"', "'"):
            quote = ch
        elif ch == opener:
            depth += 1
        elif ch == closer:
            depth -= 1
            if depth == 0:
                return i
    return None


def _load_literal(segment: str) -> Any:
    try:
        return json.loads(segment)
    except json.JSONDecodeError:
        pass
    try:
        return ast.literal_eval(segment)
    except (ValueError, SyntaxError):
        return None


def parse_string_array(raw: str) -> List[str]:
    """
    Extract a list of strings from model output.

    Scans past surrounding prose and fence markers for the first top-level
    array literal and parses it; arrays nested inside an object do not
    count. Element text is never rewritten beyond whitespace trimming, and
    empty strings are dropped.

    Args:
        raw: Model output

    Returns:
        Parsed strings

    Raises:
        ParseError: If no top-level array is found or an element is not a string
    """
    first_bracket: Optional[int] = None
    first_object: Optional[int] = None
    position = 0
    while position < len(raw):
        ch = raw[position]
        if ch == "{":
            end = _matching_close(raw, position)
            if end is not None:
                if first_object is None:
                    first_object = position
                position = end + 1
                continue
        elif ch == "[":
            if first_bracket is None:
                first_bracket = position
            end = _matching_close(raw, position)
            if end is not None:
                value = _load_literal(raw[position : end + 1])
                if isinstance(value, list):
                    for element in value:
                        if not isinstance(element, str):
                            raise ParseError(
                                f"Array element {element!r} is not a string",
                                offset=_byte_offset(raw, position),
                            )
                    return [element.strip() for element in value if element.strip()]
        position += 1

    if first_bracket is None and first_object is not None:
        raise ParseError("Expected an array, found an object", offset=_byte_offset(raw, first_object))
    if first_bracket is None:
        raise ParseError("No array literal found", offset=_byte_offset(raw, len(raw)))
    raise ParseError("Unparseable array literal", offset=_byte_offset(raw, first_bracket))
