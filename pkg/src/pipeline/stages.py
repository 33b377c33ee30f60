"""Stage timing and error labelling for the query pipeline."""

from typing import Iterator, Optional
from contextlib import contextmanager
import time

from ..core.base import Trace
from ..utils.error_handler import AqragError, PipelineError

DECOMPOSE = "decompose"
RETRIEVE = "retrieve"
RERANK = "rerank"
GENERATE = "generate"


@contextmanager
def stage(trace: Optional[Trace], name: str, subquestion_index: Optional[int] = None) -> Iterator[None]:
    """
    Time a stage into ``trace`` and label its failures.

    Library errors are re-raised as PipelineError carrying the stage name
    (and subquestion index when given); PipelineErrors pass through.
    """
    started = time.perf_counter()
    try:
        yield
    except PipelineError:
        raise
    except AqragError as e:
        raise PipelineError(
            e.message, stage=name, subquestion_index=subquestion_index, original_error=e
        ) from e
    finally:
        if trace is not None:
            trace.timings[name] = trace.timings.get(name, 0.0) + (time.perf_counter() - started)
