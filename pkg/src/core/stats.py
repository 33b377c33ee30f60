"""
Count statistics in the per-dataset table shape.

Used for answerable questions per chunk and subquestions per query.
"""

from typing import Any, Dict, Iterable, List, Tuple
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class CountStats:
    """Summary of a collection of non-negative counts."""

    count: int
    mean: float
    std: float
    min: int
    max: int
    histogram: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_counts(cls, counts: Iterable[int]) -> "CountStats":
        """
        Summarize counts.

        Args:
            counts: Observed counts

        Returns:
            CountStats with population standard deviation; all zeros when empty
        """
        values = np.asarray(list(counts), dtype=np.int64)
        if values.size == 0:
            return cls(count=0, mean=0.0, std=0.0, min=0, max=0, histogram={})

        histogram = dict(sorted(Counter(int(v) for v in values).items()))
        return cls(
            count=int(values.size),
            mean=float(values.mean()),
            std=float(values.std()),
            min=int(values.min()),
            max=int(values.max()),
            histogram=histogram,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert statistics to dictionary."""
        return {
            "count": self.count,
            "mean": self.mean,
            "std": self.std,
            "min": self.min,
            "max": self.max,
            "histogram": {str(k): v for k, v in self.histogram.items()},
        }


TABLE_HEADER = ("Source", "Mean", "Std Dev", "Min", "Max")


def format_stats_table(rows: List[Tuple[str, CountStats]]) -> str:
    """
    Render labelled statistics as a plain-text table.

    Args:
        rows: (label, stats) pairs

    Returns:
        Aligned table text
    """
    frame = pd.DataFrame(
        [
            {
                TABLE_HEADER[0]: label,
                "Mean": f"{stats.mean:.2f}",
                "Std Dev": f"{stats.std:.2f}",
                "Min": stats.min,
                "Max": stats.max,
            }
            for label, stats in rows
        ],
        columns=list(TABLE_HEADER),
    )
    return frame.to_string(index=False)
