"""
Evaluation: dataset loading, answer F1, experiments and ablation grids.
"""

from .metrics import f1_score, normalize_answer, qa_f1
from .dataset import dataset_sha256, load_dataset, parse_dataset_record
from .cache import IndexCache, cache_key
from .experiment import (
    ExperimentConfig,
    ExperimentRunner,
    Report,
    decomposition_stats,
    experiment_fingerprint,
    run_experiment,
)
from .ablation import (
    AblationResult,
    comparison_table,
    expand_axes,
    load_grid,
    parse_grid,
    run_ablation_grid,
    varied_fields,
)

__all__ = [
    "f1_score",
    "normalize_answer",
    "qa_f1",
    "dataset_sha256",
    "load_dataset",
    "parse_dataset_record",
    "IndexCache",
    "cache_key",
    "ExperimentConfig",
    "ExperimentRunner",
    "Report",
    "decomposition_stats",
    "experiment_fingerprint",
    "run_experiment",
    "AblationResult",
    "comparison_table",
    "expand_axes",
    "load_grid",
    "parse_grid",
    "run_ablation_grid",
    "varied_fields",
]
