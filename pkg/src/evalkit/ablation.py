"""
Ablation grids.

A grid file holds either a JSON list of experiment configs or
``{"base": {...}, "axes": {"pipeline.k2": [5, 7], ...}}``; axes expand as
a cartesian product in declaration order (first axis slowest).
"""

from typing import Any, Dict, List, Optional, Sequence, Union
from dataclasses import dataclass
from pathlib import Path
import copy
import itertools
import json
import logging

import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from .cache import IndexCache
from .experiment import ExperimentConfig, ExperimentRunner, Report
from ..gateway.base import Backends
from ..utils.error_handler import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass
class AblationResult:
    """Reports in grid order plus their comparison table."""

    reports: List[Report]
    table: str


def _set_path(target: Dict[str, Any], dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    node = target
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigurationError(f"Grid axis '{dotted}' crosses a non-object field")
    node[keys[-1]] = value


def expand_axes(base: Dict[str, Any], axes: Dict[str, Sequence[Any]]) -> List[Dict[str, Any]]:
    """
    Cartesian product of axis values applied to ``base``.

    Each expanded config gets a name built from its axis values unless the
    base names it explicitly per axis.
    """
    if not axes:
        return [copy.deepcopy(base)]
    names = list(axes)
    for name in names:
        if not isinstance(axes[name], list) or not axes[name]:
            raise ConfigurationError(f"Grid axis '{name}' must be a non-empty list")

    configs = []
    for values in itertools.product(*(axes[name] for name in names)):
        config = copy.deepcopy(base)
        for name, value in zip(names, values):
            _set_path(config, name, value)
        label = ",".join(f"{name}={value}" for name, value in zip(names, values))
        config["name"] = f"{base.get('name', 'grid')}[{label}]"
        configs.append(config)
    return configs


def parse_grid(data: Any, base_dir: Optional[Path] = None) -> List[ExperimentConfig]:
    """
    Build experiment configs from decoded grid data.

    Relative dataset paths resolve against ``base_dir``.
    """
    if isinstance(data, list):
        raw_configs = data
    elif isinstance(data, dict) and "base" in data:
        raw_configs = expand_axes(data["base"], data.get("axes", {}))
    else:
        raise ConfigurationError("Grid must be a list of configs or an object with 'base' and 'axes'")

    configs = []
    for i, raw in enumerate(raw_configs):
        if not isinstance(raw, dict):
            raise ConfigurationError(f"Grid entry {i} must be an object")
        raw = dict(raw)
        if base_dir is not None and "dataset" in raw and not Path(raw["dataset"]).is_absolute():
            raw["dataset"] = str(base_dir / raw["dataset"])
        try:
            configs.append(ExperimentConfig.model_validate(raw))
        except PydanticValidationError as e:
            raise ConfigurationError(f"Grid entry {i} is invalid: {e}") from e
    return configs


def load_grid(path: Union[str, Path]) -> List[ExperimentConfig]:
    """Read a grid file."""
    grid_path = Path(path)
    try:
        data = json.loads(grid_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Cannot read grid {path}: {e}") from e
    return parse_grid(data, base_dir=grid_path.parent)


def _flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{path}."))
        else:
            flat[path] = value
    return flat


def varied_fields(configs: Sequence[ExperimentConfig]) -> List[str]:
    """Result-affecting fields whose value differs across ``configs``, in field order."""
    flats = [_flatten(cfg.result_fields()) for cfg in configs]
    if not flats:
        return []
    return [key for key in flats[0] if any(flat.get(key) != flats[0][key] for flat in flats[1:])]


def comparison_table(configs: Sequence[ExperimentConfig], reports: Sequence[Report]) -> str:
    """Plain-text table keyed by the varied dimensions, one row per config."""
    if not reports:
        return ""
    varied = varied_fields(configs)
    rows = []
    for cfg, report in zip(configs, reports):
        flat = _flatten(cfg.result_fields())
        row: Dict[str, Any] = {"Name": cfg.name} if not varied else {}
        row.update({key: flat[key] for key in varied})
        row["F1"] = f"{report.aggregate_f1:.4f}"
        row["Records"] = len(report.records)
        row["Errors"] = report.error_count
        rows.append(row)
    return pd.DataFrame(rows).to_string(index=False)


def run_ablation_grid(
    grid: Sequence[ExperimentConfig],
    backends: Backends,
    cache: Optional[IndexCache] = None,
) -> AblationResult:
    """
    Run every config in order with one shared index cache.

    Every config runs on the same backend bundle, so a grid whose configs
    name different backends is rejected.

    Args:
        grid: Experiment configs
        backends: Backend bundle shared by all runs
        cache: Index cache (a fresh one if None)

    Returns:
        AblationResult with reports in grid order

    Raises:
        ConfigurationError: An invalid config, or configs naming different backends
    """
    if cache is None:
        cache = IndexCache()
    for cfg in grid:
        cfg.check()
    kinds = sorted({cfg.backend.value for cfg in grid})
    if len(kinds) > 1:
        raise ConfigurationError(
            f"Grid configs name different backends ({', '.join(kinds)}); "
            "run one grid per backend"
        )

    reports = []
    for cfg in grid:
        reports.append(ExperimentRunner(cfg, backends, cache).run())
    logger.info(f"Ablation grid finished: {len(reports)} runs, {cache.builds} index builds")
    return AblationResult(reports=reports, table=comparison_table(grid, reports))
