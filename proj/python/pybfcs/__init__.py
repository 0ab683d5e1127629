"""Python bindings for the bfcs 1-bit compressive sensing library."""

import json
import os

from ._core import (
    DegenerateResult,
    DimensionError,
    age,
    backprojection_start,
    consistency_hamming,
    evaluate_metrics,
    gaussian_matrix,
    generate_signal,
    grid_search_bfcs,
    hard_threshold,
    mae,
    measure,
    mse,
    normalize,
    objective_value,
    per,
    project_nonneg,
    project_tv_ball,
    recover,
    sign_vector,
    snr_db,
    subgradient,
    tv,
    tv_prox,
)
from ._core import _run_experiment_json


def run_experiment(config, jobs=1):
    """Run an experiment grid.

    `config` is a dict in the bench JSON layout or a path to such a file.
    Returns a dict with "rows" and "aggregates" lists.
    """
    if isinstance(config, (str, os.PathLike)):
        with open(config) as fh:
            config = json.load(fh)
    return json.loads(_run_experiment_json(json.dumps(config), jobs))


__all__ = [
    "DegenerateResult",
    "DimensionError",
    "age",
    "backprojection_start",
    "consistency_hamming",
    "evaluate_metrics",
    "gaussian_matrix",
    "generate_signal",
    "grid_search_bfcs",
    "hard_threshold",
    "mae",
    "measure",
    "mse",
    "normalize",
    "objective_value",
    "per",
    "project_nonneg",
    "project_tv_ball",
    "recover",
    "run_experiment",
    "sign_vector",
    "snr_db",
    "subgradient",
    "tv",
    "tv_prox",
]
