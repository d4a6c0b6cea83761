"""Schrodingerisation emulator: warped-phase lattices, evolvers, dilations and cost formulas."""

import json

from ._core import (
    CflError,
    Grid,
    PGrid,
    SchemaError,
    SchroError,
    dense_expm,
    dilation_step,
    estimate_domain,
    fourier_matrix,
    heat_cost_ratio,
    heat_evolve,
    hermitian_split,
    ladder_evolve,
    ode_evolve,
)
from . import _core

__all__ = [
    "CflError",
    "Grid",
    "PGrid",
    "SchemaError",
    "SchroError",
    "dense_expm",
    "dilation_step",
    "estimate",
    "estimate_domain",
    "fourier_matrix",
    "heat_cost_ratio",
    "heat_evolve",
    "hermitian_split",
    "ladder_evolve",
    "ode_evolve",
    "run",
    "validate",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def estimate(query):
    """Cost estimate for a query dict such as {"method": "SchrHeat", "d": 1, ...}."""
    return _core.estimate_json(_text(query))


def validate(config):
    """Raises SchemaError when the experiment config is malformed."""
    _core.validate_json(_text(config))


def run(config, out_dir=""):
    """Runs an experiment config; returns {"exit_code", "message", "files"}."""
    return _core.run_json(_text(config), str(out_dir))
