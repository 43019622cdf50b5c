"""Polynomial pushforwards of log-concave measures.

Reports and measure descriptors are plain dicts with the same JSON schema as
the command-line tool.
"""

import json

from . import _core
from ._core import DegenerateInput, NumericalError, ParseError, canonical_polynomial, evaluate

FORMAT_VERSION = _core.format_version

__all__ = [
    "FORMAT_VERSION",
    "DegenerateInput",
    "NumericalError",
    "ParseError",
    "canonical_polynomial",
    "density_variance",
    "evaluate",
    "run",
    "sample",
    "skorohod_tv",
    "tv_histogram",
]


def run(config):
    """Execute a flat experiment config; returns the report with `exit_code` and `csv`."""
    return json.loads(_core.run_config(json.dumps(config)))


def sample(measure, n, seed):
    """(n, dim) array of draws from a measure descriptor."""
    return _core.sample_points(json.dumps(measure), n, seed)


def tv_histogram(a, b, bins=0):
    return json.loads(_core.tv_histogram(list(map(float, a)), list(map(float, b)), bins))


def skorohod_tv(measure, e):
    return _core.skorohod_tv(json.dumps(measure), list(map(float, e)))


def density_variance(measure):
    return json.loads(_core.density_variance(json.dumps(measure)))
