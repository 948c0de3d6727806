"""Operator-coefficient non-commutative polynomial calculus on matrix models.

The heavy lifting lives in the C++ extension ``ncpi._core``; this package
adds a small convenience wrapper for suite runs.
"""

import json as _json

from ._core import (
    CapError,
    Model,
    ParseError,
    Poly,
    Tensor,
    __version__,
    bimodule_act,
    check_kernel,
    check_lemma4,
    check_poincare,
    check_telescoping,
    growth_constant,
    run_suite_json,
    sharp,
    sobolev_norm,
    x_commutator_tensor,
)

__all__ = [
    "CapError",
    "Model",
    "ParseError",
    "Poly",
    "Tensor",
    "__version__",
    "bimodule_act",
    "check_kernel",
    "check_lemma4",
    "check_poincare",
    "check_telescoping",
    "growth_constant",
    "run_suite",
    "run_suite_json",
    "sharp",
    "sobolev_norm",
    "x_commutator_tensor",
]


def run_suite(**config):
    """Run the verification suite and return the report as a dict.

    Keyword arguments mirror the suite config JSON: ``seed``, ``trials``,
    ``dim_range``, ``B`` (e.g. ``{"type": "mixed"}``), ``max_degree``,
    ``max_terms``, ``coeff_scale``, ``R_factor``, ``tolerance``.
    """
    return _json.loads(run_suite_json(_json.dumps(config)))
