"""Exact computations on Z_p^d towers of graphs.

Spec arguments may be JSON text or an already-parsed dict.
"""

import json as _json

from . import _core
from ._core import (
    DisconnectedError,
    GuardrailError,
    NonPlanarError,
    NonTorsionError,
    SpecError,
    equal_up_to_unit,
    mu_lambda,
    smith_normal_form,
)

__all__ = [
    "DisconnectedError",
    "GuardrailError",
    "NonPlanarError",
    "NonTorsionError",
    "SpecError",
    "char_element",
    "char_jacobian",
    "equal_up_to_unit",
    "jacobian",
    "kappa",
    "layer",
    "mu_lambda",
    "ord_series",
    "run",
    "smith_normal_form",
]


def _text(spec):
    return spec if isinstance(spec, str) else _json.dumps(spec)


def layer(spec, n=0):
    return _core.layer(_text(spec), n)


def kappa(spec, n=0):
    return _core.kappa(_text(spec), n)


def jacobian(spec, n=0):
    return _core.jacobian(_text(spec), n)


def char_element(spec):
    return _core.char_element(_text(spec))


def char_jacobian(spec):
    return _core.char_jacobian(_text(spec))


def ord_series(spec, n_max):
    return _core.ord_series(_text(spec), n_max)


def run(*args):
    """CLI in-process: run("layer", "spec.json", "--n", "2") -> (code, out, err)."""
    return _core.run([str(a) for a in args])
