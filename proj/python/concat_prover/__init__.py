"""Python access to the concatenation prover."""

import json

from ._core import (
    StepFailed,
    __version__,
    continued_fraction,
    eval_interval,
    fib,
    is_fibonacci,
    lucas,
    pisano_period,
    search,
)
from . import _core


def certify(theorem, precision_cap=1048576, threads=0):
    """Run the proof replay and return the certificate as a dict. Raises StepFailed."""
    return json.loads(_core.certify_json(theorem, precision_cap, threads))


def check(certificate, precision_cap=1048576):
    """Replay a certificate (dict or JSON text) with the independent checker."""
    text = certificate if isinstance(certificate, str) else json.dumps(certificate)
    return _core.check_json(text, precision_cap)


def concatenation_values(eq, m_max=200, k_max=200):
    return sorted({r["value"] for r in search(eq, m_max, k_max)})


__all__ = [
    "StepFailed",
    "__version__",
    "certify",
    "check",
    "concatenation_values",
    "continued_fraction",
    "eval_interval",
    "fib",
    "is_fibonacci",
    "lucas",
    "pisano_period",
    "search",
]
