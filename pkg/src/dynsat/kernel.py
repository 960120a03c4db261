"""Kernel backend selection.

The compiled ``_ckernel`` is used when it is importable; otherwise, or when
``DYNSAT_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_pykernel`` is used. Both expose the same functions and constants.
"""
from __future__ import annotations

import os
from array import array

from . import _pykernel
from ._pykernel import (  # noqa: F401  (re-exported constants)
    BUDGET_EXHAUSTED,
    C_BAD,
    C_BEST,
    C_BEST_FLIP,
    C_FLIP,
    C_FLIPS,
    C_HARD_N,
    C_SOFT_N,
    C_TRACE_N,
    C_TRY,
    INTERRUPTED,
    N_CTR,
    SATISFIED,
    TARGET_REACHED,
    TRACE_FLIPS,
    TRACE_IMPROVEMENTS,
    TRACE_NONE,
    YIELDED,
)

STATUS_NAMES = {
    TARGET_REACHED: "target_reached",
    BUDGET_EXHAUSTED: "budget_exhausted",
    INTERRUPTED: "interrupted",
    SATISFIED: "satisfied",
}


def _load_compiled():
    try:
        from . import _ckernel
    except ImportError:
        return None
    return _ckernel


compiled = None if os.environ.get("DYNSAT_PURE_PYTHON") else _load_compiled()
active = compiled if compiled is not None else _pykernel
BACKEND = active.BACKEND


def backends():
    """All importable kernel modules, pure Python first."""
    mods = [_pykernel]
    c = _load_compiled()
    if c is not None:
        mods.append(c)
    return mods


class Trace:
    """Output buffers the kernel fills while tracing."""

    def __init__(self, capacity: int, num_vars: int = -1):
        self.capacity = capacity
        self.flip = array("q", bytes(8 * capacity))
        self.cost = array("q", bytes(8 * capacity))
        self.time = array("d", bytes(8 * capacity))
        width = num_vars + 1 if num_vars >= 0 else 0
        self.width = width
        self.vals = array("B", bytes(width * capacity))


NO_TRACE = Trace(0)
