"""Kernel backend chosen at import: the compiled extension when it was built,
otherwise the pure-Python fallback. Both expose the same functions and give
bit-identical results.

``FFSGA_KERNELS=python`` forces the fallback (useful for debugging).
"""

from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels


def _load() -> ModuleType:
    if os.environ.get("FFSGA_KERNELS", "").lower() == "python":
        return _pykernels
    try:
        from . import _ckernels
    except ImportError:
        return _pykernels
    return _ckernels


backend: ModuleType = _load()
BACKEND: str = backend.BACKEND


def compiled() -> ModuleType | None:
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


def make_problem(inst, mod: ModuleType | None = None):
    mod = mod or backend
    # stage-0 dispatch order: release time, then job index
    order0 = np.lexsort((np.arange(inst.num_jobs), inst.release))
    return mod.Problem(inst.machines, inst.proc, inst.release, inst.due, inst.weight, order0)
