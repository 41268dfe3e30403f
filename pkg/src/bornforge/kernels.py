"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting ``BORNFORGE_PURE=1``
forces the numpy fallback.  ``BACKEND`` names the active choice.

The two reduction kernels are rank-n products in disguise, so above
``CROSSOVER`` multiply-adds the BLAS path in numpy beats plain loops; calls
that large are routed to the fallback even when the extension is loaded
(see benchmarks/bench_kernels.py).
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    if os.environ.get("BORNFORGE_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

CROSSOVER = 2048

sandwich_batch = _impl.sandwich_batch
born_batch = _impl.born_batch


def choi_sum(mats, weights):
    mats = np.asarray(mats)
    n, m, d = mats.shape
    impl = _impl if n * (m * d) ** 2 <= CROSSOVER else _kernels_py
    return impl.choi_sum(mats, weights)


def weighted_born_sum(S, ws, E, we, k):
    S, E = np.asarray(S), np.asarray(E)
    work = S.shape[0] * E.shape[0] * (S.shape[1] if S.ndim == 2 else 1)
    impl = _impl if work <= CROSSOVER else _kernels_py
    return impl.weighted_born_sum(S, ws, E, we, k)


def available_backends() -> dict:
    """Map of backend name to module for every importable implementation."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
