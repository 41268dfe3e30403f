"""Pure-numpy implementations of the hot loops (reference and fallback)."""
from __future__ import annotations

import numpy as np


def sandwich_batch(E, W, R):
    """out[n] = E[n] @ W @ R[n] for a batch of effect rows and state columns."""
    E = np.asarray(E, dtype=complex)
    W = np.asarray(W, dtype=complex)
    R = np.asarray(R, dtype=complex)
    return np.einsum("ni,ij,nj->n", E, W, R)


def born_batch(E, W, R, k):
    """out[n] = |E[n] @ W @ R[n]|**k."""
    return np.abs(sandwich_batch(E, W, R)) ** float(k)


def choi_sum(mats, weights):
    """sum_i w_i v_i v_i^dagger with v_i the column-stacked transpose of mats[i]."""
    mats = np.asarray(mats, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    n, m, d = mats.shape
    vecs = mats.transpose(0, 2, 1).reshape(n, m * d)
    return (vecs.T * weights) @ vecs.conj()


def weighted_born_sum(S, ws, E, we, k):
    """sum_ij ws[i] we[j] |E[j] . S[i]|**k."""
    S = np.asarray(S, dtype=complex)
    E = np.asarray(E, dtype=complex)
    if S.shape[0] == 0 or E.shape[0] == 0:
        return 0.0
    amp = np.abs(E @ S.T) ** float(k)
    return float(np.asarray(we, dtype=float) @ amp @ np.asarray(ws, dtype=float))
