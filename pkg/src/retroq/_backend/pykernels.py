"""Pure NumPy implementations of the hot numeric kernels.

The compiled extension (``_ckernels``) provides the same five functions with
identical semantics; this module is the always-available fallback and the
reference implementation the extension is tested against.

All kernels expect C-contiguous ``complex128`` arrays and perform no
validation of their own; callers in :mod:`retroq.linalg` and friends own the
error checking.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def kraus_apply(kraus: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Sum_k K_k rho K_k^dag for a (n, d_out, d_in) Kraus stack."""
    tmp = kraus @ rho
    return np.einsum("nij,nkj->ik", tmp, kraus.conj())


def kraus_adjoint_apply(kraus: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Sum_k K_k^dag y K_k for a (n, d_out, d_in) Kraus stack."""
    tmp = kraus.conj().transpose(0, 2, 1) @ y
    return np.einsum("nij,njk->ik", tmp, kraus)


def partial_trace(m: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Trace out every tensor factor of ``m`` not listed in ``keep``.

    ``m`` is square with side prod(dims); ``keep`` is a sorted tuple of factor
    indices. Returns a (K, K) matrix with K = prod(dims[i] for i in keep);
    tracing everything yields a 1x1 matrix.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    row = [chr(ord("a") + i) for i in range(n)]
    col = [chr(ord("a") + n + i) if i in keep else row[i] for i in range(n)]
    out_axes = [row[i] for i in keep] + [col[i] for i in keep]
    spec = "".join(row) + "".join(col) + "->" + "".join(out_axes)
    out = np.einsum(spec, t)
    k = 1
    for i in keep:
        k *= dims[i]
    return np.ascontiguousarray(out.reshape(k, k))


def petz_sandwich(sqrt_belief: np.ndarray, core: np.ndarray, dim_s: int, dim_r: int) -> np.ndarray:
    """sqrt_belief (core (x) identity_R) sqrt_belief on an S(x)R space, S major."""
    lifted = np.kron(core, np.eye(dim_r, dtype=np.complex128))
    return sqrt_belief @ lifted @ sqrt_belief


def signature_sum(sqrt_belief: np.ndarray, dim_s: int, dim_r: int) -> np.ndarray:
    """Sum_{k,k'} Tr_R[sqrt_belief (|k><k'| (x) 1_R) sqrt_belief] (x) |k><k'|.

    Returns the (d_S^2, d_S^2) operator on S(x)S', S major.
    """
    a = sqrt_belief.reshape(dim_s, dim_r, dim_s, dim_r)
    sig = np.einsum("ijkl,mlnj->iknm", a, a)
    d2 = dim_s * dim_s
    return np.ascontiguousarray(sig.reshape(d2, d2))
