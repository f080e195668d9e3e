"""Dense complex linear-algebra primitives.

Hermitian eigensystems, operator square roots, support pseudo-inverses,
partial traces and double-ket vectorization. Everything operates on plain
``numpy.ndarray`` matrices (complex128) and is pure and deterministic.

Comparisons are always Frobenius-norm based with explicit tolerances; the
support cutoff for rank decisions is relative and dimension-aware:
``tau = dim * 1e-12 * max_eigenvalue``.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from . import _backend
from .errors import DimensionMismatch, NotHermitian, NotPSD, ZeroOperator

HERMITIAN_TOL = 1e-10
SUPPORT_SCALE = 1e-12


def as_complex(a) -> np.ndarray:
    """Coerce to a C-contiguous complex128 array."""
    return np.ascontiguousarray(a, dtype=np.complex128)


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def frobenius(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def close(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """Frobenius-norm equality with explicit tolerance."""
    return frobenius_distance(a, b) <= tol


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a^dag) / 2."""
    return (a + dag(a)) / 2


def hermiticity_defect(m: np.ndarray) -> float:
    """Relative asymmetry ||m - m^dag||_F / ||m||_F (zero matrix counts as 0)."""
    scale = frobenius(m)
    if scale == 0.0:
        return 0.0
    return frobenius(m - dag(m)) / scale


def tensor(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of the given matrices, left factor major."""
    out = np.eye(1, dtype=np.complex128)
    for m in mats:
        out = np.kron(out, as_complex(m))
    return out


def support_cutoff(dim: int, lam_max: float) -> float:
    """Eigenvalue cutoff below which support is considered empty."""
    return dim * SUPPORT_SCALE * max(lam_max, 0.0)


class HermitianEigensystem(NamedTuple):
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dag(v)


def hermitian_eig(m: np.ndarray, tol: float = HERMITIAN_TOL) -> HermitianEigensystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises NotHermitian when the relative asymmetry exceeds ``tol``.
    """
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"relative asymmetry {defect:.3e} exceeds {tol:.1e}")
    w, v = np.linalg.eigh(hermitize(m))
    return HermitianEigensystem(w[::-1].copy(), np.ascontiguousarray(v[:, ::-1]))


def _clamped_spectrum(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Eigensystem of a PSD matrix with sub-cutoff eigenvalues clamped to zero.

    Returns (eigenvalues descending, eigenvectors, tau). Raises NotPSD when an
    eigenvalue lies below -tau. Clamping everything below tau (not just the
    negatives) keeps functions like sqrt from amplifying rank-deficiency noise:
    sqrt(1e-17) would otherwise pollute results at the 1e-9 scale.
    """
    w, v = hermitian_eig(m)
    tau = support_cutoff(m.shape[0], float(w[0]) if w.size else 0.0)
    if w.size and float(w[-1]) < -tau:
        raise NotPSD(f"eigenvalue {float(w[-1]):.3e} below -tau = {-tau:.3e}")
    return np.where(w > tau, w, 0.0), v, tau


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix (negatives within tau clamped)."""
    w, v, _ = _clamped_spectrum(m)
    return hermitize((v * np.sqrt(w)) @ dag(v))


def support_inv_sqrt(m: np.ndarray) -> np.ndarray:
    """Moore-Penrose style inverse square root on the support of ``m``.

    Eigenvalues above tau map to lambda^(-1/2), the rest to zero. Raises
    ZeroOperator when the support is empty.
    """
    return support_functions(m)[0]


def support_functions(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
    """Inverse square root on support, support projector, and full-rank flag.

    One eigendecomposition serves all three; raises as support_inv_sqrt.
    """
    w, v, tau = _clamped_spectrum(m)
    on = w > tau
    if not bool(on.any()):
        raise ZeroOperator("operator has empty support")
    inv = np.where(on, 1.0 / np.sqrt(np.where(on, w, 1.0)), 0.0)
    inv_sqrt = hermitize((v * inv) @ dag(v))
    vs = v[:, on]
    projector = hermitize(vs @ dag(vs))
    return inv_sqrt, projector, bool(on.all())


def partial_trace(m: np.ndarray, dims: Iterable[int], traced: Iterable[int]) -> np.ndarray:
    """Partial trace over the factors listed in ``traced``.

    ``dims`` is the tensor factorization of the square matrix ``m``; the
    result keeps the complementary factors in their original order. Tracing
    every factor yields a 1x1 matrix holding the full trace.
    """
    m = as_complex(m)
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"dimensions must be positive, got {dims}")
    side = 1
    for d in dims:
        side *= d
    if m.ndim != 2 or m.shape != (side, side):
        raise DimensionMismatch(f"matrix shape {m.shape} does not match dims {dims}")
    traced = sorted(set(int(i) for i in traced))
    if traced and (traced[0] < 0 or traced[-1] >= len(dims)):
        raise DimensionMismatch(f"traced indices {traced} out of range for {len(dims)} factors")
    keep = tuple(i for i in range(len(dims)) if i not in traced)
    return _backend.impl.partial_trace(m, dims, keep)


def double_ket(a: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Vectorize an operator on S(x)R into a ket on S(x)R(x)S'(x)R'.

    The component at basis index (i, j, k, l) is <i,j|a|k,l>; with row-major
    storage this is exactly the flattened matrix.
    """
    a = as_complex(a)
    dim_s, dim_r = int(dims[0]), int(dims[1])
    side = dim_s * dim_r
    if a.shape != (side, side):
        raise DimensionMismatch(f"matrix shape {a.shape} does not match split {dims}")
    return a.reshape(-1).copy()
