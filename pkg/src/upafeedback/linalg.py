"""Complex dense linear-algebra primitives shared by the channel, quantizer
and precoding code.

All functions take and return plain ``numpy`` arrays with ``complex128``
entries and are pure, so they are safe to call from concurrent Monte-Carlo
workers.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "NumericsError",
    "gram_solve",
    "hermitian_sqrt",
    "kronecker",
    "min_singular_value",
]

# Relative tolerance for accepting a matrix as Hermitian / PSD.  Round-off in
# the correlation-model evaluation produces asymmetries and negative
# eigenvalues at the 1e-15 level; anything beyond 1e-10 signals a real bug in
# the caller.
_HERMITIAN_RTOL = 1e-10
_EIGENVALUE_RTOL = 1e-10


class NumericsError(ValueError):
    """An input violates a numerical precondition (shape, symmetry, rank)."""


def _as_complex_matrix(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise NumericsError(f"{name} must be a 2-D array, got shape {a.shape}")
    return a


def hermitian_sqrt(r) -> np.ndarray:
    """Hermitian PSD square root: returns S with S @ S^H == r.

    Computed by eigendecomposition with tiny negative eigenvalues (round-off
    from a PSD construction) clamped to zero.  Raises :class:`NumericsError`
    for non-square input, Hermitian violations beyond 1e-10 relative, or
    eigenvalues below -1e-10 relative to the largest one.
    """
    r = _as_complex_matrix(r, "r")
    n, m = r.shape
    if n != m:
        raise NumericsError(f"hermitian_sqrt needs a square matrix, got {n}x{m}")
    scale = np.linalg.norm(r)
    if scale > 0 and np.linalg.norm(r - r.conj().T) > _HERMITIAN_RTOL * scale:
        raise NumericsError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(r)
    w_max = float(w[-1]) if n else 0.0
    if w_max > 0 and w[0] < -_EIGENVALUE_RTOL * w_max:
        raise NumericsError(
            f"matrix has eigenvalue {w[0]:.3e} below -{_EIGENVALUE_RTOL:.0e} "
            f"relative; not a valid correlation matrix"
        )
    w = np.clip(w, 0.0, None)
    s = (v * np.sqrt(w)) @ v.conj().T
    # Symmetrize: S is Hermitian in exact arithmetic, keep it that way.
    return 0.5 * (s + s.conj().T)


def kronecker(a, b) -> np.ndarray:
    """Kronecker product of two vectors: entry (k*len(b) + l) = a[k] * b[l]."""
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    return np.kron(a, b)


def min_singular_value(a) -> float:
    """Smallest singular value of a (rows >= cols) complex matrix."""
    a = _as_complex_matrix(a, "a")
    if a.shape[0] < a.shape[1]:
        raise NumericsError(f"expected rows >= cols, got shape {a.shape}")
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def gram_solve(h) -> np.ndarray:
    """Right pseudo-inverse factor H (H^H H)^{-1} for a tall full-rank H.

    The Gram matrix H^H H is Hermitian positive definite under the rank
    precondition, so a Cholesky solve is used instead of an explicit inverse.
    Raises :class:`NumericsError` when sigma_min(H) <= 1e-8 * sigma_max(H);
    callers treat that as a discarded realization.
    """
    h = _as_complex_matrix(h, "h")
    sv = np.linalg.svd(h, compute_uv=False)
    if sv[-1] <= 1e-8 * sv[0]:
        raise NumericsError(
            f"rank-deficient input: sigma_min/sigma_max = {sv[-1] / sv[0]:.3e}"
        )
    gram = h.conj().T @ h
    # W^H = G^{-1} H^H  =>  W = (cho_solve(G, H^H))^H
    factor = scipy.linalg.cho_factor(gram, lower=True)
    return scipy.linalg.cho_solve(factor, h.conj().T).conj().T
