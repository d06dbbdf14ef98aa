"""Dense Hermitian linear algebra used by every other module.

All functions take and return plain complex ndarrays. Validation is explicit
and tolerance-driven; anything that fails a structural check raises InputError
rather than silently symmetrizing.
"""
from __future__ import annotations

import numpy as np

from .config import EQ_TOL, HERM_TOL
from .errors import InputError


def as_complex_matrix(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"{name} must be square 2-d, got shape {arr.shape}")
    return arr


def herm_defect(m: np.ndarray) -> float:
    """Largest entry of |M - M^dagger|."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m: np.ndarray, tol: float = HERM_TOL, name: str = "matrix") -> np.ndarray:
    arr = as_complex_matrix(m, name)
    defect = herm_defect(arr)
    if defect > tol:
        raise InputError(f"{name} not Hermitian: defect {defect:.3e} > {tol:.1e}")
    return arr


def hermitize(m: np.ndarray) -> np.ndarray:
    """(M + M^dagger)/2 — used on results that are Hermitian in exact arithmetic."""
    return (m + m.conj().T) / 2.0


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, in the given order."""
    if not factors:
        raise InputError("tensor needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def eig_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns of a Hermitian matrix."""
    arr = check_hermitian(m, tol)
    vals, vecs = np.linalg.eigh(hermitize(arr))
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def min_eig(m: np.ndarray) -> float:
    """Smallest eigenvalue; input is Hermitized without validation (internal use)."""
    if m.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(hermitize(m))[0])


def max_eig(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitize(m))[-1]) if m.shape[0] else 0.0


def check_psd(m: np.ndarray, tol: float = HERM_TOL, name: str = "matrix") -> np.ndarray:
    arr = check_hermitian(m, tol, name)
    low = min_eig(arr)
    if low < -tol:
        raise InputError(f"{name} not PSD: min eigenvalue {low:.3e} < -{tol:.1e}")
    return arr


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    arr = np.asarray(m, dtype=complex)
    if arr.size == 0:
        return 0.0
    return float(np.linalg.norm(arr, 2))


def positive_part(m: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    """Spectral projection onto nonnegative eigenvalues times the matrix.

    Satisfies M = positive_part(M) - positive_part(-M) up to the eigensolver's
    accuracy, with both parts PSD.
    """
    vals, vecs = eig_hermitian(m, tol)
    clipped = np.clip(vals, 0.0, None)
    return hermitize((vecs * clipped) @ vecs.conj().T)


def loewner_leq(x: np.ndarray, y: np.ndarray, tol: float = EQ_TOL) -> bool:
    """True iff X <= Y in the Loewner order, up to -tol on the smallest eigenvalue."""
    xa = check_hermitian(x, max(tol, HERM_TOL), "X")
    ya = check_hermitian(y, max(tol, HERM_TOL), "Y")
    if xa.shape != ya.shape:
        raise InputError(f"shape mismatch {xa.shape} vs {ya.shape}")
    return min_eig(ya - xa) >= -tol


def partial_trace_matrix(
    m: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]
) -> np.ndarray:
    """Partial trace of a square matrix over the factors not listed in `keep`.

    `dims` are the tensor-factor dimensions in order; `keep` are factor indices
    to retain, and the result orders them as in `keep` (which must be ascending).
    Works on arbitrary matrices, not only density operators.
    """
    arr = as_complex_matrix(m)
    total = int(np.prod(dims))
    if arr.shape[0] != total:
        raise InputError(f"matrix dim {arr.shape[0]} != product of dims {dims}")
    if list(keep) != sorted(set(keep)):
        raise InputError("keep indices must be strictly ascending")
    if any(i < 0 or i >= len(dims) for i in keep):
        raise InputError(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = arr.reshape(dims + dims)
    # Contract each traced factor: pair axis i (ket) with axis i+n (bra).
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(traced):
        # Axes shift left as earlier factors are traced out.
        offset = sum(1 for j in traced[:count] if j < i)
        ket = i - offset
        bra = ket + (n - count)
        t = np.trace(t, axis1=ket, axis2=bra)
    kept_dim = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(kept_dim, kept_dim)


def apply_kraus(m: np.ndarray, kraus: list[np.ndarray]) -> np.ndarray:
    """sum_k K m K^dagger. Rectangular Kraus operators are allowed."""
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    if not ops:
        raise InputError("empty Kraus list")
    d_in = ops[0].shape[1]
    d_out = ops[0].shape[0]
    for k in ops:
        if k.shape != (d_out, d_in):
            raise InputError("Kraus operators must share one shape")
    comp = sum(k.conj().T @ k for k in ops)
    if np.max(np.abs(comp - np.eye(d_in))) > 1e-9:
        raise InputError("Kraus operators do not satisfy the completeness sum")
    out = np.zeros((d_out, d_out), dtype=complex)
    for k in ops:
        out += k @ m @ k.conj().T
    return out
