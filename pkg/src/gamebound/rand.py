"""Seeded random constructions shared by the search routines and the test suite."""
from __future__ import annotations

import numpy as np

from .linalg import hermitize


def rng_from_seed(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases.conj()


def random_pure_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Full-rank by default; pass rank for a rank-deficient state."""
    r = dim if rank is None else rank
    g = rng.normal(size=(dim, r)) + 1j * rng.normal(size=(dim, r))
    m = g @ g.conj().T
    return hermitize(m / np.real(np.trace(m)))


def random_projector(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    if rank == 0:
        return np.zeros((dim, dim), dtype=complex)
    u = haar_unitary(dim, rng)[:, :rank]
    return hermitize(u @ u.conj().T)


def random_effect(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random operator with spectrum in [0, 1] (one half of a binary POVM)."""
    u = haar_unitary(dim, rng)
    spectrum = rng.uniform(0.0, 1.0, size=dim)
    return hermitize((u * spectrum) @ u.conj().T)


def random_povm_elements(dim: int, outcomes: int, rng: np.random.Generator) -> list[np.ndarray]:
    """POVM via Wishart pieces normalized by the inverse square root of their sum."""
    pieces = []
    for _ in range(outcomes):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        pieces.append(g @ g.conj().T)
    total = hermitize(sum(pieces))
    vals, vecs = np.linalg.eigh(total)
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    return [hermitize(inv_sqrt @ p @ inv_sqrt) for p in pieces]
