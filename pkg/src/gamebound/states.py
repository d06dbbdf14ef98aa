"""Labeled state vectors and density operators over named registers."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import DENSITY_HERM_TOL, NORM_TOL, RANK_TOL
from .errors import InputError
from .linalg import (
    as_complex_matrix,
    eig_hermitian,
    herm_defect,
    hermitize,
    min_eig,
    partial_trace_matrix,
)
from .registers import RegisterShape


@dataclass(frozen=True)
class StateVector:
    """Unit vector on the registers named by `shape`."""

    shape: RegisterShape
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        vec = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if vec.size != self.shape.dim:
            raise InputError(
                f"vector length {vec.size} != shape dimension {self.shape.dim}"
            )
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > NORM_TOL:
            raise InputError(f"state vector norm {norm!r} is not 1 within {NORM_TOL}")
        vec = vec.copy()
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)

    def density(self) -> "DensityOperator":
        vec = self.amplitudes
        return DensityOperator(self.shape, np.outer(vec, vec.conj()))

    def overlap(self, other: "StateVector") -> complex:
        if self.shape.dims != other.shape.dims:
            raise InputError("overlap requires matching dimensions")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one PSD operator on the registers named by `shape`."""

    shape: RegisterShape
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        mat = as_complex_matrix(self.matrix, "density matrix")
        if mat.shape[0] != self.shape.dim:
            raise InputError(
                f"matrix dim {mat.shape[0]} != shape dimension {self.shape.dim}"
            )
        defect = herm_defect(mat)
        if defect > DENSITY_HERM_TOL:
            raise InputError(f"density matrix Hermiticity defect {defect:.3e}")
        low = min_eig(mat)
        if low < -1e-10:
            raise InputError(f"density matrix has eigenvalue {low:.3e} < -1e-10")
        tr = float(np.real(np.trace(mat)))
        if abs(tr - 1.0) > 1e-10:
            raise InputError(f"density matrix trace {tr!r} is not 1 within 1e-10")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.shape.dim

    def restrict(self, labels: tuple[str, ...]) -> "DensityOperator":
        """Reduced state on `labels` (partial trace over everything else)."""
        return partial_trace(self, keep=labels)


def density_from_matrix(shape: RegisterShape, matrix: np.ndarray) -> DensityOperator:
    """Build a DensityOperator, Hermitizing away float noise from construction."""
    return DensityOperator(shape, hermitize(np.asarray(matrix, dtype=complex)))


def partial_trace(rho: DensityOperator, keep: tuple[str, ...]) -> DensityOperator:
    """Trace out all registers except `keep` (order preserved from the input shape)."""
    new_shape = rho.shape.keep(keep)
    idx = tuple(sorted(rho.shape.index_of(label) for label in keep))
    reduced = partial_trace_matrix(rho.matrix, rho.shape.dims, idx)
    return DensityOperator(new_shape, hermitize(reduced))


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """(1/2)||rho - sigma||_1 via the eigenvalues of the difference."""
    if rho.shape.dims != sigma.shape.dims:
        raise InputError("trace distance requires matching dimensions")
    vals, _ = eig_hermitian(rho.matrix - sigma.matrix, tol=1e-9)
    return float(np.sum(np.abs(vals)) / 2.0)


def zero_entropy(rho: DensityOperator, label: str, rank_tol: float = RANK_TOL) -> float:
    """lg rank of the reduced state on `label`.

    Eigenvalues within rank_tol of zero do not count toward the rank.
    """
    reduced = rho if rho.shape.labels == (label,) else partial_trace(rho, (label,))
    vals, _ = eig_hermitian(reduced.matrix)
    rank = int(np.sum(vals > rank_tol))
    if rank == 0:
        raise InputError("reduced state has numerical rank 0")
    return float(np.log2(rank))


# --- state file format ----------------------------------------------------
#
# {"shape": [["A", 2], ["B", 2]], "re": [[...], ...], "im": [[...], ...]}
# "im" may be omitted for real matrices.


def state_to_dict(rho: DensityOperator) -> dict:
    return {
        "shape": [[label, d] for label, d in rho.shape.subsystems],
        "re": np.real(rho.matrix).tolist(),
        "im": np.imag(rho.matrix).tolist(),
    }


def state_from_dict(data: dict) -> DensityOperator:
    try:
        subsystems = tuple((str(lbl), int(d)) for lbl, d in data["shape"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state file: {exc}") from exc
    if re.shape != im.shape:
        raise InputError("re/im blocks have different shapes")
    return DensityOperator(RegisterShape(subsystems), re + 1j * im)


def save_state(rho: DensityOperator, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(rho), fh)


def load_state(path: str) -> DensityOperator:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"state file is not valid JSON: {exc}") from exc
    return state_from_dict(data)
