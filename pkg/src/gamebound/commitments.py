"""Binding analysis for commitment schemes with projective verification.

A scheme fixes, for each bit b, a finite set of opening labels y and an
orthogonal projector V_y on the receiver's register B; the receiver accepts
opening y iff V_y fires. The committer may keep a register A entangled with B
and choose the announced label by measuring A.

Two routes to the adaptive opening probability P_b:

  povm-relaxation     : optimal POVM discrimination over the score operators
                        K_y = Tr_B[(I (x) V_y) rho] - an upper bound, since
                        projective strategies are a subset.
  projective-bruteforce: exact search over a 2-degree Bloch-sphere net of
                        projective measurements; implemented for dim A = 2
                        (the combinatorics of a 2-degree net explode beyond a
                        qubit). Reports the net-resolution slack.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .config import EQ_TOL, SOLVER_MAX_ITER, SOLVER_TOL
from .discrimination import (
    DiscriminationInstance,
    Povm,
    SolverCertificate,
    optimal_discrimination,
)
from .errors import InputError
from .linalg import (
    check_psd,
    hermitize,
    partial_trace_matrix,
    spectral_norm,
    tensor,
)
from .rand import random_pure_vector, rng_from_seed
from .registers import RegisterShape
from .states import DensityOperator, density_from_matrix


def _check_projector(m: np.ndarray, name: str, tol: float = 1e-9) -> np.ndarray:
    arr = check_psd(m, 1e-10, name)
    if np.max(np.abs(arr @ arr - arr)) > tol:
        raise InputError(f"{name} is not idempotent within {tol}")
    return hermitize(arr)


@dataclass(frozen=True)
class ProjectiveCommitmentScheme:
    """Opening labels and verification projectors for each committed bit."""

    openings_zero: tuple[tuple[str, np.ndarray], ...]
    openings_one: tuple[tuple[str, np.ndarray], ...]

    def __post_init__(self) -> None:
        for side, name in ((self.openings_zero, "b=0"), (self.openings_one, "b=1")):
            if not side:
                raise InputError(f"no openings declared for {name}")
        dims = set()
        frozen = {}
        for attr, side in (
            ("openings_zero", self.openings_zero),
            ("openings_one", self.openings_one),
        ):
            labels = [label for label, _ in side]
            if len(set(labels)) != len(labels):
                raise InputError(f"duplicate opening labels in {attr}")
            out = []
            for label, proj in side:
                p = _check_projector(proj, f"V[{label}]")
                dims.add(p.shape[0])
                p = p.copy()
                p.setflags(write=False)
                out.append((label, p))
            frozen[attr] = tuple(out)
        if len(dims) != 1:
            raise InputError("verification projectors must share one dimension")
        object.__setattr__(self, "openings_zero", frozen["openings_zero"])
        object.__setattr__(self, "openings_one", frozen["openings_one"])

    @property
    def dim_b(self) -> int:
        return self.openings_zero[0][1].shape[0]

    def openings(self, bit: int) -> tuple[tuple[str, np.ndarray], ...]:
        if bit == 0:
            return self.openings_zero
        if bit == 1:
            return self.openings_one
        raise InputError(f"bit must be 0 or 1, got {bit}")


@dataclass(frozen=True)
class OpeningStrategy:
    """Projective measurement on A assigning one element per opening label."""

    bit: int
    elements: tuple[tuple[str, np.ndarray], ...]

    def __post_init__(self) -> None:
        if self.bit not in (0, 1):
            raise InputError("strategy bit must be 0 or 1")
        dim = self.elements[0][1].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        frozen = []
        for label, f in self.elements:
            p = _check_projector(f, f"F[{label}]")
            total += p
            p = p.copy()
            p.setflags(write=False)
            frozen.append((label, p))
        if np.max(np.abs(total - np.eye(dim))) > EQ_TOL:
            raise InputError("strategy projectors do not sum to the identity")
        object.__setattr__(self, "elements", tuple(frozen))

    @property
    def dim_a(self) -> int:
        return self.elements[0][1].shape[0]


@dataclass(frozen=True)
class BindingReport:
    p0: float
    p1: float
    epsilon: float
    mode: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "p0": self.p0,
            "p1": self.p1,
            "epsilon": self.epsilon,
            "mode": self.mode,
            "details": self.details,
        }


def na_binding(scheme: ProjectiveCommitmentScheme, rho_b: DensityOperator) -> BindingReport:
    """Best fixed openings for a committer with no side register."""
    if rho_b.dim != scheme.dim_b:
        raise InputError("state dimension does not match the scheme")
    best = {}
    for bit in (0, 1):
        best[bit] = max(
            float(np.real(np.trace(v @ rho_b.matrix))) for _, v in scheme.openings(bit)
        )
    eps = max(0.0, best[0] + best[1] - 1.0)
    return BindingReport(best[0], best[1], eps, mode="non-adaptive")


def scheme_epsilon_na(scheme: ProjectiveCommitmentScheme) -> float:
    """Worst-case non-adaptive epsilon over all states: the best opening pair
    satisfies max_rho (p0 + p1) = ||V_{y0} + V_{y1}||."""
    best = 0.0
    for _, v0 in scheme.openings_zero:
        for _, v1 in scheme.openings_one:
            best = max(best, spectral_norm(v0 + v1))
    return max(0.0, best - 1.0)


def _score_operators(
    scheme: ProjectiveCommitmentScheme, rho_ab: DensityOperator, bit: int
) -> DiscriminationInstance:
    dim_a, dim_b = rho_ab.shape.dims
    if dim_b != scheme.dim_b:
        raise InputError("state B dimension does not match the scheme")
    ops = []
    for _, v in scheme.openings(bit):
        m = tensor(np.eye(dim_a), v) @ rho_ab.matrix
        ops.append(hermitize(partial_trace_matrix(m, (dim_a, dim_b), (0,))))
    return DiscriminationInstance(tuple(ops))


def adaptive_binding(
    scheme: ProjectiveCommitmentScheme,
    rho_ab: DensityOperator,
    mode: str = "povm-relaxation",
    tol: float = SOLVER_TOL,
    net_degrees: float = 2.0,
) -> BindingReport:
    """Adaptive opening probabilities for a committer holding register A."""
    if mode == "povm-relaxation":
        values = {}
        certs = {}
        for bit in (0, 1):
            cert = optimal_discrimination(_score_operators(scheme, rho_ab, bit), tol=tol)
            values[bit] = cert.primal_value
            certs[bit] = cert.to_dict()
        eps = max(0.0, values[0] + values[1] - 1.0)
        return BindingReport(
            values[0], values[1], eps, mode=mode,
            details={"certificates": certs},
        )
    if mode == "projective-bruteforce":
        dim_a = rho_ab.shape.dims[0]
        if dim_a > 2:
            raise InputError(
                f"projective-bruteforce supports dim A <= 2, got {dim_a} "
                "(2-degree net beyond a qubit is infeasible)"
            )
        values = {}
        slack = 0.0
        for bit in (0, 1):
            v, s = _bruteforce_qubit(scheme, rho_ab, bit, net_degrees)
            values[bit] = v
            slack = max(slack, s)
        eps = max(0.0, values[0] + values[1] - 1.0)
        return BindingReport(
            values[0], values[1], eps, mode=mode,
            details={"net_degrees": net_degrees, "net_slack": slack},
        )
    raise InputError(f"unknown mode {mode!r}")


def _bloch_projectors(step_degrees: float) -> list[np.ndarray]:
    """Rank-1 qubit projectors on a (theta, phi) grid of the given resolution."""
    out = []
    step = math.radians(step_degrees)
    n_theta = int(math.ceil(math.pi / step)) + 1
    for it in range(n_theta):
        theta = min(it * step, math.pi)
        n_phi = 1 if theta in (0.0, math.pi) else int(math.ceil(2 * math.pi / step))
        for ip in range(n_phi):
            phi = ip * step
            v = np.array(
                [math.cos(theta / 2.0), np.exp(1j * phi) * math.sin(theta / 2.0)],
                dtype=complex,
            )
            out.append(np.outer(v, v.conj()))
    return out


def _bruteforce_qubit(
    scheme: ProjectiveCommitmentScheme,
    rho_ab: DensityOperator,
    bit: int,
    net_degrees: float,
) -> tuple[float, float]:
    """Exact-within-net max over projective strategies on a qubit A.

    Each basis {P, I-P} (and the trivial {I}) is scored with the best
    assignment of its projectors to opening labels; coarse-graining onto one
    label is included automatically because assigning both parts to the same
    label realizes F_y = I. Returns (value, net-resolution slack bound).
    """
    instance = _score_operators(scheme, rho_ab, bit)
    ops = instance.operators
    # tr(F K_y) is linear, so each basis projector goes to its best label.
    def best_for(p: np.ndarray) -> float:
        return max(float(np.real(np.trace(p @ k))) for k in ops)

    eye = np.eye(2, dtype=complex)
    best = best_for(eye)  # the single-outcome measurement F = I
    for p in _bloch_projectors(net_degrees):
        best = max(best, best_for(p) + best_for(eye - p))
    # A projector within angle alpha of a net point differs by at most
    # |sin(alpha)| in trace norm per element; two elements and sum tr K bound
    # the objective change.
    alpha = math.radians(net_degrees)
    weight = sum(float(np.real(np.trace(k))) for k in ops)
    slack = 2.0 * math.sin(alpha) * weight
    return best, slack


def opening_projectors(
    scheme: ProjectiveCommitmentScheme,
    strategy_zero: OpeningStrategy,
    strategy_one: OpeningStrategy,
) -> tuple[np.ndarray, np.ndarray]:
    """The accept projectors P_b = sum_y F_y (x) V_y on A (x) B."""
    out = []
    for strategy in (strategy_zero, strategy_one):
        side = dict(scheme.openings(strategy.bit))
        total = None
        for label, f in strategy.elements:
            if label not in side:
                raise InputError(f"strategy names unknown opening {label!r}")
            term = tensor(f, side[label])
            total = term if total is None else total + term
        p = hermitize(total)
        if np.max(np.abs(p @ p - p)) > 1e-9:
            raise InputError("accept operator is not a projector")  # unreachable
        out.append(p)
    return out[0], out[1]


def norm_lemma_check(x: np.ndarray, y: np.ndarray, tol: float = 1e-9) -> tuple[bool, float, float]:
    """||X + Y|| <= 1 + ||XY|| for projectors X, Y."""
    xp = _check_projector(x, "X")
    yp = _check_projector(y, "Y")
    lhs = spectral_norm(xp + yp)
    rhs = 1.0 + spectral_norm(xp @ yp)
    return lhs <= rhs + tol, lhs, rhs


def cheat_state(
    p0: np.ndarray, p1: np.ndarray
) -> tuple[np.ndarray | None, float]:
    """State accepted by P0 with certainty and by P1 with probability >= eps^2,
    where eps = ||P1 P0||. Returns (vector, eps); (None, 0) when P1 P0 = 0
    and P0 = 0 leaves nothing to normalize."""
    a = _check_projector(p0, "P0")
    b = _check_projector(p1, "P1")
    if a.shape != b.shape:
        raise InputError("projectors must share one dimension")
    m = b @ a
    u, s, vh = np.linalg.svd(m)
    eps = float(s[0]) if s.size else 0.0
    if eps <= 1e-15:
        vals, vecs = np.linalg.eigh(a)
        if float(vals[-1]) < 0.5:
            return None, 0.0
        return vecs[:, -1], 0.0
    phi = vh[0].conj()
    projected = a @ phi
    norm = float(np.linalg.norm(projected))
    if norm <= 1e-15:
        return None, 0.0  # unreachable: ||P1 P0 phi|| = eps > 0 forces P0 phi != 0
    return projected / norm, eps


def storage_reduction_check(
    scheme: ProjectiveCommitmentScheme,
    q: int,
    trials: int,
    seed=0,
    mode: str = "projective-bruteforce",
    slack: float = 1e-9,
) -> list[dict]:
    """Sampled check of: q-qubit committer register implies
    p0 + p1 - 1 <= 2^{q/2} sqrt(eps_na).

    Assertable in projective-bruteforce mode (plus net slack); the
    povm-relaxation mode is recorded as diagnostic because the relaxation may
    legitimately exceed the projective bound.
    """
    if q < 0:
        raise InputError("q must be >= 0")
    rng = rng_from_seed(seed)
    eps_na = scheme_epsilon_na(scheme)
    bound = (2.0 ** (q / 2.0)) * math.sqrt(eps_na)
    dim_a = 2**q
    dim_b = scheme.dim_b
    results = []
    for t in range(trials):
        vec = random_pure_vector(dim_a * dim_b, rng)
        shape = RegisterShape((("A", dim_a), ("B", dim_b)))
        rho = density_from_matrix(shape, np.outer(vec, vec.conj()))
        report = adaptive_binding(scheme, rho, mode=mode)
        alpha = report.p0 + report.p1 - 1.0
        margin = slack + report.details.get("net_slack", 0.0) if mode == "projective-bruteforce" else slack
        results.append(
            {
                "trial": t,
                "alpha": alpha,
                "bound": bound,
                "mode": mode,
                "pass": bool(alpha <= bound + margin) if mode == "projective-bruteforce" else None,
            }
        )
    return results


# --- scheme file format -----------------------------------------------------
#
# {"openings": {"0": [{"label": ..., "re": [[...]], "im": [[...]]}], "1": [...]}}


def scheme_to_dict(scheme: ProjectiveCommitmentScheme) -> dict:
    def side(openings):
        return [
            {"label": label, "re": np.real(v).tolist(), "im": np.imag(v).tolist()}
            for label, v in openings
        ]

    return {"openings": {"0": side(scheme.openings_zero), "1": side(scheme.openings_one)}}


def scheme_from_dict(data: dict) -> ProjectiveCommitmentScheme:
    try:
        sides = {}
        for bit in ("0", "1"):
            entries = []
            for item in data["openings"][bit]:
                re = np.asarray(item["re"], dtype=float)
                im = np.asarray(item.get("im", np.zeros_like(re)), dtype=float)
                entries.append((str(item["label"]), re + 1j * im))
            sides[bit] = tuple(entries)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed scheme file: {exc}") from exc
    return ProjectiveCommitmentScheme(sides["0"], sides["1"])


def save_scheme(scheme: ProjectiveCommitmentScheme, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scheme_to_dict(scheme), fh)


def load_scheme(path: str) -> ProjectiveCommitmentScheme:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"scheme file is not valid JSON: {exc}") from exc
    return scheme_from_dict(data)
