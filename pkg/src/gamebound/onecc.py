"""Commitment from one-out-of-two bit commitment channels: conjugate-coding
states, the basis-guessing accounting behind hiding, small-support adversary
states behind binding, and a classical round-by-round simulator.

Encoding convention: basis bit 0 is computational, basis bit 1 is diagonal,
so the honest committer sends |0>_theta = (x) H^{theta_i} |0> per position.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coding import (
    LinearCode,
    ball_size,
    binary_entropy,
    bits_to_int,
    coset_members,
    hamming_ball,
    nearest_coset_rep,
    syndrome,
)
from .discrimination import (
    CqState,
    DiscriminationInstance,
    SolverCertificate,
    guessing_probability,
    optimal_discrimination,
)
from .errors import InputError
from .hashing import XorHashFamily
from .linalg import hermitize, partial_trace_matrix
from .rand import random_pure_vector, rng_from_seed
from .registers import RegisterShape
from .states import DensityOperator, StateVector, density_from_matrix, zero_entropy

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_KET = {0: np.array([1, 0], dtype=complex), 1: np.array([0, 1], dtype=complex)}


def encoded_vector(bits, theta) -> np.ndarray:
    """|bits>_theta as a 2^n vector (position 0 is the most significant factor)."""
    bits = np.asarray(bits, dtype=np.uint8)
    theta = np.asarray(theta, dtype=np.uint8)
    if bits.shape != theta.shape:
        raise InputError("bits and basis string must have equal length")
    if bits.size > 12:
        raise InputError(f"register of {bits.size} qubits exceeds the cap of 12")
    out = np.array([1.0 + 0j])
    for b, t in zip(bits, theta):
        v = _KET[int(b)]
        if t:
            v = _H @ v
        out = np.kron(out, v)
    return out


def b92_encode(theta) -> StateVector:
    """The honest committer's state |0...0>_theta."""
    theta = np.asarray(theta, dtype=np.uint8)
    vec = encoded_vector(np.zeros_like(theta), theta)
    shape = RegisterShape((("B", 2 ** theta.size),))
    return StateVector(shape, vec)


GAMMA_TARGET = math.cos(math.pi / 8.0) ** 2


def single_position_guessing(tol: float = 1e-12) -> SolverCertificate:
    """Optimal guess of a uniform basis bit from one encoded qubit."""
    zero = np.outer(_KET[0], _KET[0].conj())
    plus_vec = _H @ _KET[0]
    plus = np.outer(plus_vec, plus_vec.conj())
    shape = RegisterShape((("B", 2),))
    cq = CqState(
        (0, 1),
        (0.5, 0.5),
        (density_from_matrix(shape, zero), density_from_matrix(shape, plus)),
    )
    return guessing_probability(cq, tol=tol)


def multi_position_guessing(n: int, tol: float = 1e-9) -> SolverCertificate:
    """Joint guess of n basis bits from n encoded qubits (n <= 3)."""
    if n < 1 or n > 3:
        raise InputError("joint guessing check supports 1 <= n <= 3")
    symbols = []
    conds = []
    shape = RegisterShape((("B", 2**n),))
    for t in range(2**n):
        theta = np.array([(t >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)
        vec = encoded_vector(np.zeros(n, dtype=np.uint8), theta)
        symbols.append(t)
        conds.append(density_from_matrix(shape, np.outer(vec, vec.conj())))
    cq = CqState(tuple(symbols), tuple([1.0 / 2**n] * 2**n), tuple(conds))
    return guessing_probability(cq, tol=tol)


def basis_guessing_analysis(big_n: int, q: float, rate: float) -> dict:
    """Hiding-side accounting: per-position guessing value gamma, the
    min-entropy rate after checking and syndrome disclosure, and the distance
    bound 2^{-(1/2) N (lg(1/gamma) - 2q - (1 - rate))}."""
    if big_n < 1:
        raise InputError("N must be positive")
    if not 0.0 <= q <= 1.0:
        raise InputError("q must be a probability")
    if not 0.0 < rate <= 1.0:
        raise InputError("rate must be in (0, 1]")
    gamma = single_position_guessing().primal_value
    hmin_lower = big_n * (math.log2(1.0 / gamma) - 2.0 * q)
    exponent = math.log2(1.0 / gamma) - 2.0 * q - (1.0 - rate)
    hiding_bound = 2.0 ** (-0.5 * big_n * exponent)
    return {
        "gamma": gamma,
        "hmin_lower": hmin_lower,
        "hiding_bound": hiding_bound,
        "vacuous": hiding_bound >= 1.0,
    }


@dataclass(frozen=True)
class SmallSupState:
    """Pure state on A (x) register of n basis qubits supported, on the basis
    side, inside the delta-ball around the all-zero string in basis theta."""

    theta: np.ndarray = field(repr=False)
    delta: float
    dim_a: int
    ball: tuple[tuple[int, ...], ...]
    vector: StateVector = field(repr=False)

    @property
    def n(self) -> int:
        return self.theta.size

    def joint_density(self) -> DensityOperator:
        return self.vector.density()

    def b_reduction(self) -> np.ndarray:
        rho = self.vector.density().matrix
        return hermitize(
            partial_trace_matrix(rho, (self.dim_a, 2**self.n), (1,))
        )


def sample_smallsup_state(theta, delta: float, dim_a: int, seed=0) -> SmallSupState:
    """Random unit vector sum_{y in ball} alpha_y |xi_y>_A |y>_theta."""
    theta = np.asarray(theta, dtype=np.uint8)
    n = theta.size
    if n > 10:
        raise InputError("small-support sampling capped at n = 10")
    if dim_a < 1 or dim_a > 16:
        raise InputError("dim A must be in [1, 16]")
    if not 0.0 <= delta <= 0.5:
        raise InputError("delta must be in [0, 1/2]")
    rng = rng_from_seed(seed)
    radius = math.floor(delta * n)
    ball = hamming_ball(n, radius)
    amps = rng.normal(size=len(ball)) + 1j * rng.normal(size=len(ball))
    amps /= np.linalg.norm(amps)
    total = np.zeros(dim_a * 2**n, dtype=complex)
    for a, y in zip(amps, ball):
        xi = random_pure_vector(dim_a, rng)
        total += a * np.kron(xi, encoded_vector(y, theta))
    total /= np.linalg.norm(total)
    shape = RegisterShape((("A", dim_a), ("B", 2**n)))
    return SmallSupState(
        theta=theta,
        delta=delta,
        dim_a=dim_a,
        ball=tuple(tuple(int(b) for b in y) for y in ball),
        vector=StateVector(shape, total),
    )


def wrong_opening_bound_check(
    state: SmallSupState, code: LinearCode, s, tol: float = 1e-9
) -> dict:
    """Every syndrome-s basis announcement other than the nearest one is
    accepted with probability at most 2^{-d/2 + n h(delta)}.

    Acceptance of announcement theta'' means the receiver's measurement of the
    basis register in theta'' returns all zeros: tr((I (x) P0_theta'') rho).
    """
    n = state.n
    if code.n != n:
        raise InputError("code length does not match the state")
    rho_b = state.b_reduction()
    theta_ref = state.theta
    rep = nearest_coset_rep(code, s, theta_ref)
    d = code.min_distance()
    bound = 2.0 ** (-d / 2.0 + n * binary_entropy(state.delta))
    worst = 0.0
    worst_theta = None
    for cand in coset_members(code, s):
        if np.array_equal(cand, rep):
            continue
        zero_vec = encoded_vector(np.zeros(n, dtype=np.uint8), cand)
        value = float(np.real(zero_vec.conj() @ rho_b @ zero_vec))
        if value > worst:
            worst = value
            worst_theta = tuple(int(b) for b in cand)
    return {
        "worst_value": worst,
        "worst_theta": worst_theta,
        "bound": bound,
        "nearest_rep": tuple(int(b) for b in rep),
        "pass": worst <= bound + tol,
    }


def extract_commit_bit(code: LinearCode, hash_member: int, s, w: int, reference) -> int:
    """Receiver-side extractor: nearest syndrome-s string theta', then
    g(theta') xor w."""
    family = XorHashFamily(code.n)
    rep = nearest_coset_rep(code, s, reference)
    return family.evaluate(hash_member, bits_to_int(rep)) ^ (w & 1)


def adaptive_wrong_opening(
    state: SmallSupState, code: LinearCode, hash_member: int, s, w: int,
    tol: float = 1e-7,
) -> dict:
    """POVM-relaxation success of opening the bit OTHER than the extractor's,
    with the chain bound 2^{H0(A)} * (wrong-opening bound)."""
    n = state.n
    family = XorHashFamily(n)
    rep = nearest_coset_rep(code, s, state.theta)
    c = family.evaluate(hash_member, bits_to_int(rep)) ^ (w & 1)
    rho = state.joint_density()
    dim_a = state.dim_a
    ops = []
    for cand in coset_members(code, s):
        if family.evaluate(hash_member, bits_to_int(cand)) ^ (w & 1) != 1 - c:
            continue
        zero_vec = encoded_vector(np.zeros(n, dtype=np.uint8), cand)
        proj = np.outer(zero_vec, zero_vec.conj())
        lifted = np.kron(np.eye(dim_a), proj)
        ops.append(
            hermitize(partial_trace_matrix(lifted @ rho.matrix, (dim_a, 2**n), (0,)))
        )
    h0 = zero_entropy(rho, "A")
    lemma_bound = 2.0 ** (-code.min_distance() / 2.0 + n * binary_entropy(state.delta))
    if not ops:
        return {
            "extracted": c,
            "wrong_open_success": 0.0,
            "chain_bound": (2.0**h0) * lemma_bound,
            "pass": True,
        }
    cert = optimal_discrimination(DiscriminationInstance(tuple(ops)), tol=tol)
    chain_bound = (2.0**h0) * lemma_bound
    return {
        "extracted": c,
        "wrong_open_success": cert.primal_value,
        "chain_bound": chain_bound,
        "pass": cert.primal_value <= chain_bound + 1e-6,
    }


# --- round-by-round classical simulation ------------------------------------


@dataclass(frozen=True)
class OneCcInstance:
    """Public parameters of the commitment protocol."""

    big_n: int
    q: float
    code: LinearCode

    def __post_init__(self) -> None:
        if self.big_n < 1:
            raise InputError("N must be positive")
        if not 0.0 <= self.q <= 1.0:
            raise InputError("q must be a probability")


# P(check measurement at a flagged position returns 1) per adversary script.
COMMIT_SCRIPTS = ("honest", "flip_state", "flip_basis")


def simulate_commit(
    instance: OneCcInstance,
    bit: int,
    runs: int,
    seed=0,
    script: str = "honest",
    flagged_positions: tuple[int, ...] = (),
) -> dict:
    """Classical simulation of the commit phase.

    Per position the committer routes (state, basis) into the one-out-of-two
    channel; the receiver checks with probability q and aborts on outcome 1.
    Honest positions never fail a check. The scripted deviations flip the sent
    state (caught with certainty when checked) or the declared basis (caught
    with probability 1/2 when checked).

    Returns abort statistics, the exact per-run tally of checked positions,
    and the transcript pieces (syndrome, hash member, masked bit) of the final
    non-aborting run, if any.
    """
    if script not in COMMIT_SCRIPTS:
        raise InputError(f"unknown script {script!r}; options {COMMIT_SCRIPTS}")
    if bit not in (0, 1):
        raise InputError("committed bit must be 0 or 1")
    big_n, q = instance.big_n, instance.q
    for p in flagged_positions:
        if not 0 <= p < big_n:
            raise InputError(f"flagged position {p} outside [0, {big_n})")
    rng = rng_from_seed(seed)
    family = XorHashFamily(big_n) if big_n <= 20 else None
    aborts_check = 0
    aborts_size = 0
    catches_at_flagged = 0
    checks_at_flagged = 0
    sizes = []
    last_view = None
    for _ in range(runs):
        theta = rng.integers(0, 2, size=big_n, dtype=np.uint8)
        checked = rng.random(big_n) < q
        sizes.append(int(checked.sum()))
        caught = False
        for pos in range(big_n):
            if not checked[pos]:
                continue
            if script == "honest" or pos not in flagged_positions:
                outcome = 0
            elif script == "flip_state":
                outcome = 1
            else:  # flip_basis: declared basis mismatches the state
                outcome = int(rng.random() < 0.5)
            if pos in flagged_positions:
                checks_at_flagged += 1
                if outcome == 1:
                    catches_at_flagged += 1
            if outcome == 1:
                caught = True
        if caught:
            aborts_check += 1
            continue
        if sizes[-1] > 2.0 * q * big_n:
            aborts_size += 1
            continue
        s = syndrome(instance.code, theta) if instance.code.n == big_n else None
        if family is not None:
            r = int(rng.integers(0, 2**big_n))
            w = family.evaluate(r, bits_to_int(theta)) ^ bit
        else:
            r, w = None, None
        last_view = {
            "theta": tuple(int(t) for t in theta),
            "hash_member": r,
            "syndrome": None if s is None else tuple(int(b) for b in s),
            "masked_bit": w,
        }
    return {
        "runs": runs,
        "aborts_check": aborts_check,
        "aborts_size": aborts_size,
        "check_set_sizes": sizes,
        "size_abort_bound": 2.0 * math.exp(-2.0 * q * q * big_n),
        "flagged_checks": checks_at_flagged,
        "flagged_catches": catches_at_flagged,
        "last_view": last_view,
    }
