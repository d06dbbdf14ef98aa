"""XOR-inner-product hashing and the privacy-amplification distance check.

The family is g_r(x) = <r, x> mod 2 over all r in {0,1}^n, including r = 0
(the constant member). For x != y exactly half the members collide, which is
the two-universal property used throughout.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .discrimination import CqState, guessing_probability
from .errors import InputError


@dataclass(frozen=True)
class XorHashFamily:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.n > 20:
            raise InputError(f"hash input length {self.n} outside [1, 20]")

    def __len__(self) -> int:
        return 2**self.n

    def members(self) -> list[int]:
        return list(range(2**self.n))

    def evaluate(self, r: int, x: int) -> int:
        if not 0 <= r < 2**self.n or not 0 <= x < 2**self.n:
            raise InputError("hash member or input out of range")
        return bin(r & x).count("1") % 2


def hash_eval(family: XorHashFamily, r: int, x: int) -> int:
    return family.evaluate(r, x)


def collision_test(family: XorHashFamily, x: int, y: int) -> float:
    """Fraction of members with g_r(x) = g_r(y); exactly 1/2 for x != y."""
    if x == y:
        raise InputError("collision test needs two distinct inputs")
    same = sum(
        1 for r in family.members() if family.evaluate(r, x) == family.evaluate(r, y)
    )
    return same / len(family)


def privacy_amp_distance(cq: CqState, n: int) -> float:
    """Exact distance of (hash output, member, side info) from uniform.

    The cq symbols must be the integers 0..2^n - 1 (missing symbols get weight
    zero). Computes (1/2)||rho_{YGE} - I/2 (x) rho_{GE}||_1 by exact block
    enumeration over the 2^n members.
    """
    family = XorHashFamily(n)
    dim_e = cq.dim_b
    weights = {int(s): (w, c.matrix) for s, w, c in
               zip(cq.symbols, cq.weights, cq.conditionals)}
    for s in weights:
        if not 0 <= s < 2**n:
            raise InputError(f"symbol {s} outside 0..{2**n - 1}")
    rho_e = np.zeros((dim_e, dim_e), dtype=complex)
    for w, m in weights.values():
        rho_e += w * m
    total = 0.0
    for r in family.members():
        blocks = [np.zeros((dim_e, dim_e), dtype=complex) for _ in range(2)]
        for x, (w, m) in weights.items():
            blocks[family.evaluate(r, x)] += w * m
        for y in range(2):
            diff = blocks[y] - rho_e / 2.0
            vals = np.linalg.eigvalsh((diff + diff.conj().T) / 2.0)
            total += 0.5 * float(np.sum(np.abs(vals)))
    return total / len(family)


def privacy_amp_check(
    cq: CqState, n: int, tol: float = 1e-9
) -> tuple[bool, float, float, float]:
    """Distance <= (1/2) * 2^{-(Hmin - 1)/2} with Hmin from the certified dual.

    Returns (ok, distance, bound, hmin_lower). The dual value upper-bounds the
    guessing probability, so hmin_lower never exceeds the true min-entropy and
    the bound is never spuriously small.
    """
    distance = privacy_amp_distance(cq, n)
    cert = guessing_probability(cq)
    hmin_lower = -float(math.log2(cert.dual_value))
    bound = 0.5 * 2.0 ** (-(hmin_lower - 1.0) / 2.0)
    return distance <= bound + tol, distance, bound, hmin_lower
