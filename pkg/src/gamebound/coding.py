"""Binary linear codes, syndromes, coset representatives, and Hamming-ball
counting. Everything is exact GF(2) arithmetic on small n (brute force is
capped at n <= 24 for distance and coset searches)."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

BRUTE_FORCE_N_CAP = 24


def binary_entropy(p: float) -> float:
    """h(p) on [0, 1] with h(0) = h(1) = 0."""
    if p < 0.0 or p > 1.0:
        raise InputError(f"binary entropy argument {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def _as_bit_array(bits, n: int | None = None) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8) % 2
    if arr.ndim != 1:
        raise InputError("bit string must be one-dimensional")
    if n is not None and arr.size != n:
        raise InputError(f"bit string length {arr.size}, expected {n}")
    return arr


def bits_to_int(bits: np.ndarray) -> int:
    """Most-significant bit first, so integer order equals lexicographic order."""
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def int_to_bits(value: int, n: int) -> np.ndarray:
    return np.array([(value >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def _rank_gf2(rows: np.ndarray) -> int:
    m = rows.copy().astype(np.uint8)
    rank = 0
    n_rows, n_cols = m.shape
    for col in range(n_cols):
        pivot = None
        for r in range(rank, n_rows):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(n_rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _null_space_gf2(g: np.ndarray) -> np.ndarray:
    """Rows spanning {x : G x^T = 0} over GF(2)."""
    k, n = g.shape
    m = g.copy().astype(np.uint8)
    pivots = []
    row = 0
    for col in range(n):
        pivot = None
        for r in range(row, k):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[row, pivot]] = m[[pivot, row]]
        for r in range(k):
            if r != row and m[r, col]:
                m[r] ^= m[row]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for r, p in enumerate(pivots):
            if m[r, f]:
                v[p] = 1
        basis.append(v)
    return np.array(basis, dtype=np.uint8) if basis else np.zeros((0, n), np.uint8)


@dataclass(frozen=True)
class LinearCode:
    """[n, k, d] binary linear code given by a full-rank generator matrix."""

    generator: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        g = np.asarray(self.generator, dtype=np.uint8) % 2
        if g.ndim != 2:
            raise InputError("generator must be a 2-d bit matrix")
        k, n = g.shape
        if k < 1 or n < 1 or k > n:
            raise InputError(f"invalid code parameters k={k}, n={n}")
        if _rank_gf2(g) != k:
            raise InputError(f"generator rows are not independent (rank < {k})")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def parity_check(self) -> np.ndarray:
        h = _null_space_gf2(np.asarray(self.generator))
        if h.shape[0] != self.n - self.k:
            raise InputError("parity-check construction failed")  # unreachable
        return h

    def codewords(self) -> np.ndarray:
        """All 2^k codewords as a (2^k, n) bit matrix (message order)."""
        if self.n > BRUTE_FORCE_N_CAP:
            raise InputError(f"n={self.n} exceeds brute-force cap {BRUTE_FORCE_N_CAP}")
        msgs = np.array(
            list(itertools.product((0, 1), repeat=self.k)), dtype=np.uint8
        )
        return (msgs @ self.generator) % 2

    def min_distance(self) -> int:
        """Exact minimum distance by weight enumeration (n <= 24)."""
        words = self.codewords()
        weights = words.sum(axis=1)
        nonzero = weights[np.any(words != 0, axis=1)]
        if nonzero.size == 0:
            raise InputError("code has no nonzero codewords")  # unreachable: k >= 1
        return int(nonzero.min())


def syndrome(code: LinearCode, x) -> np.ndarray:
    bits = _as_bit_array(x, code.n)
    return (code.parity_check @ bits) % 2


def coset_members(code: LinearCode, s) -> np.ndarray:
    """All strings with syndrome s, as a (2^k, n) bit matrix."""
    s_bits = _as_bit_array(s, code.n - code.k)
    h = code.parity_check
    # Solve H x0 = s by Gaussian elimination on [H | s].
    aug = np.concatenate([h, s_bits.reshape(-1, 1)], axis=1).astype(np.uint8)
    rows, cols = h.shape
    pivots = []
    row = 0
    for col in range(cols):
        pivot = None
        for r in range(row, rows):
            if aug[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        aug[[row, pivot]] = aug[[pivot, row]]
        for r in range(rows):
            if r != row and aug[r, col]:
                aug[r] ^= aug[row]
        pivots.append(col)
        row += 1
    for r in range(row, rows):
        if aug[r, -1]:
            raise InputError("syndrome is inconsistent with the parity-check matrix")
    x0 = np.zeros(cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        x0[p] = aug[r, -1]
    return (code.codewords() ^ x0).astype(np.uint8)


def nearest_coset_rep(code: LinearCode, s, reference) -> np.ndarray:
    """The syndrome-s string closest to `reference` in Hamming distance.

    Ties break to the lexicographically smallest bit string.
    """
    ref = _as_bit_array(reference, code.n)
    members = coset_members(code, s)
    dists = (members ^ ref).sum(axis=1)
    best = int(dists.min())
    candidates = members[dists == best]
    keys = [bits_to_int(c) for c in candidates]
    return candidates[int(np.argmin(keys))].copy()


def hamming_ball(n: int, radius: int) -> list[np.ndarray]:
    """All bit strings within `radius` flips of the zero string, n <= 16."""
    if n > 16:
        raise InputError(f"ball enumeration capped at n=16, got {n}")
    if radius < 0 or radius > n:
        raise InputError(f"radius {radius} outside [0, {n}]")
    out = []
    for w in range(radius + 1):
        for support in itertools.combinations(range(n), w):
            v = np.zeros(n, dtype=np.uint8)
            for i in support:
                v[i] = 1
            out.append(v)
    return out


def hamming_ball_around(x, radius: int) -> list[np.ndarray]:
    center = _as_bit_array(x)
    return [center ^ v for v in hamming_ball(center.size, radius)]


def ball_size(n: int, radius: int) -> int:
    return sum(math.comb(n, w) for w in range(radius + 1))


def ball_size_bound_ok(n: int, delta: float) -> bool:
    """|B^delta| <= 2^{n h(delta)} for delta <= 1/2 (entropy counting bound)."""
    radius = math.floor(delta * n)
    return ball_size(n, radius) <= 2.0 ** (n * binary_entropy(delta)) + 1e-9


def gilbert_varshamov_sample(
    n: int, rate: float, tau: float, n_seeds: int, seed=0
) -> tuple[float, list[int]]:
    """Frequency of min distance >= tau*n among random full-rank [n, k] codes.

    k = round(rate * n). Generator matrices are drawn uniformly conditioned on
    full rank (rejection sampling), matching the LinearCode invariant.
    """
    if n > BRUTE_FORCE_N_CAP:
        raise InputError(f"n={n} exceeds brute-force cap {BRUTE_FORCE_N_CAP}")
    k = round(rate * n)
    if k < 1 or k > n:
        raise InputError(f"rate {rate} gives invalid k={k} for n={n}")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    distances = []
    hits = 0
    threshold = tau * n
    for _ in range(n_seeds):
        while True:
            g = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
            if _rank_gf2(g) == k:
                break
        d = LinearCode(g).min_distance()
        distances.append(d)
        if d >= threshold:
            hits += 1
    return hits / n_seeds, distances


# --- code file format -------------------------------------------------------
#
# {"n": 7, "k": 4, "generator": ["1000110", ...]}


def code_to_dict(code: LinearCode) -> dict:
    return {
        "n": code.n,
        "k": code.k,
        "generator": ["".join(str(int(b)) for b in row) for row in code.generator],
    }


def code_from_dict(data: dict) -> LinearCode:
    try:
        n = int(data["n"])
        k = int(data["k"])
        rows = [[int(c) for c in row] for row in data["generator"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed code file: {exc}") from exc
    g = np.array(rows, dtype=np.uint8)
    if g.shape != (k, n):
        raise InputError(f"generator shape {g.shape} != declared ({k}, {n})")
    return LinearCode(g)


def save_code(code: LinearCode, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(code_to_dict(code), fh)


def load_code(path: str) -> LinearCode:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"code file is not valid JSON: {exc}") from exc
    return code_from_dict(data)


# Named codes for the CLI.
REPETITION_3 = np.array([[1, 1, 1]], dtype=np.uint8)
REPETITION_4 = np.array([[1, 1, 1, 1]], dtype=np.uint8)
HAMMING_7_4 = np.array(
    [
        [1, 0, 0, 0, 1, 1, 0],
        [0, 1, 0, 0, 1, 0, 1],
        [0, 0, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ],
    dtype=np.uint8,
)

NAMED_CODES = {
    "rep31": REPETITION_3,
    "rep41": REPETITION_4,
    "hamming74": HAMMING_7_4,
}


def named_code(name: str) -> LinearCode:
    if name not in NAMED_CODES:
        raise InputError(f"unknown code {name!r}; options: {sorted(NAMED_CODES)}")
    return LinearCode(NAMED_CODES[name])
