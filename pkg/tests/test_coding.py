import itertools
import math

import numpy as np
import pytest

from gamebound.coding import (
    LinearCode,
    ball_size,
    binary_entropy,
    bits_to_int,
    coset_members,
    gilbert_varshamov_sample,
    hamming_ball_around,
    named_code,
    nearest_coset_rep,
    syndrome,
)
from gamebound.errors import InputError


def weight(v):
    return int(np.sum(v))


def test_named_codes_parameters():
    rep31 = named_code("rep31")
    assert (rep31.n, rep31.k, rep31.min_distance()) == (3, 1, 3)
    rep41 = named_code("rep41")
    assert (rep41.n, rep41.k, rep41.min_distance()) == (4, 1, 4)
    ham = named_code("hamming74")
    assert (ham.n, ham.k, ham.min_distance()) == (7, 4, 3)


def test_unknown_code_name():
    with pytest.raises(InputError):
        named_code("nonsense99")


def test_hamming_codewords_by_brute_force():
    ham = named_code("hamming74")
    words = ham.codewords()
    assert len(words) == 16
    nonzero = [w for w in words if weight(w) > 0]
    assert min(weight(w) for w in nonzero) == 3
    # closure under addition
    as_set = {tuple(w) for w in words}
    for a in words[:4]:
        for b in words[:4]:
            assert tuple((a + b) % 2) in as_set


def test_parity_check_annihilates_codewords():
    for name in ("rep31", "rep41", "hamming74"):
        code = named_code(name)
        for w in code.codewords():
            assert not np.any(syndrome(code, w))


def test_coset_members_share_syndrome():
    code = named_code("rep31")
    s = np.array([1, 0], dtype=np.uint8)
    members = coset_members(code, s)
    assert len(members) == 2  # 2^k
    for m in members:
        np.testing.assert_array_equal(syndrome(code, m), s)
    # distinct members
    assert len({tuple(m) for m in members}) == len(members)


def test_nearest_coset_rep_brute_force_oracle():
    code = named_code("hamming74")
    rng = np.random.default_rng(71)
    for _ in range(20):
        ref = rng.integers(0, 2, size=7).astype(np.uint8)
        s = rng.integers(0, 2, size=3).astype(np.uint8)
        rep = nearest_coset_rep(code, s, ref)
        np.testing.assert_array_equal(syndrome(code, rep), s)
        best = min(int(np.sum((m + ref) % 2)) for m in coset_members(code, s))
        assert int(np.sum((rep + ref) % 2)) == best


def test_nearest_coset_rep_tie_is_deterministic():
    code = named_code("rep41")
    s = np.array([1, 0, 0], dtype=np.uint8)
    ref = np.zeros(4, dtype=np.uint8)
    a = nearest_coset_rep(code, s, ref)
    b = nearest_coset_rep(code, s, ref)
    np.testing.assert_array_equal(a, b)
    assert weight(a) == 1  # two weight-1 members tie; one is picked stably


def test_hamming_ball_matches_itertools_enumeration():
    center = np.array([1, 0, 1, 1], dtype=np.uint8)
    for radius in range(3):
        ball = hamming_ball_around(center, radius)
        want = [
            v for v in itertools.product((0, 1), repeat=4)
            if sum(a != b for a, b in zip(v, center)) <= radius
        ]
        assert {tuple(b) for b in ball} == {tuple(w) for w in want}
        assert len(ball) == ball_size(4, radius)


def test_ball_size_is_binomial_sum():
    for n in (3, 7, 10):
        for r in range(n + 1):
            assert ball_size(n, r) == sum(math.comb(n, j) for j in range(r + 1))


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)
    want = 0.5 + 0.75 * math.log2(4.0 / 3.0)
    assert binary_entropy(0.25) == pytest.approx(want, abs=1e-12)
    assert binary_entropy(0.25) == pytest.approx(binary_entropy(0.75), abs=1e-15)


def test_bits_to_int_most_significant_first():
    assert bits_to_int(np.array([1, 0, 1], dtype=np.uint8)) == 5
    assert bits_to_int(np.array([0, 0, 0, 1], dtype=np.uint8)) == 1
    assert bits_to_int(np.array([], dtype=np.uint8)) == 0


def test_linear_code_rejects_rank_deficient_generator():
    with pytest.raises(InputError):
        LinearCode(np.array([[1, 1, 0], [1, 1, 0]], dtype=np.uint8))


def test_gilbert_varshamov_frequency_monotone_in_distance():
    easy, dists = gilbert_varshamov_sample(10, 0.3, 0.05, 12, seed=3)
    hard, dists2 = gilbert_varshamov_sample(10, 0.3, 0.45, 12, seed=3)
    assert 0.0 <= hard <= easy <= 1.0
    assert len(dists) == 12
    assert all(d >= 1 for d in dists)
    assert dists == dists2  # same seed, same codes
