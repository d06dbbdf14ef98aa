"""The acceptance suite: twelve seeded end-to-end checks with pinned
tolerances, shared by the test suite and the command line. Each criterion
returns one CheckRecord; run_all collects them into an ExperimentReport.
"""
from __future__ import annotations

import math
import time

import numpy as np

from . import accessible, bcjl, coding, commitments, games, hashing, onecc, ucsim
from .discrimination import CqState, optimal_discrimination, DiscriminationInstance
from .linalg import apply_kraus
from .rand import (
    haar_unitary,
    random_density_matrix,
    random_povm_elements,
    random_projector,
    rng_from_seed,
)
from .report import CheckRecord, ExperimentReport, digest_inputs
from .states import DensityOperator, density_from_matrix
from .registers import shape

GAMMA = math.cos(math.pi / 8.0) ** 2


def _finish(name, passed, values, bound, slack, provenance, inputs, started):
    return CheckRecord(
        name=name,
        passed=bool(passed),
        values=values,
        bound=bound,
        slack=slack,
        provenance=provenance,
        inputs_digest=digest_inputs(inputs),
        runtime_s=time.time() - started,
    )


def criterion_01_guessing_constant(seed=0) -> CheckRecord:
    """Single-position basis guessing equals cos^2(pi/8) at 1e-9."""
    started = time.time()
    cert = onecc.single_position_guessing()
    err = abs(cert.primal_value - GAMMA)
    passed = err <= 1e-9 and cert.gap <= 1e-9
    values = {
        "value": cert.primal_value,
        "target": GAMMA,
        "error": err,
        "certificate_gap": cert.gap,
        "iterations": cert.iterations,
    }
    return _finish(
        "01-basis-guessing-constant", passed, values, 1e-9, 1e-9 - err,
        "solver-certificate", {"criterion": 1}, started,
    )


def criterion_02_bell_counterexample(seed=0) -> CheckRecord:
    """Adaptive 1, semi-adaptive and non-adaptive 1/4, one effective qubit,
    and the naive conditional bound flagged as violated."""
    started = time.time()
    game = games.bell_game()
    res = games.verify_main_theorem(game, tol=1e-6, solver_tol=1e-9)
    flagged = any(
        c.name == "adaptive<=2^H0(A)*semi" and (not c.passed) and c.expected_violation
        for c in res.bound_checks
    )
    checks = {
        "adaptive": abs(res.adaptive - 1.0) <= 1e-7,
        "adaptive_gap": res.adaptive_cert.gap <= 1e-7,
        "semi": abs(res.semi_adaptive - 0.25) <= 1e-7,
        "non_adaptive": abs(res.non_adaptive - 0.25) <= 1e-7,
        "zero_entropy": res.zero_entropy_a == 1.0,
        "violation_flagged": flagged,
    }
    values = {
        "adaptive": res.adaptive,
        "semi_adaptive": res.semi_adaptive,
        "non_adaptive": res.non_adaptive,
        "zero_entropy_a": res.zero_entropy_a,
        "certificate_gap": res.adaptive_cert.gap,
        "checks": checks,
    }
    return _finish(
        "02-bell-counterexample", all(checks.values()), values, 1e-7, None,
        "solver-certificate", {"criterion": 2}, started,
    )


def criterion_03_random_games(seed=0, count: int = 200) -> CheckRecord:
    """Adaptive advantage capped by 2^(effective qubits) over non-adaptive
    on seeded random games, with certified duality gaps."""
    started = time.time()
    rng = rng_from_seed((seed, 3))
    worst_ratio_slack = math.inf
    worst_gap = 0.0
    failures = []
    for k in range(count):
        dim_a = int(rng.choice([2, 4]))
        dim_b = int(rng.choice([2, 4]))
        n_tests = int(rng.integers(2, 5))
        game = games.random_game(dim_a, dim_b, n_tests, seed=(seed, 3, k))
        res = games.verify_main_theorem(game, tol=1e-6, solver_tol=1e-9)
        upper = 2.0**res.zero_entropy_a * res.non_adaptive + 1e-6
        worst_ratio_slack = min(worst_ratio_slack, upper - res.adaptive)
        worst_gap = max(worst_gap, res.adaptive_cert.gap)
        if res.adaptive > upper:
            failures.append({"game": k, "kind": "adaptive-above-bound"})
        if res.non_adaptive > res.adaptive + 1e-8:
            failures.append({"game": k, "kind": "non-adaptive-above-adaptive"})
        if res.adaptive_cert.gap > 1e-7:
            failures.append({"game": k, "kind": "gap", "gap": res.adaptive_cert.gap})
    values = {
        "games": count,
        "worst_bound_slack": worst_ratio_slack,
        "worst_certificate_gap": worst_gap,
        "failures": failures[:10],
    }
    return _finish(
        "03-adaptive-vs-nonadaptive-games", not failures, values, 1e-6,
        worst_ratio_slack, "solver-certificate", {"criterion": 3, "count": count},
        started,
    )


def criterion_04_measurement_domination(seed=0, n_states: int = 100) -> CheckRecord:
    """Per-measurement lambda is tight (passes at the value, fails just
    below), never exceeds the effective-qubit count, and survives local
    processing."""
    started = time.time()
    rng = rng_from_seed((seed, 4))
    worst_margin = math.inf
    failures = []
    channel_checks = 0
    for k in range(n_states):
        dim_a = int(rng.choice([2, 4]))
        dim_b = int(rng.choice([2, 3, 4]))
        rho = density_from_matrix(
            shape(("A", dim_a), ("B", dim_b)),
            random_density_matrix(dim_a * dim_b, rng),
        )
        h0 = math.log2(dim_a)  # full-rank reduction by construction
        descriptors = accessible.standard_measurements(dim_a)[:3]
        while len(descriptors) < 5:
            elems = random_povm_elements(dim_a, int(rng.integers(2, 5)), rng)
            descriptors.append(
                accessible.MeasurementDescriptor(
                    f"random-{len(descriptors)}", accessible.Povm(tuple(elems))
                )
            )
        for desc in descriptors[:5]:
            value, sigma = accessible.imax_for_measurement(desc.povm, rho)
            at_value = accessible.domination_defect(desc.povm, rho, value, sigma)
            below = accessible.domination_defect(desc.povm, rho, value - 1e-4, sigma)
            if at_value > 1e-9:
                failures.append({"state": k, "kind": "fails-at-value"})
            if below <= 0.0:
                failures.append({"state": k, "kind": "passes-below-value"})
            if value > h0 + 1e-8:
                failures.append({"state": k, "kind": "exceeds-zero-entropy"})
            worst_margin = min(worst_margin, h0 + 1e-8 - value)
        if k % 10 == 0:
            u_a = haar_unitary(dim_a, rng)
            p = random_projector(dim_b, dim_b // 2, rng)
            kraus_b = [p, np.eye(dim_b) - p]
            ok, transformed, original = accessible.local_channel_monotonicity_check(
                rho, [u_a], kraus_b, budget=24, seed=(seed, 4, k)
            )
            channel_checks += 1
            if not ok:
                failures.append({"state": k, "kind": "channel-monotonicity"})
    values = {
        "states": n_states,
        "measurements_per_state": 5,
        "channel_checks": channel_checks,
        "worst_zero_entropy_margin": worst_margin,
        "failures": failures[:10],
    }
    return _finish(
        "04-measurement-domination", not failures, values, 1e-8, worst_margin,
        "closed-form", {"criterion": 4, "n_states": n_states}, started,
    )


def criterion_05_norm_lemma(seed=0, pairs: int = 100) -> CheckRecord:
    """Spectral norm of a projector sum against one plus the product norm."""
    started = time.time()
    rng = rng_from_seed((seed, 5))
    worst = math.inf
    ok_all = True
    for _ in range(pairs):
        dim = int(rng.integers(2, 17))
        x = random_projector(dim, int(rng.integers(1, dim)), rng)
        y = random_projector(dim, int(rng.integers(1, dim)), rng)
        ok, lhs, rhs = commitments.norm_lemma_check(x, y, tol=1e-9)
        ok_all = ok_all and ok
        worst = min(worst, rhs + 1e-9 - lhs)
    values = {"pairs": pairs, "worst_slack": worst}
    return _finish(
        "05-norm-lemma", ok_all, values, 1e-9, worst, "closed-form",
        {"criterion": 5, "pairs": pairs}, started,
    )


def criterion_06_cheat_state(seed=0, instances: int = 50) -> CheckRecord:
    """The constructed two-sided opening state succeeds perfectly on one
    projector and with probability at least epsilon squared on the other."""
    started = time.time()
    rng = rng_from_seed((seed, 6))
    built = 0
    worst_p0 = 1.0
    worst_p1_slack = math.inf
    failures = []
    while built < instances:
        dim = int(rng.integers(4, 17))
        p0 = random_projector(dim, int(rng.integers(1, dim // 2 + 1)), rng)
        p1 = random_projector(dim, int(rng.integers(1, dim // 2 + 1)), rng)
        vec, eps = commitments.cheat_state(p0, p1)
        if vec is None or eps < 1e-3:
            continue
        built += 1
        succ0 = float(np.real(np.vdot(vec, p0 @ vec)))
        succ1 = float(np.real(np.vdot(vec, p1 @ vec)))
        worst_p0 = min(worst_p0, succ0)
        worst_p1_slack = min(worst_p1_slack, succ1 - (eps**2 - 1e-7))
        if succ0 < 1.0 - 1e-9:
            failures.append({"instance": built, "kind": "first-projector"})
        if succ1 < eps**2 - 1e-7:
            failures.append({"instance": built, "kind": "second-projector"})
    values = {
        "instances": instances,
        "worst_first_success": worst_p0,
        "worst_second_slack": worst_p1_slack,
        "failures": failures[:10],
    }
    return _finish(
        "06-cheat-state", not failures, values, None, worst_p1_slack,
        "closed-form", {"criterion": 6, "instances": instances}, started,
    )


def criterion_07_wrong_opening(seed=0, samples: int = 100) -> CheckRecord:
    """Wrong-opening acceptance on sampled small-support states over the
    [7,4] distance-3 code, plus the chained adaptive bound through the
    discrimination engine."""
    started = time.time()
    rng = rng_from_seed((seed, 7))
    code = coding.named_code("hamming74")
    delta = 1.0 / 7.0
    bound = 2.0 ** (-code.min_distance() / 2.0 + code.n * coding.binary_entropy(delta))
    worst = 0.0
    failures = []
    chain = []
    for k in range(samples):
        theta = rng.integers(0, 2, size=7).astype(np.uint8)
        s = rng.integers(0, 2, size=3).astype(np.uint8)
        state = onecc.sample_smallsup_state(theta, delta, 2, seed=(seed, 7, k))
        chk = onecc.wrong_opening_bound_check(state, code, s)
        worst = max(worst, chk["worst_value"])
        if chk["worst_value"] > bound + 1e-9:
            failures.append({"sample": k, "kind": "lemma-bound"})
        if k % 10 == 0:
            member = int(rng.integers(0, 2**7))
            w = int(rng.integers(0, 2))
            adv = onecc.adaptive_wrong_opening(state, code, member, s, w)
            chain.append(adv["wrong_open_success"] <= adv["chain_bound"] + 1e-6)
            if not chain[-1]:
                failures.append({"sample": k, "kind": "chain-bound"})
    values = {
        "samples": samples,
        "worst_acceptance": worst,
        "lemma_bound": bound,
        "vacuous": bound >= 1.0,
        "chain_checks": len(chain),
        "failures": failures[:10],
    }
    return _finish(
        "07-wrong-opening", not failures, values, bound + 1e-9,
        bound + 1e-9 - worst, "sampled-search",
        {"criterion": 7, "samples": samples}, started,
    )


def criterion_08_ball_binding(seed=0, budget: int = 1000) -> CheckRecord:
    """Ball-verifier binding: exhaustive on the [3,1] repetition instance
    (where the pair bound is met with equality) and budgeted on [7,4],
    with the overlap bound checked exactly on every enumerated pair."""
    started = time.time()
    inst3 = bcjl.BcjlInstance(
        code=coding.named_code("rep31"), delta=0.0, hash_member=1,
        syndrome_bits=(0, 0), masked_bit=0,
    )
    r3 = bcjl.na_binding(inst3)
    inst7 = bcjl.BcjlInstance(
        code=coding.named_code("hamming74"), delta=1.0 / 7.0, hash_member=5,
        syndrome_bits=(0, 1, 0), masked_bit=1,
    )
    r7 = bcjl.na_binding(inst7, budget=budget, seed=(seed, 8))
    checks = {
        "small_exhaustive": r3["exhaustive"],
        "small_bound": r3["max_sum"] <= r3["bound"] + 1e-9,
        "small_equality": abs(r3["max_sum"] - r3["bound"]) <= 1e-9,
        "small_overlap": r3["overlap_bound_ok"],
        "large_bound": r7["max_sum"] <= r7["bound"] + 1e-9,
        "large_overlap": r7["overlap_bound_ok"],
    }
    values = {
        "small": {k: r3[k] for k in ("max_sum", "bound", "pairs_evaluated")},
        "large": {k: r7[k] for k in ("max_sum", "bound", "pairs_evaluated")},
        "checks": checks,
    }
    return _finish(
        "08-ball-binding", all(checks.values()), values, r7["bound"] + 1e-9,
        r7["bound"] + 1e-9 - r7["max_sum"], "enumeration",
        {"criterion": 8, "budget": budget}, started,
    )


def criterion_09_privacy_amplification(seed=0, instances: int = 50) -> CheckRecord:
    """Exact masked-bit distance against the certified min-entropy bound."""
    started = time.time()
    rng = rng_from_seed((seed, 9))
    worst_slack = math.inf
    failures = []
    for k in range(instances):
        n = int(rng.integers(2, 5))
        dim_e = int(rng.integers(2, 5))
        symbols = tuple(range(2**n))
        weights = rng.random(2**n)
        weights /= weights.sum()
        conditionals = tuple(
            density_from_matrix(shape(("E", dim_e)), random_density_matrix(dim_e, rng))
            for _ in symbols
        )
        cq = CqState(symbols, tuple(float(w) for w in weights), conditionals)
        ok, distance, bound, hmin = hashing.privacy_amp_check(cq, n, tol=1e-9)
        worst_slack = min(worst_slack, bound + 1e-9 - distance)
        if not ok:
            failures.append({"instance": k, "distance": distance, "bound": bound})
    values = {"instances": instances, "worst_slack": worst_slack, "failures": failures[:10]}
    return _finish(
        "09-privacy-amplification", not failures, values, None, worst_slack,
        "solver-certificate", {"criterion": 9, "instances": instances}, started,
    )


def criterion_10_commit_tails(seed=0, runs: int = 2000) -> CheckRecord:
    """Honest commit runs never fail a check; the size-abort frequency
    matches the exact binomial tail and sits under the stated exponential
    bound; the sampling-agreement frequency stays below its claim."""
    started = time.time()
    code = coding.named_code("rep31")
    results = {}
    ok = True
    for big_n, q in ((40, 0.1), (64, 0.05)):
        sim = onecc.simulate_commit(
            onecc.OneCcInstance(big_n, q, code), 0, runs=runs, seed=(seed, 10, big_n)
        )
        cutoff = 2.0 * q * big_n
        exact = sum(
            math.comb(big_n, t) * q**t * (1 - q) ** (big_n - t)
            for t in range(int(math.floor(cutoff)) + 1, big_n + 1)
        )
        freq = sim["aborts_size"] / runs
        sigma = math.sqrt(max(exact * (1 - exact), 1e-12) / runs)
        hoeffding = 2.0 * math.exp(-2.0 * q * q * big_n)
        entry_ok = (
            sim["aborts_check"] == 0
            and abs(freq - exact) <= 3.0 * sigma
            and exact <= hoeffding
            and freq <= hoeffding + 3.0 * sigma
        )
        ok = ok and entry_ok
        results[f"N{big_n}"] = {
            "check_aborts": sim["aborts_check"],
            "size_abort_frequency": freq,
            "exact_tail": exact,
            "sigma": sigma,
            "hoeffding_bound": hoeffding,
            "ok": entry_ok,
        }
    mc = bcjl.sampling_equivalence_mc(n=16, delta=0.25, mismatches=5, runs=20000,
                                      seed=(seed, 10, 999))
    claim_ok = mc["frequency"] <= mc["claim_bound"] + 3.0 * mc["sigma"]
    exact_ok = abs(mc["frequency"] - mc["exact"]) <= 3.0 * mc["sigma"]
    ok = ok and claim_ok and exact_ok
    results["sampling"] = {**{k: mc[k] for k in ("frequency", "exact", "claim_bound", "sigma")},
                           "ok": claim_ok and exact_ok}
    return _finish(
        "10-commit-tails", ok, results, None, None, "monte-carlo",
        {"criterion": 10, "runs": runs}, started,
    )


def criterion_11_uc_demos(seed=0, runs: int = 1000) -> CheckRecord:
    """Honest transfer completeness, the rushing-simulator comparison, and
    the exhaustive choice-functionality table."""
    started = time.time()
    correct = 0
    completed = 0
    for k in range(runs):
        c = k % 2
        tr = ucsim.run_ot_protocol((0,), (1,), c, 8, seed=(seed, 11, k))
        if tr.aborted:
            continue
        completed += 1
        if tr.outputs["bob"] == (c,):
            correct += 1
    completeness_ok = completed > 0 and correct == completed
    demo_fixed = ucsim.run_simulator_demo(
        "sender", script="fixed-state", runs=runs, n=8, seed=(seed, 11, 1001),
        s0=(0,), s1=(1,), c=1,
    )
    demo_noisy = ucsim.run_simulator_demo(
        "sender", script="random-announce", runs=runs, n=8, seed=(seed, 11, 1002),
        s0=(0,), s1=(1,), c=0,
    )
    expected = [
        {"sender_in": x, "chooser_in": c, "sender_learns": c,
         "chooser_receives": x if c == 1 else None}
        for x in (0, 1) for c in (0, 1)
    ]
    table_ok = ucsim.one_cc_table() == expected
    values = {
        "completed_runs": completed,
        "correct_runs": correct,
        "fixed_state_demo": {"pass": demo_fixed["pass"], "max_z": demo_fixed["max_z"]},
        "random_announce_demo": {"pass": demo_noisy["pass"], "max_z": demo_noisy["max_z"]},
        "table_exhaustive": table_ok,
    }
    passed = completeness_ok and demo_fixed["pass"] and demo_noisy["pass"] and table_ok
    return _finish(
        "11-uc-simulator-demos", passed, values, None, None, "monte-carlo",
        {"criterion": 11, "runs": runs}, started,
    )


def criterion_12_storage_reduction(seed=0, instances: int = 4) -> CheckRecord:
    """Measured two-sided opening advantage against the square-root
    non-adaptive bound for one stored qubit, via the projective net."""
    started = time.time()
    rng = rng_from_seed((seed, 12))
    failures = []
    trials_run = 0
    worst_slack = math.inf
    for k in range(instances):
        dim_b = int(rng.choice([4, 6]))
        openings_zero = tuple(
            (f"z{j}", random_projector(dim_b, int(rng.integers(1, dim_b // 2 + 1)), rng))
            for j in range(int(rng.integers(1, 3)))
        )
        openings_one = tuple(
            (f"o{j}", random_projector(dim_b, int(rng.integers(1, dim_b // 2 + 1)), rng))
            for j in range(int(rng.integers(1, 3)))
        )
        scheme = commitments.ProjectiveCommitmentScheme(openings_zero, openings_one)
        rows = commitments.storage_reduction_check(
            scheme, q=1, trials=3, seed=(seed, 12, k), mode="projective-bruteforce"
        )
        for row in rows:
            trials_run += 1
            worst_slack = min(worst_slack, row["bound"] - row["alpha"])
            if row["pass"] is False:
                failures.append({"instance": k, "trial": row["trial"],
                                 "alpha": row["alpha"], "bound": row["bound"]})
    values = {
        "instances": instances,
        "trials": trials_run,
        "worst_slack": worst_slack,
        "failures": failures[:10],
    }
    return _finish(
        "12-storage-reduction", not failures, values, None, worst_slack,
        "net-search", {"criterion": 12, "instances": instances}, started,
    )


ALL_CRITERIA = (
    criterion_01_guessing_constant,
    criterion_02_bell_counterexample,
    criterion_03_random_games,
    criterion_04_measurement_domination,
    criterion_05_norm_lemma,
    criterion_06_cheat_state,
    criterion_07_wrong_opening,
    criterion_08_ball_binding,
    criterion_09_privacy_amplification,
    criterion_10_commit_tails,
    criterion_11_uc_demos,
    criterion_12_storage_reduction,
)


def run_all(seed=0, only: set[int] | None = None) -> ExperimentReport:
    checks = []
    for idx, fn in enumerate(ALL_CRITERIA, start=1):
        if only is not None and idx not in only:
            continue
        checks.append(fn(seed=seed))
    return ExperimentReport(suite="acceptance", seed=seed, checks=checks)
