"""The acceptance gate: one test per end-to-end criterion, each printing a
single pass/fail line with the headline numbers it was judged on."""
import pytest

from gamebound import acceptance


def _run(fn, seed=0):
    rec = fn(seed=seed)
    status = "PASS" if rec.passed else "FAIL"
    headline = {
        k: v
        for k, v in rec.values.items()
        if isinstance(v, (int, float, bool, str))
    }
    print(f"{status} {rec.name} runtime={rec.runtime_s:.2f}s {headline}")
    assert rec.passed, f"{rec.name} failed: {rec.values}"
    return rec


def test_criterion_01_guessing_constant():
    rec = _run(acceptance.criterion_01_guessing_constant)
    assert rec.values["error"] <= 1e-9


def test_criterion_02_bell_counterexample():
    rec = _run(acceptance.criterion_02_bell_counterexample)
    assert rec.values["checks"]["violation_flagged"]


def test_criterion_03_random_games():
    rec = _run(acceptance.criterion_03_random_games)
    assert rec.values["games"] == 200


def test_criterion_04_measurement_domination():
    rec = _run(acceptance.criterion_04_measurement_domination)
    assert rec.values["states"] == 100


def test_criterion_05_norm_lemma():
    rec = _run(acceptance.criterion_05_norm_lemma)
    assert rec.values["pairs"] == 100


def test_criterion_06_cheat_state():
    rec = _run(acceptance.criterion_06_cheat_state)
    assert rec.values["instances"] == 50


def test_criterion_07_wrong_opening():
    rec = _run(acceptance.criterion_07_wrong_opening)
    assert rec.values["samples"] == 100


def test_criterion_08_ball_binding():
    rec = _run(acceptance.criterion_08_ball_binding)


def test_criterion_09_privacy_amplification():
    rec = _run(acceptance.criterion_09_privacy_amplification)
    assert rec.values["instances"] == 50


def test_criterion_10_commit_tails():
    rec = _run(acceptance.criterion_10_commit_tails)


def test_criterion_11_uc_demos():
    rec = _run(acceptance.criterion_11_uc_demos)


def test_criterion_12_storage_reduction():
    rec = _run(acceptance.criterion_12_storage_reduction)


def test_run_all_collects_every_criterion():
    report = acceptance.run_all(seed=0, only={1, 5, 6})
    assert report.suite == "acceptance"
    assert len(report.checks) == 3
    assert report.passed
