"""Command line entry point.

Every subcommand assembles an ExperimentReport, prints one line per check
to standard output, and optionally writes the full JSON report to --out.
Exit codes: 0 all checks passed, 1 at least one failed, 2 usage or input
error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import accessible, acceptance, bcjl, coding, commitments, games, onecc, ucsim
from .errors import CapExceededError, InputError
from .report import CheckRecord, ExperimentReport, digest_inputs
from .states import load_state


def _parse_bits(text: str) -> tuple[int, ...]:
    try:
        bits = tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise InputError(f"expected a bit list like '0,1,0': {text!r}") from exc
    if any(b not in (0, 1) for b in bits):
        raise InputError(f"bits must be 0 or 1: {text!r}")
    return bits


def _emit(report: ExperimentReport, out: str | None) -> int:
    for chk in report.checks:
        status = "PASS" if chk.passed else "FAIL"
        print(f"{status} {chk.name} ({chk.runtime_s:.2f}s)")
    print(f"{'PASS' if report.passed else 'FAIL'} suite={report.suite} "
          f"seed={report.seed} checks={len(report.checks)}")
    if out:
        report.save(out)
        print(f"report written to {out}")
    return 0 if report.passed else 1


def _game_record(tag: str, res: games.GameResult) -> CheckRecord:
    started = time.time()
    ok = res.ok
    values = {
        "non_adaptive": res.non_adaptive,
        "semi_adaptive": res.semi_adaptive,
        "adaptive": res.adaptive,
        "zero_entropy_a": res.zero_entropy_a,
        "certificate_gap": res.adaptive_cert.gap,
        "bounds": [
            {"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "passed": c.passed,
             "expected_violation": c.expected_violation,
             "informational": c.informational}
            for c in res.bound_checks
        ],
    }
    return CheckRecord(
        name=tag, passed=ok, values=values, bound=None, slack=None,
        provenance="solver-certificate", inputs_digest=digest_inputs(tag),
        runtime_s=time.time() - started,
    )


def _cmd_game(args) -> int:
    checks = []
    if args.bell:
        res = games.verify_main_theorem(games.bell_game(), tol=args.tol)
        checks.append(_game_record("bell", res))
    if args.random:
        for k in range(args.random):
            game = games.random_game(
                args.dim_a, args.dim_b, args.tests, seed=(args.seed, k)
            )
            res = games.verify_main_theorem(game, tol=args.tol)
            checks.append(_game_record(f"random-{k}", res))
    if args.state and args.family:
        game = games.AttackGame(load_state(args.state), games.load_family(args.family))
        res = games.verify_main_theorem(game, tol=args.tol)
        checks.append(_game_record("from-files", res))
    if not checks:
        raise InputError("nothing to do: pass --bell, --random N, or --state/--family")
    return _emit(ExperimentReport("game", args.seed, checks), args.out)


def _cmd_binding(args) -> int:
    started = time.time()
    scheme = commitments.load_scheme(args.scheme)
    checks = []
    eps_na = commitments.scheme_epsilon_na(scheme)
    checks.append(CheckRecord(
        name="non-adaptive-epsilon", passed=True,
        values={"epsilon": eps_na}, provenance="closed-form",
        inputs_digest=digest_inputs(args.scheme), runtime_s=time.time() - started,
    ))
    if args.state:
        rho = load_state(args.state)
        report = commitments.adaptive_binding(scheme, rho, mode=args.mode,
                                              tol=args.tol)
        checks.append(CheckRecord(
            name="adaptive-binding", passed=True,
            values={"p0": report.p0, "p1": report.p1, "epsilon": report.epsilon,
                    "mode": report.mode},
            provenance="net-search", inputs_digest=digest_inputs(args.state),
            runtime_s=time.time() - started,
        ))
    if args.storage_q is not None:
        rows = commitments.storage_reduction_check(
            scheme, q=args.storage_q, trials=args.trials, seed=args.seed
        )
        ok = all(row["pass"] is not False for row in rows)
        checks.append(CheckRecord(
            name="storage-reduction", passed=ok, values={"rows": rows},
            provenance="net-search", inputs_digest=digest_inputs(args.scheme),
            runtime_s=time.time() - started,
        ))
    return _emit(ExperimentReport("binding", args.seed, checks), args.out)


def _cmd_onecc(args) -> int:
    checks = []
    if args.guessing:
        started = time.time()
        cert = onecc.single_position_guessing(tol=args.tol)
        checks.append(CheckRecord(
            name="single-position-guessing", passed=cert.gap <= args.tol,
            values={"value": cert.primal_value, "gap": cert.gap},
            provenance="solver-certificate", inputs_digest=digest_inputs("guessing"),
            runtime_s=time.time() - started,
        ))
    if args.commit_sim:
        started = time.time()
        instance = onecc.OneCcInstance(args.big_n, args.q, coding.named_code(args.code))
        sim = onecc.simulate_commit(instance, args.bit, runs=args.runs, seed=args.seed)
        view = sim.pop("last_view", None)
        checks.append(CheckRecord(
            name="commit-simulation", passed=sim["aborts_check"] == 0,
            values=sim, provenance="monte-carlo",
            inputs_digest=digest_inputs([args.big_n, args.q, args.code]),
            runtime_s=time.time() - started,
        ))
        del view
    if args.wrong_opening:
        started = time.time()
        code = coding.named_code(args.code)
        worst = 0.0
        all_ok = True
        bound = None
        import numpy as np
        from .rand import rng_from_seed
        rng = rng_from_seed((args.seed, 71))
        for k in range(args.samples):
            theta = rng.integers(0, 2, size=code.n).astype(np.uint8)
            s = rng.integers(0, 2, size=code.n - code.k).astype(np.uint8)
            state = onecc.sample_smallsup_state(theta, args.delta, 2,
                                                seed=(args.seed, 71, k))
            chk = onecc.wrong_opening_bound_check(state, code, s, tol=args.tol)
            worst = max(worst, chk["worst_value"])
            bound = chk["bound"]
            all_ok = all_ok and chk["pass"]
        checks.append(CheckRecord(
            name="wrong-opening", passed=all_ok,
            values={"worst_value": worst, "samples": args.samples},
            bound=bound, slack=None if bound is None else bound - worst,
            provenance="sampled-search",
            inputs_digest=digest_inputs([args.code, args.delta]),
            runtime_s=time.time() - started,
        ))
    if not checks:
        raise InputError(
            "nothing to do: pass --guessing, --commit-sim, or --wrong-opening"
        )
    return _emit(ExperimentReport("onecc", args.seed, checks), args.out)


def _cmd_bcjl(args) -> int:
    checks = []
    started = time.time()
    code = coding.named_code(args.code)
    if args.n and args.n != code.n:
        raise InputError(f"--n {args.n} does not match code length {code.n}")
    syndrome = _parse_bits(args.syndrome) if args.syndrome else tuple(
        [0] * (code.n - code.k)
    )
    instance = bcjl.BcjlInstance(
        code=code, delta=args.delta, hash_member=args.hash_member,
        syndrome_bits=syndrome, masked_bit=args.masked_bit,
    )
    result = bcjl.na_binding(instance, budget=args.budget, seed=args.seed)
    if "note" in result:
        checks.append(CheckRecord(
            name="binding", passed=True, values=result, provenance="enumeration",
            inputs_digest=digest_inputs([args.code, args.delta]),
            runtime_s=time.time() - started,
        ))
    else:
        checks.append(CheckRecord(
            name="binding", passed=bool(result["pass"] and result["overlap_bound_ok"]),
            values={k: result[k] for k in
                    ("max_sum", "pairs_evaluated", "exhaustive", "overlap_bound_ok")},
            bound=result["bound"], slack=result["bound"] - result["max_sum"],
            provenance="enumeration",
            inputs_digest=digest_inputs([args.code, args.delta, args.hash_member]),
            runtime_s=time.time() - started,
        ))
    if args.hiding_n:
        started = time.time()
        hide = bcjl.hiding_distance_exact(args.hiding_n, coding.named_code(args.code))
        checks.append(CheckRecord(
            name="hiding", passed=hide["pass"], values=hide,
            provenance="enumeration", inputs_digest=digest_inputs(args.hiding_n),
            runtime_s=time.time() - started,
        ))
    return _emit(ExperimentReport("bcjl", args.seed, checks), args.out)


def _cmd_uc(args) -> int:
    checks = []
    if args.table:
        started = time.time()
        checks.append(CheckRecord(
            name="one-cc-table", passed=True, values={"table": ucsim.one_cc_table()},
            provenance="enumeration", inputs_digest=digest_inputs("table"),
            runtime_s=time.time() - started,
        ))
    if args.honest_ot:
        started = time.time()
        correct = completed = 0
        for k in range(args.runs):
            c = k % 2
            tr = ucsim.run_ot_protocol((0,), (1,), c, args.n, seed=(args.seed, k))
            if tr.aborted:
                continue
            completed += 1
            correct += tr.outputs["bob"] == (c,)
        checks.append(CheckRecord(
            name="honest-ot", passed=completed > 0 and correct == completed,
            values={"runs": args.runs, "completed": completed, "correct": correct},
            provenance="monte-carlo", inputs_digest=digest_inputs(args.n),
            runtime_s=time.time() - started,
        ))
    if args.demo:
        started = time.time()
        demo = ucsim.run_simulator_demo(
            args.demo, script=args.script, runs=args.runs, n=args.n,
            seed=args.seed,
        )
        values = {k: demo[k] for k in demo if k not in ("real", "ideal")}
        checks.append(CheckRecord(
            name=f"{args.demo}-demo-{args.script}", passed=demo["pass"],
            values=values, provenance="monte-carlo",
            inputs_digest=digest_inputs([args.demo, args.script]),
            runtime_s=time.time() - started,
        ))
    if not checks:
        raise InputError("nothing to do: pass --table, --honest-ot, or --demo")
    return _emit(ExperimentReport("uc", args.seed, checks), args.out)


def _cmd_info(args) -> int:
    started = time.time()
    rho = load_state(args.state)
    est = accessible.imax_acc_bounds(rho, budget=args.budget, seed=args.seed)
    h0 = accessible.zero_entropy(rho, "A")
    checks = [CheckRecord(
        name="accessible-info-bounds", passed=est.lower <= est.upper + args.tol,
        values={"lower": est.lower, "upper": est.upper, "searched": est.searched,
                "zero_entropy_a": h0},
        bound=h0, slack=h0 - est.lower, provenance="sampled-search",
        inputs_digest=digest_inputs(args.state), runtime_s=time.time() - started,
    )]
    return _emit(ExperimentReport("info", args.seed, checks), args.out)


def _cmd_verify_all(args) -> int:
    only = None
    if args.only:
        only = {int(tok) for tok in args.only.replace(",", " ").split()}
    report = acceptance.run_all(seed=args.seed, only=only)
    return _emit(report, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamebound",
        description="Adaptive-versus-non-adaptive game bounds and the "
                    "commitment analyses built on them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-7)
        p.add_argument("--budget", type=int, default=None,
                       help="search budget (default from GAMEBOUND_BUDGET)")
        p.add_argument("--out", type=str, default=None,
                       help="write the full JSON report here")

    p = sub.add_parser("game", help="attack game values and bound checks")
    common(p)
    p.add_argument("--bell", action="store_true")
    p.add_argument("--random", type=int, default=0, metavar="N")
    p.add_argument("--dim-a", type=int, default=2)
    p.add_argument("--dim-b", type=int, default=2)
    p.add_argument("--tests", type=int, default=2)
    p.add_argument("--state", type=str, default=None, help="joint state JSON")
    p.add_argument("--family", type=str, default=None, help="test family JSON")
    p.set_defaults(func=_cmd_game)

    p = sub.add_parser("binding", help="commitment binding analyses")
    common(p)
    p.add_argument("--scheme", type=str, required=True, help="scheme JSON")
    p.add_argument("--state", type=str, default=None, help="attack state JSON")
    p.add_argument("--mode", type=str, default="povm-relaxation")
    p.add_argument("--storage-q", type=int, default=None, metavar="Q")
    p.add_argument("--trials", type=int, default=3)
    p.set_defaults(func=_cmd_binding)

    p = sub.add_parser("onecc", help="commit-from-choice protocol checks")
    common(p)
    p.add_argument("--guessing", action="store_true")
    p.add_argument("--commit-sim", action="store_true")
    p.add_argument("--big-n", type=int, default=40)
    p.add_argument("--q", type=float, default=0.1)
    p.add_argument("--bit", type=int, default=0)
    p.add_argument("--runs", type=int, default=200)
    p.add_argument("--wrong-opening", action="store_true")
    p.add_argument("--code", type=str, default="rep31")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=10)
    p.set_defaults(func=_cmd_onecc)

    p = sub.add_parser("bcjl", help="ball-verifier commitment checks")
    common(p)
    p.add_argument("--code", type=str, default="rep31")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--hash-member", type=int, default=1)
    p.add_argument("--syndrome", type=str, default=None, help="bits like 0,1,0")
    p.add_argument("--masked-bit", type=int, default=0)
    p.add_argument("--hiding-n", type=int, default=None)
    p.set_defaults(func=_cmd_bcjl)

    p = sub.add_parser("uc", help="composable protocol demos")
    common(p)
    p.add_argument("--table", action="store_true")
    p.add_argument("--honest-ot", action="store_true")
    p.add_argument("--demo", type=str, choices=("sender", "receiver"), default=None)
    p.add_argument("--script", type=str, default="honest")
    p.add_argument("--runs", type=int, default=200)
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(func=_cmd_uc)

    p = sub.add_parser("info", help="accessible-information bounds")
    common(p)
    p.add_argument("--state", type=str, required=True, help="joint state JSON")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("verify-all", help="run the full acceptance suite")
    common(p)
    p.add_argument("--only", type=str, default=None,
                   help="criterion numbers like 1,2,5")
    p.set_defaults(func=_cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InputError, CapExceededError, FileNotFoundError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
