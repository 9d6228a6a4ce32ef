"""Command-line front end.

Exit codes: 0 success/pass, 1 verification failure, 2 input or usage
error, 3 degenerate-shape condition.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis, concurrence, io, two_copy
from .concurrence import SEPARABILITY_ATOL
from .errors import DegenerateShapeError, FermiconError, StateFileError
from .fock import SystemShape, random_slater_state, random_state, slater_state
from .two_copy import expectation_identical

_TOLERANCES = {
    "separability": SEPARABILITY_ATOL,
    "bound": 1e-10,
    "diagonal": analysis.DIAGONAL_ATOL,
    "decomposition": analysis.DECOMPOSITION_ATOL,
}


def _report(command, shape, seed, results):
    return {
        "command": list(command),
        "version": __version__,
        "shape": {"d": shape.d, "n": shape.n},
        "seed": seed,
        "tolerances": _TOLERANCES,
        "results": results,
    }


def _load_state(path, renormalize):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return io.parse_state_text(text, renormalize=renormalize)


def _parse_modes(text):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise StateFileError(f"cannot parse mode list {text!r}") from None


def cmd_gen(args, argv):
    if args.kind == "fghz":
        state = concurrence.fghz_state()
    elif args.kind == "slater":
        if args.d is None or args.modes is None:
            raise StateFileError("gen slater requires --d and --modes")
        modes = _parse_modes(args.modes)
        state = slater_state(SystemShape(args.d, len(modes)), modes)
    else:
        if args.d is None or args.n is None:
            raise StateFileError(f"gen {args.kind} requires --d and --n")
        shape = SystemShape(args.d, args.n)
        maker = random_state if args.kind == "random" else random_slater_state
        state = maker(shape, seed=args.seed)
    sys.stdout.write(io.state_to_text(state))
    return 0


def _concurrence_results(state, tol):
    report = concurrence.multipartite_concurrence(state, tol=tol)
    results = {
        "bipartitions": [
            {
                "m": r.m,
                "purity": r.purity,
                "lower_bound": r.lower_bound,
                "upper_bound": r.upper_bound,
                "verdict": r.verdict,
            }
            for r in report.records
        ],
        "alpha": report.alpha,
        "value": report.value,
        "degenerate": report.degenerate,
    }
    if state.shape.n == 2:
        results["c_ff_purity"] = concurrence.c_ff_purity(state, tol=tol)
        rank = concurrence.slater_rank_two_fermions(state)
        results["slater_rank"] = rank.rank
        if state.shape.d == 4:
            results["c_ff_wedge"] = concurrence.c_ff_wedge(state)
    return results


def cmd_concurrence(args, argv):
    state = _load_state(args.state, args.renormalize)
    results = _concurrence_results(state, args.tol)
    sys.stdout.write(io.render_report(_report(argv, state.shape, None, results)))
    return 0


_OBSERVABLES = {
    "af": two_copy.observable_Af,
    "afprime": two_copy.observable_Af_prime,
    "atilde": two_copy.observable_A_tilde,
    "a": two_copy.observable_A,
}


def cmd_twocopy(args, argv):
    state = _load_state(args.state, args.renormalize)
    if args.observable == "onm":
        if args.m is None:
            raise StateFileError("twocopy onm requires --m")
        op = two_copy.observable_O_NM(state.shape, args.m, sign=args.sign)
    else:
        op = _OBSERVABLES[args.observable](state.shape)
    value = expectation_identical(op, state)
    results = {"observable": args.observable, "expectation": value}
    if args.observable == "onm":
        results["m"] = args.m
    if args.observable in ("af", "afprime"):
        direct = concurrence.multipartite_concurrence(state).value
        sqrt_value = float(np.sqrt(max(0.0, value)))
        results["sqrt_expectation"] = sqrt_value
        results["concurrence_value"] = direct
        results["difference"] = abs(sqrt_value - direct)
    sys.stdout.write(io.render_report(_report(argv, state.shape, None, results)))
    return 0


def _campaign_results(report):
    return {"kind": report.kind, "trials": report.trials, "passed": report.passed,
            **report.metrics}


def cmd_verify(args, argv):
    if args.campaign:
        parts = args.campaign.split(",")
        if len(parts) != 2:
            raise StateFileError("--campaign expects 'N,d'")
        n, d = (int(p) for p in parts)
        shape = SystemShape(d, n)
        ineq = analysis.inequality_campaign(shape, args.trials, args.seed)
        results = {"inequality": _campaign_results(ineq)}
        passed = ineq.passed
        if 2 * n <= d:
            eq = analysis.slater_equality_check(shape, seed=args.seed)
            results["slater_equality"] = _campaign_results(eq)
            passed = passed and eq.passed
        results["passed"] = passed
        sys.stdout.write(io.render_report(_report(argv, shape, args.seed, results)))
        return 0 if passed else 1
    if not args.state:
        raise StateFileError("verify needs a state file or --campaign")
    state = _load_state(args.state, args.renormalize)
    report = analysis.appendix_verify(state)
    results = _campaign_results(report)
    sys.stdout.write(io.render_report(_report(argv, state.shape, None, results)))
    return 0 if report.passed else 1


def cmd_sensitivity(args, argv):
    state = _load_state(args.state, args.renormalize)
    epsilons = np.geomspace(args.eps_min, args.eps_max, args.points)
    records = analysis.sensitivity_sweep(state, args.seed, epsilons)
    slope = analysis.fit_gap_slope(records)
    if args.format == "csv":
        lines = ["epsilon,c_exp,c_mean,gap"]
        for r in records:
            lines.append(
                ",".join(format(v, ".17g") for v in (r.epsilon, r.c_exp, r.c_mean, r.gap))
            )
        sys.stdout.write("\n".join(lines) + "\n")
        return 0
    results = {
        "records": [
            {"epsilon": r.epsilon, "c_exp": r.c_exp, "c_mean": r.c_mean, "gap": r.gap}
            for r in records
        ],
        "slope": slope,
    }
    sys.stdout.write(io.render_report(_report(argv, state.shape, args.seed, results)))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fermicon",
        description="Entanglement measures for pure states of identical fermions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("gen", help="generate a state file on stdout")
    gen.add_argument("kind", choices=["slater", "fghz", "random", "random-slater"])
    gen.add_argument("--d", type=int)
    gen.add_argument("--n", type=int)
    gen.add_argument("--modes", help="comma-separated 1-based modes (slater)")
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(func=cmd_gen)

    conc = sub.add_parser("concurrence", help="multipartite concurrence report")
    conc.add_argument("state", help="state file path, or - for stdin")
    conc.add_argument("--tol", type=float, default=SEPARABILITY_ATOL)
    conc.add_argument("--renormalize", action="store_true")
    conc.set_defaults(func=cmd_concurrence)

    tc = sub.add_parser("twocopy", help="two-copy observable expectation")
    tc.add_argument("state")
    tc.add_argument(
        "--observable", required=True, choices=["af", "afprime", "atilde", "a", "onm"]
    )
    tc.add_argument("--m", type=int)
    tc.add_argument("--sign", choices=["+", "-"], default="+")
    tc.add_argument("--renormalize", action="store_true")
    tc.set_defaults(func=cmd_twocopy)

    ver = sub.add_parser("verify", help="diagonal identities or bound campaign")
    ver.add_argument("state", nargs="?")
    ver.add_argument("--campaign", help="shape as 'N,d'")
    ver.add_argument("--trials", type=int, default=100)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--renormalize", action="store_true")
    ver.set_defaults(func=cmd_verify)

    sens = sub.add_parser("sensitivity", help="copy-mismatch sweep")
    sens.add_argument("state")
    sens.add_argument("--eps-min", type=float, default=1e-3)
    sens.add_argument("--eps-max", type=float, default=1e-1)
    sens.add_argument("--points", type=int, default=9)
    sens.add_argument("--seed", type=int, default=0)
    sens.add_argument("--format", choices=["report", "csv"], default="report")
    sens.add_argument("--renormalize", action="store_true")
    sens.set_defaults(func=cmd_sensitivity)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.subcommand == "sensitivity":
        if not (0.0 < args.eps_min < args.eps_max <= 0.5) or args.points < 2:
            print(
                "sensitivity needs 0 < eps-min < eps-max <= 0.5 and points >= 2",
                file=sys.stderr,
            )
            return 2
    try:
        return args.func(args, argv)
    except DegenerateShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FermiconError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
