"""``loewner-lab`` command line: run suites, search counterexamples, verify reports.

Exit codes: 0 all checks passed, 1 an unexpected failure, 2 a configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, LoewnerLabError, ParameterError
from .hermitian import FunctionSpec, Tolerances
from .report import dumps, load_report, to_csv, verify_report, write_report
from .runner import TrialConfig, run_suite, search_counterexample
from .suites import SUITES

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _add_trial_args(p, trials_flag, trials_default):
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--dims", type=_ints, default=(2, 3, 4), help="comma-separated, e.g. 2,3,4")
    p.add_argument(trials_flag, dest="trials", type=int, default=trials_default)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", dest="p_values", type=_floats, default=(1.5, 2.0, 3.0))
    p.add_argument("--map", dest="map_kind", default="random_unital")
    p.add_argument("--fn", default=None, help="power:0.5, log, negtlogt, one_minus_t_power:0.5, square")
    p.add_argument("--r", type=float, default=0.5, help="exponent for holder_mccarthy")
    p.add_argument("--lambda-sampling", default="mixed:5", help="grid:K, uniform or mixed:K")
    p.add_argument("--tol-psd", type=float, default=1e-8)
    p.add_argument("--tol-eig", type=float, default=1e-13)
    p.add_argument("--tol-eq", type=float, default=1e-9)


def _config(args, counterexample_mode):
    return TrialConfig(
        suite=args.suite,
        dims=args.dims,
        trials_per_dim=args.trials,
        seed=args.seed,
        p_values=args.p_values,
        lambda_sampling=args.lambda_sampling,
        tolerances=Tolerances(eig_offdiag=args.tol_eig, psd_slack=args.tol_psd, equality_slack=args.tol_eq),
        map_kind=args.map_kind,
        counterexample_mode=counterexample_mode,
        fn=FunctionSpec.parse(args.fn) if args.fn else None,
        r=args.r,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loewner-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a randomized suite and write a report")
    _add_trial_args(run, "--trials", 100)
    run.add_argument("--counterexample", action="store_true", help="allow hypothesis-violating parameters")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--out", default=None, help="output path (stdout if omitted)")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--no-timing", action="store_true", help="write runtime_ms as null")

    cx = sub.add_parser("counterexample", help="search for a violating instance")
    _add_trial_args(cx, "--budget", 1000)

    ver = sub.add_parser("verify", help="re-check the worst trial of a JSON report")
    ver.add_argument("--report", required=True)
    return parser


def _cmd_run(args):
    cfg = _config(args, args.counterexample)
    report = run_suite(cfg, workers=args.workers)
    timing = not args.no_timing
    if args.out:
        write_report(report, args.format, args.out, timing=timing)
    else:
        sys.stdout.write(dumps(report, timing) if args.format == "json" else to_csv(report))
    print(
        f"{cfg.suite}: {report.n_passed}/{report.total} passed, "
        f"{report.unexpected_failures} unexpected failures, worst gap {report.worst_gap!r}",
        file=sys.stderr,
    )
    return EXIT_FAIL if report.unexpected_failures else EXIT_OK


def _cmd_counterexample(args):
    cfg = _config(args, True)
    found = search_counterexample(cfg)
    if found is None:
        print(json.dumps({"found": False, "budget": cfg.total_trials}))
    else:
        print(json.dumps({"found": True, **found.to_json()}, indent=1))
    return EXIT_OK


def _cmd_verify(args):
    data = load_report(args.report)
    ok, recorded, recomputed = verify_report(data)
    print(f"worst trial: recorded {recorded!r}, recomputed {recomputed!r}: {'reproduced' if ok else 'MISMATCH'}")
    agg = data["aggregate"]
    unexpected = agg.get("unexpected_failures", agg["total"] - agg["passed"])
    return EXIT_OK if ok and not unexpected else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": _cmd_run, "counterexample": _cmd_counterexample, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except (ConfigError, ParameterError) as exc:
        print(f"loewner-lab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LoewnerLabError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"loewner-lab: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
