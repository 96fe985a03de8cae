"""``moelab`` command line.

Exit codes: 0 all checks passed, 1 internal error or failed check,
2 usage error, 3 memory guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from . import channel as ch
from .experiments import suites
from .experiments.pipeline import counterexample_pipeline
from .haar import SeedSpec, haar_unitary
from .minent import DEFAULT_STARTS, brute_force_min_entropy, min_output_entropy
from .resources import ResourceGuardError, guard

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
ORACLE_TOL = 5e-4

SUITES = ("geometric", "median", "prop5", "hhl", "levy", "fg", "independence", "hayden", "bounds",
          "lipschitz", "pinching", "structural", "optimizer")


class UsageError(Exception):
    pass


def _seed(v: str) -> int:
    n = int(v, 0)
    if not -(1 << 63) <= n < (1 << 64):
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return n


def _positive(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moelab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim-a", type=_positive, default=4)
    common.add_argument("--dim-b", type=_positive, default=2)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="per-trial / per-unitary CSV log")

    m = sub.add_parser("minent", parents=[common], help="estimate S_min of one channel")
    m.add_argument("--starts", type=_positive, default=DEFAULT_STARTS)
    m.add_argument("--unitary", choices=("haar", "identity", "swap"), default="haar")
    m.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    m.add_argument("--grid-points", type=_positive, default=10_000)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--trials", type=_positive, default=10_000)
    v.add_argument("--samples", type=_positive, help="channel / state samples for sample-based suites")
    v.add_argument("--epsilon", type=float, help="deviation level (prop5: 0.3, hhl: 0.5)")
    v.add_argument("--alpha", type=float, default=0.3, help="levy deviation above 1/sqrt(dim)")
    v.add_argument("--a-param", type=float, default=3.0)
    v.add_argument("--c", type=float, default=1.0)
    v.add_argument("--starts", type=_positive, default=DEFAULT_STARTS)
    v.add_argument("--grid-points", type=_positive, default=10_000)

    q = sub.add_parser("pipeline", parents=[common], help="additivity gap over sampled unitaries")
    q.add_argument("--c", type=float, default=1.0)
    q.add_argument("--a-param", type=float, default=3.0)
    q.add_argument("--samples", type=_positive, default=10)
    q.add_argument("--starts", type=_positive, default=20)
    q.add_argument("--tube-n", type=float, help="tube width parameter N (default |A|)")
    q.add_argument("--unitary", choices=("haar", "identity", "swap"), default="haar")
    return p


def cmd_minent(args) -> tuple[dict, bool]:
    seed = SeedSpec(args.seed)
    n = args.dim_a * args.dim_b
    guard("Stinespring unitary", n)
    if args.unitary == "haar":
        u = haar_unitary(n, seed.child(0))
    elif args.unitary == "identity":
        u = ch.identity_unitary(args.dim_a, args.dim_b)
    else:
        if args.dim_a != args.dim_b:
            raise UsageError("--unitary swap needs --dim-a == --dim-b")
        u = ch.swap_unitary(args.dim_a)
    e = ch.make_channel(u, args.dim_a, args.dim_b)
    res = min_output_entropy(e, args.starts, seed.child(1), threads=args.threads)
    report = {"name": "minent", **res.to_dict(), "checks": {}}
    if args.oracle:
        try:
            oracle = brute_force_min_entropy(e, args.grid_points, seed.child(2))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        report["oracle_value"] = oracle
        report["checks"]["oracle_agreement"] = abs(res.value - oracle) <= ORACLE_TOL
    report["passed"] = all(report["checks"].values())
    return report, report["passed"]


def _run_suite(args):
    seed = SeedSpec(args.seed)
    opts = {"threads": args.threads, "csv_path": args.csv}
    a, b, t = args.dim_a, args.dim_b, args.trials
    name = args.suite
    if name == "geometric":
        return suites.verify_geometric(a, t, seed, **opts)
    if name == "median":
        return suites.verify_median_lemma(a, b, t, seed, **opts)
    if name == "prop5":
        eps = 0.3 if args.epsilon is None else args.epsilon
        return suites.verify_prop5(a, b, args.a_param, eps, t, seed, **opts)
    if name == "hhl":
        eps = 0.5 if args.epsilon is None else args.epsilon
        return suites.verify_hhl(a, b, eps, t, seed, **opts)
    if name == "levy":
        return suites.verify_levy(a, args.alpha, t, seed, **opts)
    if name == "fg":
        return suites.verify_FG(a, b, t, seed, a=args.a_param, c=args.c, **opts)
    if name == "independence":
        return suites.verify_independence(a, t, seed, **opts)
    if name == "hayden":
        return suites.verify_hayden(a, b, args.samples or 100, seed, **opts)
    if name == "bounds":
        return suites.verify_bounds(samples=args.samples or 1000, seed=seed, **opts)
    if name == "lipschitz":
        return suites.verify_lipschitz(a, b, args.a_param, args.samples or 1000, seed, **opts)
    if name == "pinching":
        return suites.verify_pinching(args.samples or 1000, seed, **opts)
    if name == "structural":
        return suites.verify_structural(a, b, args.samples or 50, seed, **opts)
    return suites.verify_optimizer(a, b, args.samples or 20, seed, starts=args.starts,
                                   grid_points=args.grid_points, **opts)


def cmd_verify(args) -> tuple[dict, bool]:
    try:
        rep = _run_suite(args)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    return rep.to_dict(), rep.passed


def cmd_pipeline(args) -> tuple[dict, bool]:
    try:
        rep = counterexample_pipeline(
            args.dim_a, args.dim_b, args.c, args.a_param, args.samples, SeedSpec(args.seed),
            starts=args.starts, tube_n=args.tube_n, unitary=args.unitary, threads=args.threads,
            csv_path=args.csv,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return rep.to_dict(), rep.passed


COMMANDS = {"minent": cmd_minent, "verify": cmd_verify, "pipeline": cmd_pipeline}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    config = {k: v for k, v in vars(args).items() if k not in ("command", "threads", "out")}
    manifest = {
        "command": args.command,
        "config": config,
        "version": __version__,
        "seed": args.seed,
        "started_at": _now(),
    }
    try:
        report, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"moelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        print(f"moelab: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except Exception as exc:  # noqa: BLE001 - reported, mapped to exit 1
        print(f"moelab: internal error: {exc!r}", file=sys.stderr)
        return EXIT_FAIL
    manifest["finished_at"] = _now()
    manifest["outputs"] = [p for p in (args.out, report.get("csv_path")) if p]
    _emit({"manifest": manifest, "report": report}, args.out)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
