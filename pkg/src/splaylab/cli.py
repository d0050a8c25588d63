"""Command-line interface.

Exit codes: 0 all checks held, 1 invariant or bound violation, 2 bad
configuration.  The default seed comes from SPLAYLAB_SEED when set.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import (
    BadConfigError,
    InvariantViolationError,
    NotAPermutationError,
    SplayLabError,
)
from .harness import (
    ExperimentConfig,
    Kind,
    Start,
    fuzz_invariants,
    gen_sequence,
    run_experiment,
    write_csv,
)
from .patterns import (
    check_permutation,
    decreasing_pattern_length,
    is_postorder,
    is_preorder,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2


def _default_seed() -> int:
    raw = os.environ.get("SPLAYLAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise BadConfigError(f"SPLAYLAB_SEED={raw!r} is not an integer") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splaylab",
        description="Instrumented splay-tree experiments on pattern-avoiding "
        "permutations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="print a generated request sequence")
    gen.add_argument(
        "--kind",
        required=True,
        choices=["preorder", "postorder", "sequential", "random", "k-increasing"],
    )
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--k", type=int, default=None, help="for k-increasing kinds")

    run = sub.add_parser("run", help="run an experiment and write CSV rows")
    run.add_argument(
        "--kind",
        required=True,
        choices=["preorder", "postorder", "balanced", "sequential", "random"],
    )
    run.add_argument("--n", type=int, required=True)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--start", choices=["same", "random", "perfect"], default="same")
    run.add_argument("--trials", type=int, default=1)
    run.add_argument("--paranoid", action="store_true")
    run.add_argument(
        "--timing",
        action="store_true",
        help="record wall time per trial (CSV is then not byte-reproducible)",
    )
    run.add_argument("--csv", required=True, help="output path, or - for stdout")
    run.add_argument(
        "--figures",
        action="store_true",
        help="render PNG figures next to the CSV",
    )

    check = sub.add_parser("check", help="classify a permutation file")
    check.add_argument("--file", required=True)
    check.add_argument(
        "--class",
        dest="cls",
        required=True,
        choices=["preorder", "postorder", "k-increasing"],
    )
    check.add_argument("--k", type=int, default=None)

    fuzz = sub.add_parser("fuzz", help="exhaustive plus randomized invariant checks")
    fuzz.add_argument("--max-exhaustive", type=int, default=8)
    fuzz.add_argument("--trials", type=int, default=100)
    fuzz.add_argument("--n", type=int, default=512, help="size of randomized trials")
    fuzz.add_argument("--seed", type=int, default=None)

    report = sub.add_parser("report", help="render figures from a results CSV")
    report.add_argument("--csv", required=True)
    report.add_argument("--outdir", default=None, help="default: CSV directory")
    return parser


def _read_permutation(path: str) -> list[int]:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise BadConfigError(f"cannot read {path}: {e}") from None
    tokens = text.replace(",", " ").split()
    try:
        values = [int(t) for t in tokens]
    except ValueError as e:
        raise BadConfigError(f"non-integer entry in {path}: {e}") from None
    return check_permutation(values)


def _cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    pi = gen_sequence(args.kind, args.n, seed, k=args.k)
    print(" ".join(map(str, pi)))
    return EXIT_OK


def _cmd_run(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = ExperimentConfig(
        kind=Kind(args.kind),
        n=args.n,
        seed=seed,
        start=Start(args.start),
        trials=args.trials,
        paranoid=args.paranoid,
        timing=args.timing,
    )
    rows = run_experiment(cfg)
    if args.csv == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.csv, "w") as f:
            write_csv(rows, f)
        if args.figures:
            from .report import render_figures

            for path in render_figures(args.csv, None):
                print(f"wrote {path}")
    return EXIT_OK


def _cmd_check(args) -> int:
    pi = _read_permutation(args.file)
    if args.cls == "preorder":
        member = is_preorder(pi)
        detail = ""
    elif args.cls == "postorder":
        member = is_postorder(pi)
        detail = ""
    else:
        if args.k is None or args.k < 2:
            raise BadConfigError("--class k-increasing requires --k >= 2")
        lds = decreasing_pattern_length(pi)
        member = lds <= args.k - 1
        detail = f" (longest decreasing run {lds}, limit {args.k - 1})"
    verdict = "yes" if member else "no"
    print(f"{args.cls}: {verdict} (n={len(pi)}){detail}")
    return EXIT_OK if member else EXIT_VIOLATION


def _cmd_fuzz(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = ExperimentConfig(
        kind=Kind.INVARIANT_FUZZ, n=args.n, seed=seed, trials=args.trials
    )
    report = fuzz_invariants(cfg, max_exhaustive=args.max_exhaustive, on_progress=print)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_report(args) -> int:
    from .report import render_figures

    for path in render_figures(args.csv, args.outdir):
        print(f"wrote {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": _cmd_gen,
        "run": _cmd_run,
        "check": _cmd_check,
        "fuzz": _cmd_fuzz,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (BadConfigError, NotAPermutationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolationError as e:
        print(f"violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except SplayLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
