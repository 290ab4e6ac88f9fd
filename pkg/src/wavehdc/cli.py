"""``wavehdc`` command line.

Exit status: 0 when the experiment's predicate holds, 1 when it does not,
2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .exceptions import ConfigError, FormatError, UsageError, WaveHDCError
from .experiments.registry import REGISTRY, run_experiment
from .experiments.report import emit_report

EXIT_OK, EXIT_PREDICATE, EXIT_USAGE = 0, 1, 2
ACCEPTANCE = "acceptance"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _u64(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer, got {v}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser():
    p = _Parser(prog="wavehdc", description="Run a registered wave-HDC experiment and emit its report.")
    p.add_argument("experiment", nargs="?", help=f"experiment name, or '{ACCEPTANCE}' for the full criterion suite")
    p.add_argument("--config", metavar="FILE", help="key = value config file")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=_u64, metavar="U64")
    p.add_argument("--trials", type=_positive_int, metavar="K")
    p.add_argument("--list", action="store_true", help="list experiments with the result each reproduces")
    return p


def _list(out):
    width = max(len(n) for n in [*REGISTRY, ACCEPTANCE])
    for name, exp in REGISTRY.items():
        out.write(f"{name:<{width}}  -> {exp.anchor}\n")
    out.write(f"{ACCEPTANCE:<{width}}  -> every acceptance criterion at its default scale\n")


def _read_config(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None


def _write(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _run_acceptance(args):
    from .experiments.acceptance import run_all

    if args.config or args.trials:
        raise UsageError("acceptance runs every criterion at its defaults; only --seed, --out and --format apply")
    results = run_all(seed=42 if args.seed is None else args.seed, echo=lambda s: print(s, file=sys.stderr))
    if args.format == "json":
        text = json.dumps(
            [
                {"criterion": r.number, "name": r.name, "passed": r.passed and r.within_time,
                 "runtime": r.runtime, "limit": r.limit, "measured": r.measured}
                for r in results
            ],
            indent=2,
            default=float,
        ) + "\n"
    else:
        text = "criterion,name,passed,runtime,limit\n" + "".join(
            f"{r.number},{r.name},{str(r.passed and r.within_time).lower()},{r.runtime:.3f},{r.limit:g}\n" for r in results
        )
    _write(text, args.out)
    return EXIT_OK if all(r.passed and r.within_time for r in results) else EXIT_PREDICATE


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.list:
            _list(sys.stdout)
            return EXIT_OK
        if not args.experiment:
            raise UsageError(f"an experiment name is required; registered: {', '.join(REGISTRY)}, {ACCEPTANCE}")
        if args.experiment == ACCEPTANCE:
            return _run_acceptance(args)
        config_text = _read_config(args.config) if args.config else ""
        report = run_experiment(args.experiment, config_text, {"seed": args.seed, "trials": args.trials})
        _write(emit_report(report, args.format), args.out)
        return EXIT_OK if report.passed else EXIT_PREDICATE
    except (UsageError, ConfigError, FormatError) as exc:
        print(f"wavehdc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WaveHDCError as exc:
        # invalid physical parameters surfacing from inside a run
        print(f"wavehdc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
