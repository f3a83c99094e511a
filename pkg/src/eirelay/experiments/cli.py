"""Command line entry point.

Exit codes: 0 success, 1 validation error, 2 analytic/simulation
disagreement (``compare``) or failed self-test, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from eirelay.experiments.config import ConfigError, load_spec
from eirelay.experiments.report import TargetNotBracketed, emit_report, gain_at_target, read_csv
from eirelay.experiments.runner import run_sweep
from eirelay.experiments.selftest import run_selftest

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_DISAGREEMENT = 2
EXIT_IO = 3

log = logging.getLogger("eirelay")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", type=Path, help="sweep configuration (JSON)")
    p.add_argument("--seed", type=int, help="override the configured seed (u64)")
    p.add_argument("--frames", type=int, help="override the number of frames per point")
    p.add_argument("--fidelity", choices=["snr", "symbol"], help="simulation fidelity")
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory (default: results)")
    p.add_argument("--workers", type=int, help="parallel workers for sweep points")
    p.add_argument(
        "--paper-compat-sum",
        action="store_true",
        help="sum unrelayed packets only up to N-1, dropping the strongest packet",
    )
    p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eirelay", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run_flags(sub.add_parser("sweep", help="run a sweep and write CSV + summary"))
    _add_run_flags(sub.add_parser("compare", help="analytic vs simulation, pass/fail per row"))

    g = sub.add_parser("gain", help="SNR gain of one curve over another at a target PER")
    g.add_argument("results", type=Path, help="results.csv written by sweep/compare")
    g.add_argument("--target", type=float, required=True, help="target PER, e.g. 1e-2")
    g.add_argument("--baseline", required=True, help="curve id, e.g. DF-N8-K16-M0")
    g.add_argument("--candidate", required=True, help="curve id, e.g. DF-N8-K16-M1")
    g.add_argument("--column", choices=["analytic", "sim"], help="PER column to use (default: analytic if present)")

    sub.add_parser("selftest", help="run the built-in invariant checks")
    return parser


def _load(args, force_both: bool = False):
    spec = load_spec(args.config)
    overrides = dict(
        seed=args.seed,
        n_frames=args.frames,
        fidelity=args.fidelity,
        workers=args.workers,
        paper_compat_sum=True if args.paper_compat_sum else None,
    )
    if force_both:
        overrides["outputs"] = frozenset({"analytic", "simulated"})
    return spec.with_overrides(**overrides)


def _cmd_sweep(args) -> int:
    spec = _load(args)
    rows = run_sweep(spec)
    formats = ("csv", "summary", "gnuplot") if args.gnuplot else ("csv", "summary")
    paths = emit_report(rows, args.out, formats)
    print(paths["summary"].read_text(encoding="utf-8"), end="")
    for kind, path in paths.items():
        log.info("wrote %s: %s", kind, path)
    return EXIT_OK


def _cmd_compare(args) -> int:
    spec = _load(args, force_both=True)
    rows = run_sweep(spec)
    formats = ("csv", "summary", "gnuplot") if args.gnuplot else ("csv", "summary")
    emit_report(rows, args.out, formats)
    failures = 0
    for r in rows:
        verdict = "PASS" if r.agreement else "FAIL"
        failures += not r.agreement
        print(
            f"{verdict} {r.curve_id} snr_db={r.snr_db:g} analytic={r.per_analytic:.6g} "
            f"sim={r.per_sim:.6g} ci=[{r.ci_low:.6g}, {r.ci_high:.6g}]"
        )
    print(f"{len(rows) - failures}/{len(rows)} rows agree")
    return EXIT_DISAGREEMENT if failures else EXIT_OK


def _cmd_gain(args) -> int:
    rows = read_csv(args.results)
    gain = gain_at_target(rows, args.target, args.baseline, args.candidate, args.column)
    print(f"{gain:.4f}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "gain":
            return _cmd_gain(args)
        return EXIT_OK if run_selftest() else EXIT_DISAGREEMENT
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except (TargetNotBracketed, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
