"""``irep <subcommand> --config cfg.json --out DIR [--seed N]``.

Exit status is 0 when every contract of the requested experiments passes,
1 when any contract fails and 2 for configuration errors.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from ..errors import ConfigError
from .config import load_config, parse_config
from .report import write_csv, write_json
from .suites import RUNNERS, run_sample_complexity_suite

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def thread_cap():
    """Worker threads for trial loops: CPU count, capped by ``IREP_THREADS``."""
    threads = os.cpu_count() or 1
    env = os.environ.get("IREP_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError(f"IREP_THREADS must be an integer, got {env!r}") from None
        if cap < 1:
            raise ConfigError("IREP_THREADS must be at least 1")
        threads = min(threads, cap)
    return threads


def run_one(name, cfg, out_dir, threads=1):
    """Run one experiment, write its JSON and CSV files, return the report."""
    runner = RUNNERS[name]
    if runner is run_sample_complexity_suite:
        report, csv_out = runner(cfg, threads=threads)
    else:
        report, csv_out = runner(cfg)
    out_dir = Path(out_dir)
    for file_name, (header, rows) in csv_out.items():
        write_csv(out_dir / file_name, header, rows)
    write_json(out_dir / f"{report['experiment']}.json", report)
    return report


def run_all(cfg, out_dir, threads=1, log=None):
    """Run every experiment in order and write ``summary.json``.

    Timings go to ``log`` only, so report files are identical across runs.
    """
    reports = []
    for name in RUNNERS:
        start = time.perf_counter()
        reports.append(run_one(name, cfg, out_dir, threads))
        if log is not None:
            status = "pass" if reports[-1]["passed"] else "FAIL"
            print(f"{name}: {status} ({time.perf_counter() - start:.1f} s)", file=log)
    failures = [f"{r['experiment']}/{c['name']}" for r in reports for c in r["contracts"]
                if not c["passed"]]
    summary = {
        "schema": 1,
        "seed": cfg.seed,
        "experiments": [{"experiment": r["experiment"], "file": f"{r['experiment']}.json",
                         "passed": r["passed"]} for r in reports],
        "failures": failures,
        "passed": not failures,
    }
    write_json(Path(out_dir) / "summary.json", summary)
    return summary


def _apply_overrides(cfg, args):
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    if args.command == "pog":
        updates = {key: value for key, value in
                   (("width", args.width), ("g_tilde", args.g_tilde), ("bins", args.bins))
                   if value is not None}
        if updates:
            data = cfg.dump()
            data["pog"].update(updates)
            cfg = parse_config(data)
    return cfg


def build_parser():
    parser = argparse.ArgumentParser(prog="irep", description="Run invariant-representation experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*RUNNERS, "all"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", type=Path, default=None,
                         help="JSON config; omitted sections use defaults")
        cmd.add_argument("--out", type=Path, required=True, help="output directory")
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        if name == "pog":
            cmd.add_argument("--width", type=int, default=None, help="window width")
            cmd.add_argument("--g-tilde", type=int, default=None, dest="g_tilde",
                             help="check covariance for one group element only")
            cmd.add_argument("--bins", type=int, default=None, help="number of thresholds")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        threads = thread_cap()
        if args.command == "all":
            summary = run_all(cfg, args.out, threads, log=sys.stderr)
            for failure in summary["failures"]:
                print(f"contract failed: {failure}", file=sys.stderr)
            return EXIT_OK if summary["passed"] else EXIT_FAILED
        report = run_one(args.command, cfg, args.out, threads)
    except ConfigError as exc:
        print(f"irep: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for c in report["contracts"]:
        if not c["passed"]:
            print(f"contract failed: {report['experiment']}/{c['name']}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
