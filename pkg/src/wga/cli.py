"""``wga`` command-line entry point."""

from __future__ import annotations

import argparse
import sys

from .commands import run_command
from .errors import WGAError
from .report import COMMANDS, FORMATS, ExperimentConfig, write_report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wga", description="Weighted group algebra experiments.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", default="Z", help='group text, e.g. "Z", "Z^2xZ_4", "1"')
    p.add_argument("--weight", help='weight DSL, e.g. "poly:1*const:1" (default: w = 1)')
    p.add_argument("--element", help="element literal [[coords, re, im], ...]")
    p.add_argument("--measure", help='measure literal [{"character": ..., "mass": m}, ...]')
    p.add_argument("--phi", help="target character literal (separate)")
    p.add_argument("--avoid", help="JSON list of character literals to vanish on (separate)")
    p.add_argument("--max-exponent", type=int, dest="max_exponent")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--force", action="store_true", help="overwrite an existing output file")
    return p


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig.from_dict(vars(ns))


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        report = run_command(cfg)
        write_report(report, cfg.out, cfg.format, force=cfg.force)
    except (WGAError, ValueError, OverflowError, OSError) as exc:
        print(f"wga: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
