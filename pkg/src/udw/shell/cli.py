"""``udw`` command-line entry point.

Exit status: 0 on success, 1 when ``verify`` finds a failing check,
2 for an invalid configuration.
"""
from __future__ import annotations

import argparse
import sys

from udw.profiles import ParameterError
from udw.shell import commands
from udw.shell.config import ConfigError, merge, read_config_file
from udw.shell.csvio import to_csv, to_json
from udw.shell.figures import PRESETS, figure_table
from udw.shell.verify import run_verify

__all__ = ["main", "build_parser"]

BUILDERS = {
    "fluid": commands.fluid_table,
    "stress": commands.stress_table,
    "response": commands.response_table,
    "scan-mu": commands.scan_mu_table,
    "figure": figure_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--ell", help="trap width; comma-separated list for response")
    for flag in ("--mu", "--eta", "--alpha", "--m-c", "--m-d", "--T", "--x-max"):
        common.add_argument(flag, type=float)
    common.add_argument("--lambda", dest="lambda_coupling", type=float, help="coupling constant")
    common.add_argument("--state", help="ground, excited or mixture:<p>")
    common.add_argument("--points", type=int)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--figure", choices=sorted(PRESETS))
    common.add_argument("--audit-printed", action="store_true", default=None)
    common.add_argument("--strict-paper", action="store_true", default=None)

    parser = argparse.ArgumentParser(prog="udw", description="Trapped-field detector model")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("fluid", "stress", "response", "scan-mu", "verify", "figure"):
        sub.add_parser(name, parents=[common])
    return parser


def _flag_values(args) -> dict:
    keys = (
        "ell", "mu", "eta", "alpha", "m_c", "m_d", "T", "lambda_coupling", "state", "x_max",
        "points", "out", "format", "figure", "audit_printed", "strict_paper",
    )
    return {k: getattr(args, k) for k in keys}


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = merge(file_values, _flag_values(args))
        if args.command == "verify":
            report = run_verify(cfg.model(), strict=cfg.strict_paper)
            _emit(report.to_json(), cfg.out)
            return report.exit_code()
        if args.command == "figure" and cfg.figure is None:
            raise ConfigError("figure needs --figure")
        table = BUILDERS[args.command](cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"udw: invalid configuration: {exc}", file=sys.stderr)
        return 2
    _emit(to_json(table) if cfg.format == "json" else to_csv(table), cfg.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
