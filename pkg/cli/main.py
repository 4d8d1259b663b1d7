"""
zeno_ising.cli.main — Command-line entry point.

Usage::

    zeno-ising alpha --gamma 0.5 --tau 1.0
    zeno-ising sweep-gamma --tau 1.0 --from 0 --to 2 --step 0.01 --out a.csv
    zeno-ising simulate --n 8 --gamma 0.5 --tau 1.0 --question mz_not_one --nmax 40
    zeno-ising validate --n 8 --gamma 0.5 --tau 1.0
    zeno-ising sweep-tau --config run.cfg --workers 4

With --out, fit and kink reports go to sibling files (a.fit.csv, a.kink.csv).
A config file holds flat ``key=value`` lines (``#`` starts a comment) using
the SweepConfig field names; flags override file values. The worker count
falls back to the ZENO_ISING_WORKERS environment variable, then to the CPU
count. Exit status: 0 success, 1 failed run or validation, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from ..csvio import save_result, summary_lines, write_result
from ..engine import run
from ..errors import UsageError, ZenoError
from ..logs import configure_logging
from .schemas import Mode, SweepConfig

logger = logging.getLogger(__name__)

PROG = "zeno-ising"

COMMANDS: dict[str, Mode] = {
    "alpha": Mode.ALPHA_POINT,
    "sweep-gamma": Mode.GAMMA_SWEEP,
    "sweep-tau": Mode.TAU_SWEEP,
    "surface": Mode.SURFACE,
    "simulate": Mode.SIMULATE,
    "critical-line": Mode.CRITICAL_LINE,
    "validate": Mode.VALIDATE,
}

_CLI_ONLY = ("command", "config", "log_level", "log_file")


# ---------------------------------------------------------------------------
# Config file
# ---------------------------------------------------------------------------
def read_config_file(path: Path) -> dict[str, str]:
    """Parse flat ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{path}:{number}: expected key=value, got {raw!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


# ---------------------------------------------------------------------------
# Argument parser
# ---------------------------------------------------------------------------
def _grid_flags(parser: argparse.ArgumentParser, prefix: str = "", dest: str = "") -> None:
    parser.add_argument(f"--{prefix}from", dest=f"{dest}start", metavar="X")
    parser.add_argument(f"--{prefix}to", dest=f"{dest}stop", metavar="X")
    parser.add_argument(f"--{prefix}step", dest=f"{dest}step", metavar="H")


def _chain_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", dest="n_sites", metavar="N", help="chain size (even, >= 4)")
    parser.add_argument(
        "--question", help="mz_not_one, mz_not_pm_one, mz_equals_q:Q or mz_not_in:m,..."
    )
    parser.add_argument("--nmax", dest="n_max", metavar="N", help="number of measurements")
    parser.add_argument("--initial-state", choices=["ground", "all_up", "product"])
    parser.add_argument("--seed", help="seed of the product initial state")
    parser.add_argument("--skip-head", help="leading p_n excluded from decay fits")


def _method_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=["integral", "finite_n_product", "oracle_fit"])
    parser.add_argument("--rel-tol", help="relative quadrature tolerance")
    _chain_flags(parser)


def _kink_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--detect-kink", action="store_true", help="report the largest slope break")
    parser.add_argument("--threshold", help="kink threshold in median second differences")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", type=Path, help="flat key=value config file")
    common.add_argument("--out", dest="output", help="CSV path (default: stdout)")
    common.add_argument("--workers", help="parallel worker processes")
    common.add_argument("--log-level", default="INFO")
    common.add_argument("--log-file", type=Path)

    parser = argparse.ArgumentParser(
        prog=PROG, description="Decay constant of the repeatedly measured Ising chain."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name, parents=[common], help=help_text, argument_default=argparse.SUPPRESS
        )

    p = add("alpha", "alpha at one (gamma, tau)")
    p.add_argument("--gamma")
    p.add_argument("--tau")
    _method_flags(p)

    p = add("sweep-gamma", "alpha along a gamma grid at fixed tau")
    p.add_argument("--tau")
    _grid_flags(p)
    _method_flags(p)
    _kink_flags(p)

    p = add("sweep-tau", "alpha along a tau grid at fixed gamma")
    p.add_argument("--gamma")
    _grid_flags(p)
    _method_flags(p)
    _kink_flags(p)

    p = add("surface", "alpha over a gamma x tau grid")
    _grid_flags(p)
    _grid_flags(p, "tau-", "tau_")
    _method_flags(p)

    p = add("simulate", "first-occurrence probabilities from the state-vector oracle")
    p.add_argument("--gamma")
    p.add_argument("--tau")
    _chain_flags(p)

    p = add("critical-line", "tau0, k0 and slope jumps along a gamma grid")
    _grid_flags(p)

    p = add("validate", "state-vector against mode-product checks")
    p.add_argument("--gamma")
    p.add_argument("--tau")
    p.add_argument("--n", dest="n_sites", metavar="N")
    p.add_argument("--nmax", dest="n_max", metavar="N")
    p.add_argument("--skip-head")
    return parser


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    """Merge config-file values and flags (flags win) into a SweepConfig."""
    values: dict[str, object] = {}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        values.update(read_config_file(config_path))
    values.update({k: v for k, v in vars(args).items() if k not in _CLI_ONLY})
    values["mode"] = COMMANDS[args.command]
    try:
        return SweepConfig(**values)
    except ValidationError as exc:
        keys = tuple(str(err["loc"][0]) for err in exc.errors() if err["loc"])
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in exc.errors()
        )
        raise UsageError(f"invalid configuration: {details}", keys) from None


def parse_config(argv: Sequence[str] | None = None) -> SweepConfig:
    return config_from_args(build_parser().parse_args(argv))


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------
def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level.upper(), getattr(args, "log_file", None))
    try:
        config = config_from_args(args)
    except UsageError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 2

    try:
        result = run(config)
    except ZenoError as exc:
        logger.error("%s failed: %s", args.command, exc)
        return 1

    if config.output is not None:
        for path in save_result(config.output, result):
            logger.info("wrote %s", path)
    else:
        write_result(sys.stdout, result)
    for line in summary_lines(result):
        print(line, file=sys.stderr)
    if config.mode is Mode.VALIDATE and not result.passed:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
