"""
zeno_ising.csvio — CSV output of run results.

Floats use 17 significant digits and '.' as decimal separator regardless of
locale, so an identical run writes byte-identical files.
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import TYPE_CHECKING, Any, Callable, Iterable, Sequence, TextIO

import numpy as np

if TYPE_CHECKING:
    from .analyzer import FitResult, KinkReport
    from .engine import CriticalRow, SweepResult, SweepSample
    from .oracle import DecayCurve

SWEEP_HEADER = ("gamma", "tau", "alpha", "method", "err")
CURVE_HEADER = ("n", "p_n", "survival")
CRITICAL_HEADER = ("gamma0", "tau0", "k0", "delta_gamma", "delta_tau")
CHECK_HEADER = ("check", "residual", "tolerance", "passed")
FIT_HEADER = (
    "n_sites",
    "tau",
    "beta",
    "alpha_hat",
    "intercept",
    "r_squared",
    "beta_stderr",
    "window_start",
    "window_end",
)
KINK_HEADER = ("location", "left_slope", "right_slope", "jump", "detected", "threshold", "index")


def fmt(value: float) -> str:
    """Locale-independent round-trip formatting."""
    return format(float(value), ".17g")


def _cell(value: object) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(value)
    return fmt(value)


def _row(mapping: dict, header: Sequence[str]) -> list[str]:
    return [_cell(mapping[key]) for key in header]


def _write(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


# ---------------------------------------------------------------------------
# Per-kind writers
# ---------------------------------------------------------------------------
def write_samples(stream: TextIO, samples: Sequence[SweepSample]) -> None:
    _write(
        stream,
        SWEEP_HEADER,
        (
            (fmt(s.gamma), fmt(s.tau), fmt(s.alpha), s.method.value, fmt(s.error_estimate))
            for s in samples
        ),
    )


def write_curve(stream: TextIO, curve: DecayCurve) -> None:
    """One row per measurement n = 1..len; survival is S_n."""
    _write(
        stream,
        CURVE_HEADER,
        ((str(n), fmt(p), fmt(s)) for n, p, s in zip(curve.n, curve.p, curve.survival[1:])),
    )


def write_critical(stream: TextIO, rows: Sequence[CriticalRow]) -> None:
    _write(
        stream,
        CRITICAL_HEADER,
        (
            (fmt(r.gamma0), fmt(r.tau0), fmt(r.k0), fmt(r.delta_gamma), fmt(r.delta_tau))
            for r in rows
        ),
    )


def write_checks(stream: TextIO, checks: Sequence[dict]) -> None:
    _write(
        stream,
        CHECK_HEADER,
        (
            (c["name"], fmt(c["residual"]), fmt(c["tolerance"]), "PASS" if c["valid"] else "FAIL")
            for c in checks
        ),
    )


def write_fit(stream: TextIO, fit: FitResult) -> None:
    _write(stream, FIT_HEADER, [_row(fit.row(), FIT_HEADER)])


def write_kink(stream: TextIO, report: KinkReport) -> None:
    _write(stream, KINK_HEADER, [_row(report.row(), KINK_HEADER)])


def write_result(stream: TextIO, result: SweepResult) -> None:
    """Write the table that belongs to the run's mode."""
    mode = result.config.mode.value
    if mode == "simulate":
        write_curve(stream, result.curve)
    elif mode == "critical_line":
        write_critical(stream, result.critical)
    elif mode == "validate":
        write_checks(stream, result.checks)
    else:
        write_samples(stream, result.samples)


def side_path(path: Path, kind: str) -> Path:
    """a.csv -> a.fit.csv"""
    path = Path(path)
    return path.with_name(f"{path.stem}.{kind}{path.suffix or '.csv'}")


def save_result(path: Path, result: SweepResult) -> list[Path]:
    """Write the main table to ``path`` plus fit and kink tables beside it.

    Returns every path written, main table first.
    """
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_result(fh, result)
    written = [path]
    if result.fit is not None:
        written.append(_save(side_path(path, "fit"), write_fit, result.fit))
    if result.kink is not None:
        written.append(_save(side_path(path, "kink"), write_kink, result.kink))
    return written


def _save(path: Path, writer: Callable[[TextIO, Any], None], item: object) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer(fh, item)
    return path


def read_table(path: Path) -> list[dict[str, str]]:
    """Rows of a written CSV keyed by header name."""
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# One-line summaries for stderr
# ---------------------------------------------------------------------------
def summary_lines(result: SweepResult) -> list[str]:
    lines: list[str] = []
    if result.fit is not None:
        lines.append(result.fit.summary())
    if result.kink is not None:
        lines.append(result.kink.summary())
    if result.checks:
        lines.append("validation " + ("PASS" if result.passed else "FAIL"))
    if result.failures:
        lines.append(f"{len(result.failures)} of {len(result.samples)} samples failed")
    if result.curve is not None and result.curve.truncated:
        lines.append(f"curve truncated after {len(result.curve)} measurements")
    return lines
