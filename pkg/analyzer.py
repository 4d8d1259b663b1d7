"""
zeno_ising.analyzer — Decay fits, kink detection, cross-engine consistency checking.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.stats import linregress

from .alpha import alpha_finite_n
from .core import (
    ChainSpec,
    ground_energy,
    ground_state_overlap,
    pm1_transfer,
    ratio_pm1,
    return_amplitude,
    survival_ratio,
)
from .errors import FitError, SweepInputError

if TYPE_CHECKING:
    from .engine import SweepResult
    from .oracle import DecayCurve

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD: float = 20.0
MIN_FIT_POINTS: int = 3
MIN_KINK_SAMPLES: int = 7
SIDE_POINTS: int = 5
GRID_REL_TOL: float = 1e-6
REVIVAL_FLOOR: float = 1e-24    # p_n relative to S_0 that is rounding noise, not decay


# ---------------------------------------------------------------------------
# Decay fits
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FitResult:
    """Straight line through (n, log p_n): log p_n = intercept - beta * n."""

    beta: float
    alpha_hat: float
    intercept: float
    r_squared: float
    window: tuple[int, int]
    n_sites: int
    tau: float
    beta_stderr: float = 0.0

    def row(self) -> dict:
        """Flat mapping for one CSV row; the window is split into its ends."""
        row = asdict(self)
        row["window_start"], row["window_end"] = row.pop("window")
        return row

    def summary(self) -> str:
        return (
            f"beta={self.beta:.10g} alpha_hat={self.alpha_hat:.10g} "
            f"r2={self.r_squared:.12f} window={self.window[0]}..{self.window[1]}"
        )


def fit_decay(curve: DecayCurve, skip_head: int = 1) -> FitResult:
    """Least-squares decay exponent of p_n for n > skip_head.

    alpha_hat = beta / (N tau^2). p_1 depends on the initial state, hence the
    default skip_head of 1.
    """
    if skip_head < 0:
        raise FitError(f"skip_head must be >= 0, got {skip_head}", "too_few_points")
    n = np.arange(1, len(curve.p) + 1)
    keep = n > skip_head
    n, p = n[keep], np.asarray(curve.p, dtype=float)[keep]
    if n.size < MIN_FIT_POINTS:
        raise FitError(
            f"{n.size} points after skipping {skip_head}; need {MIN_FIT_POINTS}", "too_few_points"
        )
    if np.max(p) <= REVIVAL_FLOOR * curve.survival[0]:
        raise FitError(
            f"max p_n = {np.max(p)!r} is rounding noise; the curve revives instead of decaying",
            "non_positive",
        )
    if np.any(p <= 0.0):
        first = int(n[np.argmax(p <= 0.0)])
        raise FitError(f"p_{first} = {p[n == first][0]!r} is not positive", "non_positive")

    fit = linregress(n, np.log(p))
    beta = -float(fit.slope)
    spec: ChainSpec = curve.spec
    return FitResult(
        beta=beta,
        alpha_hat=beta / (spec.n_sites * spec.tau ** 2),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue) ** 2,
        window=(int(n[0]), int(n[-1])),
        n_sites=spec.n_sites,
        tau=spec.tau,
        beta_stderr=float(fit.stderr),
    )


# ---------------------------------------------------------------------------
# Kink detection
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class KinkReport:
    """Largest slope break of a sampled curve.

    ``threshold`` is in slope units (factor times the median of
    |second difference| / h); ``detected`` implies |jump| > threshold.
    """

    location: float
    left_slope: float
    right_slope: float
    jump: float
    detected: bool
    threshold: float
    index: int = -1

    def row(self) -> dict:
        return asdict(self)

    def summary(self) -> str:
        verdict = "kink" if self.detected else "no kink"
        return (
            f"{verdict} at {self.location:.6g}: slopes {self.left_slope:.6g} -> "
            f"{self.right_slope:.6g} (jump {self.jump:.6g}, threshold {self.threshold:.3g})"
        )


def _side_slope(x: NDArray[np.float64], y: NDArray[np.float64]) -> float:
    return float(np.polyfit(x, y, 1)[0])


def detect_kink_arrays(
    parameters: ArrayLike,
    alphas: ArrayLike,
    threshold: float = DEFAULT_THRESHOLD,
) -> KinkReport:
    """Kink search on a uniform grid; see detect_kink."""
    x = np.asarray(parameters, dtype=float)
    y = np.asarray(alphas, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise SweepInputError("parameters and alphas must be 1-d arrays of equal length")
    if x.size < MIN_KINK_SAMPLES:
        raise SweepInputError(f"need at least {MIN_KINK_SAMPLES} samples, got {x.size}")
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)]
        raise SweepInputError(f"failed samples at {bad.tolist()}")
    if threshold <= 0:
        raise SweepInputError(f"threshold must be > 0, got {threshold!r}")
    steps = np.diff(x)
    h = float(np.mean(steps))
    if h <= 0 or np.max(np.abs(steps - h)) > GRID_REL_TOL * h:
        raise SweepInputError("grid is not uniformly spaced and increasing")

    # second difference over h approximates the slope change across a point
    stat = np.abs(y[2:] - 2.0 * y[1:-1] + y[:-2]) / h
    floor = np.finfo(float).eps * max(float(np.max(np.abs(y))), 1.0) / h
    limit = threshold * max(float(np.median(stat)), floor)

    # candidates need two points on each side for the slope fits
    candidates = stat[1:-1]
    i = int(np.argmax(candidates)) + 2
    left = slice(max(i - SIDE_POINTS, 0), i)
    right = slice(i + 1, min(i + 1 + SIDE_POINTS, x.size))
    left_slope = _side_slope(x[left], y[left])
    right_slope = _side_slope(x[right], y[right])
    jump = right_slope - left_slope
    detected = bool(stat[i - 1] > limit and abs(jump) > limit)
    logger.debug("kink statistic %.3e at %r against limit %.3e", stat[i - 1], x[i], limit)
    return KinkReport(float(x[i]), left_slope, right_slope, jump, detected, limit, i)


def detect_kink(sweep: SweepResult, threshold: float = DEFAULT_THRESHOLD) -> KinkReport:
    """Locate a slope discontinuity of alpha along a one-parameter sweep.

    The candidate is the grid point with the largest |second difference| / h;
    it counts as a kink when that statistic and the fitted slope jump both
    exceed ``threshold`` times the median statistic.
    """
    return detect_kink_arrays(sweep.parameters, sweep.alphas, threshold)


# ---------------------------------------------------------------------------
# Cross-engine consistency
# ---------------------------------------------------------------------------
def _check(name: str, residual: float, tolerance: float, **extra: float) -> dict:
    return {
        "name": name,
        "residual": float(residual),
        "tolerance": tolerance,
        "valid": bool(np.isfinite(residual) and residual <= tolerance),
        **extra,
    }


class CrossEngineChecker:
    """Compares state-vector results with the mode-product formulas."""

    @staticmethod
    def survival_ratio(curve: DecayCurve, tolerance: float = 1e-8) -> dict:
        """max_n |p_{n+1}/p_n - prod(1 - g^2)| for n >= 2."""
        expected = survival_ratio(curve.spec)
        ratios = curve.ratios()[1:]
        residual = float(np.max(np.abs(ratios - expected))) if ratios.size else float("nan")
        return _check("survival_ratio", residual, tolerance, expected=expected)

    @staticmethod
    def fitted_alpha(curve: DecayCurve, skip_head: int = 1, tolerance: float = 1e-6) -> dict:
        expected = alpha_finite_n(curve.spec).alpha
        fit = fit_decay(curve, skip_head)
        return _check("fitted_alpha", abs(fit.alpha_hat - expected), tolerance, expected=expected)

    @staticmethod
    def ground_overlap(spec: ChainSpec, overlap_sq: float, tolerance: float = 1e-10) -> dict:
        """|<all up|GS>|^2 from the state vector against prod cos^2 theta."""
        expected = ground_state_overlap(spec)
        return _check("ground_overlap", abs(overlap_sq - expected), tolerance, expected=expected)

    @staticmethod
    def ground_energy(spec: ChainSpec, energy: float, tolerance: float = 1e-10) -> dict:
        expected = ground_energy(spec.n_sites, spec.gamma)
        return _check("ground_energy", abs(energy - expected), tolerance, expected=expected)

    @staticmethod
    def return_amplitude(spec: ChainSpec, amplitude: complex, tolerance: float = 1e-8) -> dict:
        """<all up|exp(-i H tau)|all up> against prod A_k."""
        return _check("return_amplitude", abs(amplitude - return_amplitude(spec)), tolerance)

    @staticmethod
    def pm1_survival(curve: DecayCurve, tolerance: float = 1e-8) -> dict:
        """Survival of an all-up start against ||M^n e_up||^2 of the two-state transfer map."""
        transfer = pm1_transfer(curve.spec)
        vector = np.array([1.0, 0.0], dtype=complex)
        expected = []
        for _ in range(len(curve.p)):
            vector = transfer @ vector
            expected.append(float(np.vdot(vector, vector).real))
        residual = float(np.max(np.abs(curve.survival[1:] - np.array(expected))))
        return _check("pm1_survival", residual, tolerance)

    @staticmethod
    def pm1_ratio(curve: DecayCurve, tolerance: float = 1e-8) -> dict:
        """p_{n+1}/p_n against prod(1 - g^2) + prod g^2; exact for odd N/2."""
        expected = ratio_pm1(curve.spec)
        ratios = curve.ratios()[1:]
        residual = float(np.max(np.abs(ratios - expected))) if ratios.size else float("nan")
        return _check("pm1_ratio", residual, tolerance, expected=expected)
