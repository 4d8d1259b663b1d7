"""
zeno_ising.alpha — The decay constant alpha(Gamma, tau) and its kinks.

alpha = -(1 / 2 pi tau^2) * integral_0^pi log(1 - g_k^2) dk in the
thermodynamic limit, its finite-N sum, the critical lines where the
logarithm's argument vanishes, and the closed-form slope jumps across them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from math import acos, cos, hypot, isfinite, log, log1p, pi, sin, sqrt

import numpy as np
from scipy.integrate import quad

from .core import QUARTER_PI, SMALL_G2, ChainSpec, alpha1, log_gap, momenta
from .errors import (
    InvalidSpecError,
    NoCriticalPointError,
    QuadratureError,
    SingularSampleError,
)

logger = logging.getLogger(__name__)

GAP_FLOOR: float = 1e-300        # 1 - g^2 below this is reported, never clamped
GRID_GAP_FLOOR: float = 1e-30    # a grid mode this close to g^2 = 1 is on the critical point
ABS_TOL_FLOOR: float = 1e-15
REL_TOL_RANGE: tuple[float, float] = (1e-14, 1e-2)


class Method(str, Enum):
    """Provenance of a decay-constant value."""

    INTEGRAL = "integral"
    FINITE_N = "finite_n_product"
    ORACLE_FIT = "oracle_fit"
    FAILED = "failed"


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for alpha_integral."""

    rel_tol: float = 1e-10
    subdivision_limit: int = 500
    singular_window: float = 1e-2    # criticality distance that triggers a k0 break point


@dataclass(frozen=True)
class AlphaSample:
    """One decay-constant value with its provenance."""

    gamma: float
    tau: float
    alpha: float
    method: Method
    error_estimate: float = 0.0


@dataclass(frozen=True)
class CriticalPoint:
    """A point (gamma0, tau0, k0) where g_{k0}^2 = 1.

    ``held_fixed`` names the parameter that was given ("tau" or "gamma");
    ``branch`` m labels tau0 sqrt(1 - gamma0^2) = (2m + 1) pi / 4.
    """

    gamma0: float
    tau0: float
    k0: float
    held_fixed: str
    branch: int = 0


# ---------------------------------------------------------------------------
# Critical manifold
# ---------------------------------------------------------------------------
def critical_points(tau: float) -> list[CriticalPoint]:
    """All critical fields for a given tau, one per branch, gamma0 descending."""
    if not tau > 0:
        raise InvalidSpecError(f"tau must be > 0, got {tau!r}")
    points: list[CriticalPoint] = []
    m = 0
    while True:
        c = (2 * m + 1) * QUARTER_PI / tau
        if c > 1.0:
            break
        gamma0 = sqrt(1.0 - c * c)
        points.append(CriticalPoint(gamma0, tau, acos(-gamma0), "tau", m))
        m += 1
    return points


def critical_gamma(tau: float) -> CriticalPoint | None:
    """gamma0 = sqrt(1 - (pi / 4 tau)^2) for tau >= pi/4, else None."""
    points = critical_points(tau)
    return points[0] if points else None


def critical_tau(gamma: float) -> CriticalPoint | None:
    """tau0 = pi / (4 sqrt(1 - gamma^2)) for 0 <= gamma < 1, else None."""
    if not gamma >= 0:
        raise InvalidSpecError(f"gamma must be >= 0, got {gamma!r}")
    if gamma >= 1.0:
        return None
    return CriticalPoint(gamma, QUARTER_PI / sqrt(1.0 - gamma * gamma), acos(-gamma), "gamma")


def criticality_distance(gamma: float, tau: float) -> float:
    """min_m |tau sqrt(1 - gamma^2) - (2m + 1) pi/4|; inf for |gamma| >= 1."""
    if abs(gamma) >= 1.0:
        return float("inf")
    reach = tau * sqrt(1.0 - gamma * gamma)
    m = max(0, round((reach / QUARTER_PI - 1.0) / 2.0))
    return abs(reach - (2 * m + 1) * QUARTER_PI)


# ---------------------------------------------------------------------------
# Slope discontinuities
# ---------------------------------------------------------------------------
def slope_jump_gamma(tau: float) -> float:
    """Jump of d alpha / d Gamma across gamma0 at fixed tau.

    -16 sqrt(16 tau^2 - pi^2) / (pi tau (4 - pi^2 + 16 tau^2)); 0 at tau = pi/4.
    """
    if tau < QUARTER_PI:
        raise NoCriticalPointError(f"no critical field for tau={tau!r} < pi/4")
    root = sqrt(max(16.0 * tau * tau - pi * pi, 0.0))
    return -16.0 * root / (pi * tau * (4.0 - pi * pi + 16.0 * tau * tau))


def slope_jump_tau(gamma: float) -> float:
    """Jump of d alpha / d tau across tau0 at fixed Gamma.

    -256 (1 - Gamma^2)^(5/2) / ((4 + (pi^2 - 4) Gamma^2) pi^2); 0 at |Gamma| = 1.
    """
    if abs(gamma) > 1.0:
        raise NoCriticalPointError(f"no critical interval for |gamma|={abs(gamma)!r} > 1")
    denominator = (4.0 + (pi * pi - 4.0) * gamma * gamma) * pi * pi
    return -256.0 * (1.0 - gamma * gamma) ** 2.5 / denominator


def gap_expansion_fixed_tau(point: CriticalPoint, k: float, gamma: float) -> float:
    """Quadratic form for 1 - g_k near ``point`` when tau = tau0 is held."""
    dk = k - point.k0
    dg = gamma - point.gamma0
    s0 = sin(point.k0)
    cot2 = (cos(point.k0) / s0) ** 2
    return 0.5 * (1.0 + pi * pi / 4.0 * cot2) * dk * dk - dk * dg / s0 + dg * dg / (2.0 * s0 * s0)


def gap_expansion_fixed_gamma(point: CriticalPoint, k: float, tau: float) -> float:
    """Quadratic form for 1 - g_k near ``point`` when Gamma = gamma0 is held."""
    dk = k - point.k0
    dt = tau - point.tau0
    s0 = sin(point.k0)
    c0 = cos(point.k0)
    cot2 = (c0 / s0) ** 2
    return (
        0.5 * (1.0 + pi * pi / 4.0 * cot2) * dk * dk
        + pi * c0 * dk * dt
        + 2.0 * s0 * s0 * dt * dt
    )


# ---------------------------------------------------------------------------
# Thermodynamic-limit integral
# ---------------------------------------------------------------------------
class _GapUnderflow(ArithmeticError):
    def __init__(self, k: float) -> None:
        super().__init__(k)
        self.k = k


def _integrand(k: float, gamma: float, tau: float) -> float:
    # scalar twin of core.log_gap, negated; quad calls this per node
    ck, sk = cos(k), sin(k)
    eps = gamma + ck
    lam = 2.0 * hypot(eps, sk)
    phase = lam * tau
    g = 2.0 * sk * tau if lam == 0.0 else 2.0 * sk * sin(phase) / lam
    g2 = g * g
    if g2 < SMALL_G2:
        return -log1p(-g2)
    mix = 2.0 * eps / lam
    s, c = sin(phase), cos(phase)
    q = c * c + s * s * mix * mix
    if q < GAP_FLOOR:
        raise _GapUnderflow(k)
    return -log(q)


def _is_revival(gamma: float, tau: float) -> bool:
    # lambda_k = 2 for every k at Gamma = 0, so g vanishes when sin(2 tau) = 0
    return gamma == 0.0 and abs(sin(2.0 * tau)) < 1e-14 * max(1.0, tau)


def alpha_integral(
    gamma: float,
    tau: float,
    rel_tol: float | None = None,
    config: QuadratureConfig | None = None,
) -> AlphaSample:
    """alpha(Gamma, tau) by adaptive Gauss-Kronrod quadrature.

    Near the critical manifold the singular momentum k0 = arccos(-Gamma)
    is passed to the integrator as a break point so the integrable
    logarithmic singularity sits on a panel edge.
    """
    cfg = config or QuadratureConfig()
    tol = cfg.rel_tol if rel_tol is None else rel_tol
    if not (isfinite(tau) and tau > 0):
        raise InvalidSpecError(f"tau must be finite and > 0, got {tau!r}")
    if not isfinite(gamma):
        raise InvalidSpecError(f"gamma must be finite, got {gamma!r}")
    lo, hi = REL_TOL_RANGE
    if not lo < tol < hi:
        raise InvalidSpecError(f"rel_tol must lie in ({lo:g}, {hi:g}), got {tol!r}")

    if _is_revival(gamma, tau):
        return AlphaSample(gamma, tau, 0.0, Method.INTEGRAL, 0.0)

    points = None
    if criticality_distance(gamma, tau) <= cfg.singular_window:
        points = [acos(-gamma)]

    try:
        result = quad(
            _integrand,
            0.0,
            pi,
            args=(gamma, tau),
            epsabs=ABS_TOL_FLOOR,
            epsrel=tol,
            limit=cfg.subdivision_limit,
            points=points,
            full_output=1,
        )
    except _GapUnderflow as exc:
        raise QuadratureError(
            f"1 - g^2 < {GAP_FLOOR:g} at k={exc.k!r} (gamma={gamma!r}, tau={tau!r}): critical",
            float("inf"),
            float("inf"),
        ) from None

    value, abserr = float(result[0]), float(result[1])
    scale = 1.0 / (2.0 * pi * tau * tau)
    if len(result) > 3 and abserr > max(tol * abs(value), ABS_TOL_FLOOR):
        raise QuadratureError(
            f"quadrature did not converge at gamma={gamma!r}, tau={tau!r}: {result[3]}",
            value * scale,
            abserr * scale,
        )
    logger.debug(
        "alpha_integral(%r, %r) = %.17g +- %.3e", gamma, tau, value * scale, abserr * scale
    )
    return AlphaSample(gamma, tau, value * scale, Method.INTEGRAL, abserr * scale)


# ---------------------------------------------------------------------------
# Finite chains
# ---------------------------------------------------------------------------
def alpha_finite_n(spec: ChainSpec) -> AlphaSample:
    """-(1 / N tau^2) sum_k log(1 - g_k^2) over the antiperiodic grid."""
    logs = log_gap(spec.gamma, spec.tau, momenta(spec.n_sites))
    if np.any(logs < log(GRID_GAP_FLOOR)):
        raise SingularSampleError(
            f"a grid mode of N={spec.n_sites} has g_k^2 = 1 at "
            f"gamma={spec.gamma!r}, tau={spec.tau!r}"
        )
    scale = 1.0 / (spec.n_sites * spec.tau ** 2)
    alpha = -float(np.sum(logs)) * scale
    rounding = float(np.finfo(float).eps * np.sum(np.abs(logs))) * scale
    return AlphaSample(spec.gamma, spec.tau, alpha, Method.FINITE_N, rounding)


def alpha1_finite_n(spec: ChainSpec) -> AlphaSample:
    """Decay constant of the "Is M_z != +-1 ?" measurement for a finite chain."""
    return AlphaSample(spec.gamma, spec.tau, alpha1(spec), Method.FINITE_N, 0.0)
