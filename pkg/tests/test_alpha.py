"""Tests for zeno_ising.alpha: the integral, its finite-N sum and the critical lines."""
from math import acos, log, pi, sqrt

import numpy as np
import pytest

from zeno_ising.alpha import (
    AlphaSample,
    Method,
    QuadratureConfig,
    alpha1_finite_n,
    alpha_finite_n,
    alpha_integral,
    critical_gamma,
    critical_points,
    critical_tau,
    criticality_distance,
    gap_expansion_fixed_gamma,
    gap_expansion_fixed_tau,
    slope_jump_gamma,
    slope_jump_tau,
)
from zeno_ising.core import ChainSpec, g_k
from zeno_ising.errors import (
    InvalidSpecError,
    NoCriticalPointError,
    SingularSampleError,
)

GAMMA0_TAU1 = sqrt(1.0 - pi ** 2 / 16)


def _one_sided_slopes(f, x0: float, h: float) -> tuple[float, float]:
    """Left and right derivatives at x0 from quadratic fits on five points per side."""
    offsets = h * np.arange(1, 6)
    left = np.polyfit(-offsets, [f(x0 - d) for d in offsets], 2)
    right = np.polyfit(offsets, [f(x0 + d) for d in offsets], 2)
    return float(left[1]), float(right[1])


# ---------------------------------------------------------------------------
# alpha_integral
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("gamma", [0.2, 0.5, 1.0, 2.0])
def test_small_tau_limit(gamma):
    sample = alpha_integral(gamma, 0.01)
    assert sample.alpha == pytest.approx(1.0, abs=2e-3)
    assert sample.method is Method.INTEGRAL


@pytest.mark.parametrize("tau", [pi / 2, pi, 3 * pi / 2])
def test_revival_is_exactly_zero(tau):
    assert alpha_integral(0.0, tau).alpha == 0.0


def test_alpha_integral_is_nonnegative():
    for gamma in np.linspace(0.0, 2.0, 9):
        for tau in (0.2, 0.7, 1.3, 2.4):
            assert alpha_integral(float(gamma), tau).alpha >= 0.0


def test_alpha_integral_reports_error_estimate():
    sample = alpha_integral(0.5, 1.0)
    assert isinstance(sample, AlphaSample)
    assert 0.0 <= sample.error_estimate <= 1e-8 * sample.alpha + 1e-14
    loose = alpha_integral(0.5, 1.0, config=QuadratureConfig(rel_tol=1e-6))
    assert loose.alpha == pytest.approx(sample.alpha, rel=1e-6)


def test_alpha_integral_at_critical_point_converges():
    sample = alpha_integral(0.6190, 1.0, rel_tol=1e-8)
    k0 = acos(-0.6190)
    # midpoint sum with a cell centred on k0 excised
    n = 400_000
    width = pi / n
    k = (np.arange(n) + 0.5) * width
    keep = np.abs(k - k0) > 2 * width
    integrand = -np.log1p(-g_k(0.6190, 1.0, k[keep]) ** 2)
    riemann = float(np.sum(integrand) * width) / (2 * pi)
    assert np.isfinite(sample.alpha)
    assert sample.alpha == pytest.approx(riemann, abs=1e-4)


@pytest.mark.parametrize("gamma,tau", [(0.3, 0.8), (0.5, 1.0), (1.4, 2.2), (0.9, 3.0)])
def test_gamma_symmetry(gamma, tau):
    assert alpha_integral(gamma, tau).alpha == pytest.approx(
        alpha_integral(-gamma, tau).alpha, rel=1e-8
    )


@pytest.mark.parametrize("rel_tol", [1e-15, 0.0, 0.5])
def test_bad_tolerance_rejected(rel_tol):
    with pytest.raises(InvalidSpecError):
        alpha_integral(0.5, 1.0, rel_tol=rel_tol)


def test_bad_tau_rejected():
    with pytest.raises(InvalidSpecError):
        alpha_integral(0.5, 0.0)
    with pytest.raises(InvalidSpecError):
        alpha_integral(float("inf"), 1.0)


# ---------------------------------------------------------------------------
# alpha_finite_n
# ---------------------------------------------------------------------------
def test_finite_n_examples():
    sample = alpha_finite_n(ChainSpec(4, 0.0, pi / 4))
    assert sample.alpha == pytest.approx(log(4) / (pi ** 2 / 4), rel=1e-12)
    assert sample.alpha == pytest.approx(0.561842, abs=1e-6)
    assert sample.method is Method.FINITE_N
    assert alpha_finite_n(ChainSpec(8, 0.0, pi / 2)).alpha == pytest.approx(0.0, abs=1e-14)


def test_finite_n_singular_grid_mode():
    # k = pi/2 is on the N = 6 grid and sits exactly on the critical point
    with pytest.raises(SingularSampleError):
        alpha_finite_n(ChainSpec(6, 0.0, pi / 4))


def test_finite_n_approaches_integral():
    reference = alpha_integral(0.5, 1.0, rel_tol=1e-11).alpha
    errors = {
        n: abs(alpha_finite_n(ChainSpec(n, 0.5, 1.0)).alpha - reference)
        for n in (16, 512, 1024, 2048)
    }
    for n in (512, 1024, 2048):
        assert errors[n] <= 1e-4
    assert errors[2048] <= max(errors[16], 1e-9)


def test_finite_n_near_critical_point_converges():
    reference = alpha_integral(0.6, 1.0, rel_tol=1e-10).alpha
    coarse = abs(alpha_finite_n(ChainSpec(16, 0.6, 1.0)).alpha - reference)
    fine = abs(alpha_finite_n(ChainSpec(4096, 0.6, 1.0)).alpha - reference)
    assert fine < 1e-4
    assert fine <= coarse


def test_alpha1_never_exceeds_alpha():
    rng = np.random.default_rng(5)
    for _ in range(200):
        spec = ChainSpec(int(rng.choice([4, 6, 8, 12, 16])), rng.uniform(0, 2), rng.uniform(0.1, 3))
        try:
            alpha = alpha_finite_n(spec).alpha
        except SingularSampleError:
            continue
        assert alpha1_finite_n(spec).alpha <= alpha + 1e-15


def test_alpha1_correction_shrinks_with_n():
    gaps = [
        alpha_finite_n(ChainSpec(n, 0.5, 0.6)).alpha - alpha1_finite_n(ChainSpec(n, 0.5, 0.6)).alpha
        for n in (4, 8, 16, 64)
    ]
    assert all(gap >= 0 for gap in gaps)
    assert gaps[-1] < gaps[0]
    assert gaps[-1] < 1e-9


# ---------------------------------------------------------------------------
# Critical manifold
# ---------------------------------------------------------------------------
def test_critical_gamma_examples():
    point = critical_gamma(pi / 4)
    assert point.gamma0 == pytest.approx(0.0, abs=1e-12)
    assert point.k0 == pytest.approx(pi / 2)
    point = critical_gamma(1.0)
    assert point.gamma0 == pytest.approx(0.618986, abs=1e-6)
    assert point.k0 == pytest.approx(acos(-point.gamma0))
    assert point.held_fixed == "tau"
    assert critical_gamma(0.5) is None


def test_critical_tau_examples():
    assert critical_tau(0.0).tau0 == pytest.approx(pi / 4)
    assert critical_tau(0.5).tau0 == pytest.approx(0.906900, abs=1e-6)
    assert critical_tau(0.5).held_fixed == "gamma"
    assert critical_tau(1.0) is None
    assert critical_tau(1.7) is None
    with pytest.raises(InvalidSpecError):
        critical_tau(-0.1)


def test_critical_points_lie_on_the_manifold():
    for tau in (0.9, 1.0, 2.5, 6.0):
        for point in critical_points(tau):
            assert g_k(point.gamma0, point.tau0, point.k0) ** 2 == pytest.approx(1.0, abs=1e-12)
            assert criticality_distance(point.gamma0, point.tau0) == pytest.approx(0.0, abs=1e-12)


def test_higher_branches_appear_for_long_intervals():
    points = critical_points(6.0)
    assert [p.branch for p in points] == list(range(len(points)))
    assert len(points) == 4
    gammas = [p.gamma0 for p in points]
    assert gammas == sorted(gammas, reverse=True)


def test_criticality_distance_away_from_manifold():
    assert criticality_distance(0.5, 0.5) == pytest.approx(pi / 4 - 0.5 * sqrt(0.75))
    assert criticality_distance(1.0, 2.0) == float("inf")


# ---------------------------------------------------------------------------
# Slope jumps
# ---------------------------------------------------------------------------
def test_slope_jump_gamma_examples():
    assert slope_jump_gamma(pi / 4) == pytest.approx(0.0, abs=1e-12)
    assert slope_jump_gamma(1.0) == pytest.approx(-1.2448, abs=1e-4)
    assert slope_jump_gamma(2.0) == pytest.approx(-0.3222, abs=2e-4)
    for tau in (0.8, 1.5, 3.0, 10.0):
        assert slope_jump_gamma(tau) < 0
    with pytest.raises(NoCriticalPointError):
        slope_jump_gamma(0.5)


def test_slope_jump_tau_examples():
    assert slope_jump_tau(1.0) == pytest.approx(0.0, abs=1e-15)
    assert slope_jump_tau(0.0) == pytest.approx(-64 / pi ** 2, rel=1e-12)
    assert slope_jump_tau(0.0) == pytest.approx(-6.4846, abs=1e-4)
    assert slope_jump_tau(0.5) == pytest.approx(-2.311, abs=1e-3)
    with pytest.raises(NoCriticalPointError):
        slope_jump_tau(1.2)


def test_slope_jump_gamma_matches_finite_differences():
    def alpha(gamma):
        return alpha_integral(gamma, 1.0, rel_tol=1e-9).alpha

    left, right = _one_sided_slopes(alpha, GAMMA0_TAU1, 1e-3)
    assert right - left == pytest.approx(slope_jump_gamma(1.0), rel=0.05)


def test_slope_jump_tau_matches_finite_differences():
    tau0 = critical_tau(0.5).tau0

    def alpha(tau):
        return alpha_integral(0.5, tau, rel_tol=1e-9).alpha

    left, right = _one_sided_slopes(alpha, tau0, 1e-3)
    assert right - left == pytest.approx(slope_jump_tau(0.5), rel=0.05)


# ---------------------------------------------------------------------------
# Quadratic forms near the critical point
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("dk", [-1e-2, -5e-3, -1e-3, 1e-3, 5e-3, 1e-2])
@pytest.mark.parametrize("dg", [-1e-3, 0.0, 1e-3])
def test_gap_expansion_fixed_tau(dk, dg):
    point = critical_gamma(1.0)
    k, gamma = point.k0 + dk, point.gamma0 + dg
    exact = 1.0 - g_k(gamma, point.tau0, k)
    assert gap_expansion_fixed_tau(point, k, gamma) == pytest.approx(exact, rel=0.1)


@pytest.mark.parametrize("dk", [-1e-2, -5e-3, -1e-3, 1e-3, 5e-3, 1e-2])
@pytest.mark.parametrize("dt", [-1e-3, 0.0, 1e-3])
def test_gap_expansion_fixed_gamma(dk, dt):
    point = critical_tau(0.5)
    k, tau = point.k0 + dk, point.tau0 + dt
    exact = 1.0 - g_k(point.gamma0, tau, k)
    assert gap_expansion_fixed_gamma(point, k, tau) == pytest.approx(exact, rel=0.1)
