"""Tests for zeno_ising.core mode quantities and mode products."""
from math import acos, log, pi, sqrt

import numpy as np
import pytest

from zeno_ising.core import (
    ChainSpec,
    alpha1,
    evolution_amplitudes,
    g_k,
    gap,
    ground_energy,
    ground_state_overlap,
    lambda_k,
    log_gap,
    mode_table,
    momenta,
    pm1_decay_ratio,
    pm1_transfer,
    ratio_pm1,
    return_amplitude,
    survival_ratio,
    theta_k,
)
from zeno_ising.errors import InvalidSpecError, SingularModeError


# ---------------------------------------------------------------------------
# Chain parameters
# ---------------------------------------------------------------------------
def test_momenta_examples():
    assert np.allclose(momenta(4), [pi / 4, 3 * pi / 4])
    assert np.allclose(momenta(6), [pi / 6, pi / 2, 5 * pi / 6])
    assert np.allclose(momenta(8), [pi / 8, 3 * pi / 8, 5 * pi / 8, 7 * pi / 8])


def test_momenta_strictly_inside():
    k = momenta(64)
    assert len(k) == 32
    assert np.all(np.diff(k) > 0)
    assert k[0] > 0 and k[-1] < pi


@pytest.mark.parametrize("n", [2, 3, 5, 0, -4])
def test_bad_sizes_rejected(n):
    with pytest.raises(InvalidSpecError):
        momenta(n)
    with pytest.raises(InvalidSpecError):
        ChainSpec(n, 0.5, 1.0)


def test_chain_spec_validation():
    with pytest.raises(InvalidSpecError):
        ChainSpec(8, 0.5, 0.0)
    with pytest.raises(InvalidSpecError):
        ChainSpec(8, float("nan"), 1.0)
    with pytest.raises(InvalidSpecError):
        ChainSpec(8.5, 0.5, 1.0)
    assert ChainSpec(8, 0.5, 1.0).n_modes == 4


# ---------------------------------------------------------------------------
# Single-mode quantities
# ---------------------------------------------------------------------------
def test_lambda_examples():
    assert lambda_k(0.0, pi / 2) == pytest.approx(2.0)
    assert lambda_k(1.0, pi) == pytest.approx(0.0, abs=1e-15)
    assert lambda_k(0.5, 2 * pi / 3) == pytest.approx(2 * sqrt(0.75), rel=1e-14)


def test_theta_examples():
    assert theta_k(0.0, pi / 2) == pytest.approx(-pi / 4)
    assert theta_k(2.0, 1e-9) == pytest.approx(0.0, abs=1e-9)
    theta = theta_k(0.5, 2 * pi / 3)
    assert np.sin(2 * theta) == pytest.approx(-1.0, abs=1e-12)


def test_theta_gapless_point():
    with pytest.raises(SingularModeError):
        theta_k(1.0, pi)


def test_theta_range():
    """theta lies in (-pi/2, 0]; the narrower (-pi/4, 0] only where gamma + cos k >= 0."""
    k = np.linspace(1e-3, pi - 1e-3, 500)
    for gamma in (0.0, 0.3, 1.0, 2.5):
        theta = theta_k(gamma, k)
        assert np.all(theta <= 0) and np.all(theta > -pi / 2)
        upper = gamma + np.cos(k) >= 0
        assert np.all(theta[upper] >= -pi / 4 - 1e-12)
    assert theta_k(0.0, 3 * pi / 4) == pytest.approx(-3 * pi / 8)


def test_amplitude_examples():
    a, b = evolution_amplitudes(0.0, pi / 2, momenta(8))
    assert np.allclose(a, -1.0, atol=1e-14)
    assert np.allclose(b, 0.0, atol=1e-14)

    a, b = evolution_amplitudes(0.7, 1e-12, momenta(8))
    assert np.allclose(a, 1.0, atol=1e-10)
    assert np.allclose(b, 0.0, atol=1e-10)

    a, b = evolution_amplitudes(0.0, pi / 4, pi / 2)
    assert abs(a) ** 2 == pytest.approx(0.0, abs=1e-15)
    assert b ** 2 == pytest.approx(1.0)


def test_g_examples():
    assert np.allclose(g_k(0.0, pi / 2, momenta(16)), 0.0, atol=1e-15)
    assert g_k(0.0, pi / 4, pi / 2) == pytest.approx(1.0, rel=1e-15)
    # continuous extension at lambda = 0
    assert g_k(1.0, 1.0, pi) == pytest.approx(0.0, abs=1e-15)
    assert g_k(1.0, 0.7, pi - 1e-9) == pytest.approx(2 * np.sin(pi - 1e-9) * 0.7, rel=1e-9)


def test_b_equals_g():
    k = momenta(32)
    _, b = evolution_amplitudes(0.8, 1.3, k)
    assert np.allclose(b, g_k(0.8, 1.3, k), atol=1e-14)


def test_mode_identities_randomized():
    """|a|^2 + b^2 = 1, 1 - |a|^2 = g^2 and sin(2 theta) lambda = -2 sin k."""
    rng = np.random.default_rng(7)
    gamma = rng.uniform(0.0, 3.0, 2000)
    tau = rng.uniform(1e-6, 4.0, 2000)
    k = rng.uniform(1e-6, pi - 1e-6, 2000)
    for gm, t, kk in zip(gamma, tau, k):
        a, b = evolution_amplitudes(gm, t, kk)
        g = g_k(gm, t, kk)
        assert abs(a) ** 2 + b ** 2 == pytest.approx(1.0, abs=1e-12)
        assert 1.0 - abs(a) ** 2 == pytest.approx(g * g, abs=1e-12)
        assert 0.0 <= g * g <= 1.0 + 1e-15
        lam = lambda_k(gm, kk)
        if lam > 1e-8:
            assert np.sin(2 * theta_k(gm, kk)) * lam == pytest.approx(-2 * np.sin(kk), abs=1e-10)


def test_gap_matches_one_minus_g_squared():
    rng = np.random.default_rng(11)
    k = rng.uniform(1e-3, pi - 1e-3, 1000)
    for gamma, tau in [(0.2, 0.3), (0.5, 1.0), (1.5, 2.0), (0.0, 3.0)]:
        g = g_k(gamma, tau, k)
        assert np.allclose(gap(gamma, tau, k), 1.0 - g * g, atol=1e-13)


def test_log_gap_near_criticality_keeps_digits():
    gamma0 = sqrt(1.0 - pi ** 2 / 16)
    k0 = acos(-gamma0)
    dk = 1e-6
    value = gap(gamma0, 1.0, k0 + dk)
    assert value > 0
    # 1 - g ~ c dk^2 near k0, so 1 - g^2 ~ 2 c dk^2
    assert 1e-14 < value < 1e-10
    assert np.isneginf(log_gap(0.0, pi / 4, pi / 2)) or log_gap(0.0, pi / 4, pi / 2) < -60


# ---------------------------------------------------------------------------
# Mode table
# ---------------------------------------------------------------------------
def test_mode_table_layout():
    table = mode_table(ChainSpec(12, 0.4, 0.9))
    assert len(table) == 6
    assert len(table.records) == 6
    assert np.all(np.diff(table.k) > 0)
    rec = table.records[2]
    assert rec.k == pytest.approx(5 * pi / 12)
    assert abs(rec.a_k) ** 2 + rec.b_k ** 2 == pytest.approx(1.0, abs=1e-12)
    assert rec.g_k == pytest.approx(rec.b_k, abs=1e-14)


# ---------------------------------------------------------------------------
# Products over the grid
# ---------------------------------------------------------------------------
def test_survival_ratio_examples():
    assert survival_ratio(ChainSpec(8, 0.0, pi / 2)) == pytest.approx(1.0, abs=1e-14)
    assert survival_ratio(ChainSpec(4, 0.0, pi / 4)) == pytest.approx(0.25, rel=1e-12)
    value = survival_ratio(ChainSpec(8, 0.5, 1.0))
    assert 0.0 < value < 1.0


@pytest.mark.parametrize("n", [4, 8, 14, 40])
@pytest.mark.parametrize("gamma,tau", [(0.3, 0.8), (1.2, 2.1), (0.9, 1.0)])
def test_survival_ratio_gamma_symmetry(n, gamma, tau):
    a = survival_ratio(ChainSpec(n, gamma, tau))
    b = survival_ratio(ChainSpec(n, -gamma, tau))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_ground_state_overlap_examples():
    assert ground_state_overlap(ChainSpec(4, 0.0, 1.0)) == pytest.approx(0.125, rel=1e-12)
    assert ground_state_overlap(ChainSpec(8, 1e6, 1.0)) == pytest.approx(1.0, abs=1e-10)
    assert 0.0 < ground_state_overlap(ChainSpec(8, 0.5, 1.0)) < 1.0


def test_ground_energy_is_minus_sum_lambda():
    assert ground_energy(4, 0.0) == pytest.approx(-4.0)
    assert ground_energy(8, 0.5) == pytest.approx(-float(np.sum(lambda_k(0.5, momenta(8)))))


def test_return_amplitude_revival():
    amp = return_amplitude(ChainSpec(8, 0.0, pi / 2))
    # every A_k = -1, four modes
    assert amp == pytest.approx(1.0, abs=1e-12)
    assert abs(return_amplitude(ChainSpec(8, 0.5, 1.0))) ** 2 == pytest.approx(
        survival_ratio(ChainSpec(8, 0.5, 1.0)), rel=1e-12
    )


# ---------------------------------------------------------------------------
# "Is M_z != +-1 ?" variant
# ---------------------------------------------------------------------------
def test_ratio_pm1_examples():
    assert ratio_pm1(ChainSpec(8, 0.0, pi / 2)) == pytest.approx(1.0, abs=1e-14)
    assert ratio_pm1(ChainSpec(4, 0.0, pi / 4)) == pytest.approx(0.5, rel=1e-12)
    spec = ChainSpec(16, 0.5, 1.0)
    assert ratio_pm1(spec) >= survival_ratio(spec)
    alpha = -log(survival_ratio(spec)) / 16
    assert 0.0 <= alpha - alpha1(spec) < 1e-6


def test_ratio_pm1_dominates_survival_ratio():
    rng = np.random.default_rng(3)
    for _ in range(300):
        n = int(rng.choice([4, 6, 8, 10, 16]))
        spec = ChainSpec(n, rng.uniform(0, 3), rng.uniform(0.05, 4))
        assert ratio_pm1(spec) >= survival_ratio(spec)


def test_alpha1_formula():
    spec = ChainSpec(10, 0.5, 1.0)
    assert alpha1(spec) == pytest.approx(-log(ratio_pm1(spec)) / (10 * 1.0))


def test_pm1_transfer_is_scaled_unitary_for_odd_half_n():
    for n in (6, 10, 14):
        spec = ChainSpec(n, 0.7, 1.3)
        m = pm1_transfer(spec)
        product = m.conj().T @ m
        assert np.allclose(product, product[0, 0] * np.eye(2), atol=1e-12)
        assert product[0, 0].real == pytest.approx(ratio_pm1(spec), rel=1e-10)
        assert pm1_decay_ratio(spec) == pytest.approx(ratio_pm1(spec), rel=1e-10)

