"""
zeno_ising.core — Free-fermion mode quantities of the transverse Ising ring.

H = -sum_j s^x_j s^x_{j+1} - Gamma * sum_j s^z_j on a ring of N spins.
In the even-parity sector the ring is a direct sum of N/2 two-level modes
at the antiperiodic momenta k = (2l+1)pi/N, so every quantity below is a
scalar function of (gamma, tau, k). hbar = 1 throughout.

Functions accept a float or a numpy array for ``k`` and broadcast.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isfinite, pi
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InvalidSpecError, SingularModeError

Scalar = Union[float, NDArray[np.float64]]

# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------
MIN_SITES: int = 4
QUARTER_PI: float = pi / 4       # critical line: tau0 * sqrt(1 - gamma0^2) = pi/4
SMALL_G2: float = 0.5            # below this 1 - g^2 is formed directly


# ---------------------------------------------------------------------------
# Chain parameters
# ---------------------------------------------------------------------------
def check_sites(n_sites: int) -> int:
    if isinstance(n_sites, bool) or int(n_sites) != n_sites:
        raise InvalidSpecError(f"n_sites must be an integer, got {n_sites!r}")
    n = int(n_sites)
    if n < MIN_SITES or n % 2:
        raise InvalidSpecError(f"n_sites must be even and >= {MIN_SITES}, got {n}")
    return n


@dataclass(frozen=True)
class ChainSpec:
    """Chain size N, transverse field Gamma and measurement interval tau."""

    n_sites: int
    gamma: float
    tau: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_sites", check_sites(self.n_sites))
        if not isfinite(self.gamma):
            raise InvalidSpecError(f"gamma must be finite, got {self.gamma!r}")
        if not (isfinite(self.tau) and self.tau > 0):
            raise InvalidSpecError(f"tau must be finite and > 0, got {self.tau!r}")

    @property
    def n_modes(self) -> int:
        return self.n_sites // 2


def momenta(n_sites: int) -> NDArray[np.float64]:
    """Antiperiodic grid k = (2l+1)pi/N, l = 0 .. N/2-1."""
    n = check_sites(n_sites)
    return (2 * np.arange(n // 2) + 1) * pi / n


# ---------------------------------------------------------------------------
# Single-mode quantities
# ---------------------------------------------------------------------------
def lambda_k(gamma: float, k: ArrayLike) -> Scalar:
    """Mode energy lambda_k = 2 sqrt(Gamma^2 + 1 + 2 Gamma cos k)."""
    k = np.asarray(k, dtype=float)
    # (Gamma + cos k)^2 + sin^2 k: never negative after rounding
    return 2.0 * np.hypot(gamma + np.cos(k), np.sin(k))


def theta_k(gamma: float, k: ArrayLike) -> Scalar:
    """Bogoliubov angle: tan theta = -sin k / (Gamma + cos k + lambda_k/2).

    Principal branch; the denominator is positive for k in (0, pi), so
    theta lies in (-pi/2, 0].
    """
    k = np.asarray(k, dtype=float)
    lam = lambda_k(gamma, k)
    if np.any(lam == 0.0):
        raise SingularModeError(f"gapless mode at gamma={gamma!r}: theta_k undefined")
    return np.arctan(-np.sin(k) / (gamma + np.cos(k) + lam / 2))


def evolution_amplitudes(gamma: float, tau: float, k: ArrayLike) -> tuple[Scalar, Scalar]:
    """Amplitudes (A_k, B_k) of |11_k> evolved for time tau.

    A_k = e^{-i lambda tau} sin^2 theta + e^{i lambda tau} cos^2 theta,
    B_k = -sin(lambda tau) sin(2 theta).
    """
    k = np.asarray(k, dtype=float)
    theta = theta_k(gamma, k)
    phase = lambda_k(gamma, k) * tau
    a = np.exp(-1j * phase) * np.sin(theta) ** 2 + np.exp(1j * phase) * np.cos(theta) ** 2
    b = -np.sin(phase) * np.sin(2 * theta)
    return a, b


def g_k(gamma: float, tau: float, k: ArrayLike) -> Scalar:
    """Coupling g_k = 2 sin k sin(lambda_k tau) / lambda_k.

    At lambda_k = 0 this is the continuous extension 2 sin k * tau.
    """
    k = np.asarray(k, dtype=float)
    lam = lambda_k(gamma, k)
    # np.sinc(x) = sin(pi x)/(pi x), finite at x = 0
    return 2.0 * np.sin(k) * tau * np.sinc(lam * tau / pi)


def log_gap(gamma: float, tau: float, k: ArrayLike) -> Scalar:
    """log(1 - g_k^2) = log|A_k|^2 at full relative precision.

    Small g uses log1p(-g^2); otherwise |A_k|^2 is summed as
    cos^2(lambda tau) + sin^2(lambda tau) cos^2(2 theta), which keeps its
    digits as g^2 -> 1. Returns -inf where g_k^2 = 1 exactly.
    """
    k = np.asarray(k, dtype=float)
    lam = lambda_k(gamma, k)
    g = g_k(gamma, tau, k)
    g2 = g * g
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_2theta = np.where(lam > 0, 2.0 * (gamma + np.cos(k)) / lam, 0.0)
        s = np.sin(lam * tau)
        c = np.cos(lam * tau)
        squares = c * c + s * s * cos_2theta * cos_2theta
        return np.where(g2 < SMALL_G2, np.log1p(-g2), np.log(squares))


def gap(gamma: float, tau: float, k: ArrayLike) -> Scalar:
    """1 - g_k^2 (= |A_k|^2)."""
    return np.exp(log_gap(gamma, tau, k))


# ---------------------------------------------------------------------------
# Mode table
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ModeRecord:
    """Per-momentum quantities for one mode of a ChainSpec."""

    k: float
    lambda_k: float
    theta_k: float
    a_k: complex
    b_k: float
    g_k: float


@dataclass(frozen=True, eq=False)
class ModeTable:
    """All N/2 modes of a chain, stored column-wise."""

    spec: ChainSpec
    k: NDArray[np.float64]
    lambda_k: NDArray[np.float64]
    theta_k: NDArray[np.float64]
    a_k: NDArray[np.complex128]
    b_k: NDArray[np.float64]
    g_k: NDArray[np.float64]

    @classmethod
    def from_spec(cls, spec: ChainSpec) -> ModeTable:
        k = momenta(spec.n_sites)
        a, b = evolution_amplitudes(spec.gamma, spec.tau, k)
        return cls(
            spec=spec,
            k=k,
            lambda_k=lambda_k(spec.gamma, k),
            theta_k=theta_k(spec.gamma, k),
            a_k=a,
            b_k=b,
            g_k=g_k(spec.gamma, spec.tau, k),
        )

    @cached_property
    def records(self) -> tuple[ModeRecord, ...]:
        return tuple(
            ModeRecord(float(k), float(lam), float(th), complex(a), float(b), float(g))
            for k, lam, th, a, b, g in zip(
                self.k, self.lambda_k, self.theta_k, self.a_k, self.b_k, self.g_k
            )
        )

    def __len__(self) -> int:
        return len(self.k)


def mode_table(spec: ChainSpec) -> ModeTable:
    """Build the ModeTable of a chain."""
    return ModeTable.from_spec(spec)


# ---------------------------------------------------------------------------
# Products over the momentum grid
# ---------------------------------------------------------------------------
def _exp_sum(logs: NDArray[np.float64]) -> float:
    if np.any(np.isneginf(logs)):
        return 0.0
    return float(np.exp(np.sum(logs)))


def survival_ratio(spec: ChainSpec) -> float:
    """p_{n+1}/p_n = prod_k |A_k|^2 = prod_k (1 - g_k^2)."""
    return _exp_sum(log_gap(spec.gamma, spec.tau, momenta(spec.n_sites)))


def ground_state_overlap(spec: ChainSpec) -> float:
    """|<all up|GS>|^2 = prod_k cos^2 theta_k."""
    theta = theta_k(spec.gamma, momenta(spec.n_sites))
    return _exp_sum(2.0 * np.log(np.cos(theta)))


def ground_energy(n_sites: int, gamma: float) -> float:
    """Even-sector ground energy -sum_k lambda_k."""
    return -float(np.sum(lambda_k(gamma, momenta(n_sites))))


def return_amplitude(spec: ChainSpec) -> complex:
    """<all up| exp(-i H tau) |all up> = prod_k A_k."""
    a, _ = evolution_amplitudes(spec.gamma, spec.tau, momenta(spec.n_sites))
    return complex(np.prod(a))


# ---------------------------------------------------------------------------
# "Is M_z != +-1 ?" variant
# ---------------------------------------------------------------------------
def ratio_pm1(spec: ChainSpec) -> float:
    """prod_k (1 - g_k^2) + prod_k g_k^2."""
    g = g_k(spec.gamma, spec.tau, momenta(spec.n_sites))
    with np.errstate(divide="ignore"):
        log_g2 = 2.0 * np.log(np.abs(g))
    return survival_ratio(spec) + _exp_sum(log_g2)


def alpha1(spec: ChainSpec) -> float:
    """Decay constant of the +-1 variant, -log(ratio_pm1) / (N tau^2)."""
    return -float(np.log(ratio_pm1(spec))) / (spec.n_sites * spec.tau ** 2)


def pm1_transfer(spec: ChainSpec) -> NDArray[np.complex128]:
    """Map of (all-up, all-down) amplitudes from one +-1 measurement to the next.

    [[prod A, phi prod B], [phi prod B, conj(prod A)]] with phi = i^(N/2).
    M^H M is proportional to the identity only for odd N/2; then the
    survival ratio is exactly ratio_pm1(spec).
    """
    a, b = evolution_amplitudes(spec.gamma, spec.tau, momenta(spec.n_sites))
    pa = complex(np.prod(a))
    pb = float(np.prod(b))
    phi = 1j ** (spec.n_sites // 2)
    return np.array([[pa, phi * pb], [phi * pb, pa.conjugate()]], dtype=complex)


def pm1_decay_ratio(spec: ChainSpec) -> float:
    """Asymptotic survival ratio of the +-1 variant (largest |eigenvalue|^2)."""
    eigenvalues = np.linalg.eigvals(pm1_transfer(spec))
    return float(np.max(np.abs(eigenvalues)) ** 2)
