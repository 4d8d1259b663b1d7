"""
zeno_ising.oracle.states — State vectors in the s^z product basis.

Bit j of a basis index is set when spin j points down (s^z_j = -1), so
index 0 is the all-up state and m = N - 2 * popcount(index).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import log2

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core import check_sites
from ..errors import InvalidSpecError


def popcount(indices: NDArray[np.int64], n_sites: int) -> NDArray[np.int64]:
    """Number of set bits of each index (down spins)."""
    counts = np.zeros_like(indices)
    for j in range(n_sites):
        counts += (indices >> j) & 1
    return counts


def magnetizations(n_sites: int) -> NDArray[np.int64]:
    """Total s^z, m = sum_j s^z_j, of every basis index."""
    n = check_sites(n_sites)
    return n - 2 * popcount(np.arange(1 << n, dtype=np.int64), n)


@dataclass(frozen=True)
class SpinBasisState:
    """One s^z product state."""

    index: int
    n_sites: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < (1 << self.n_sites):
            raise InvalidSpecError(f"index {self.index} outside [0, 2^{self.n_sites})")

    @property
    def magnetization(self) -> int:
        return self.n_sites - 2 * bin(self.index).count("1")

    @property
    def spins(self) -> tuple[int, ...]:
        return tuple(-1 if (self.index >> j) & 1 else 1 for j in range(self.n_sites))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes over the 2^N basis with their cached squared norm.

    Branches kept after a measurement are not renormalized, so norm_sq
    drops below 1 as the run proceeds.
    """

    amplitudes: NDArray[np.complex128]
    norm_sq: float = float("nan")

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=complex)
        n = log2(amplitudes.size) if amplitudes.size else 0.5
        if amplitudes.ndim != 1 or n != int(n):
            raise InvalidSpecError(f"state length {amplitudes.size} is not a power of two")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)
        if np.isnan(self.norm_sq):
            object.__setattr__(self, "norm_sq", self.recompute_norm_sq())

    @property
    def n_sites(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def recompute_norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def overlap(self, other: StateVector) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


# ---------------------------------------------------------------------------
# Initial states
# ---------------------------------------------------------------------------
def basis_state(n_sites: int, index: int) -> StateVector:
    n = check_sites(n_sites)
    SpinBasisState(index, n)
    amplitudes = np.zeros(1 << n, dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(amplitudes, 1.0)


def all_up_state(n_sites: int) -> StateVector:
    """The M_z = 1 state."""
    return basis_state(n_sites, 0)


def uniform_state(n_sites: int) -> StateVector:
    n = check_sites(n_sites)
    return StateVector(np.full(1 << n, (1 << n) ** -0.5, dtype=complex))


def product_state(n_sites: int, seed: int = 0) -> StateVector:
    """Fixed-seed product state with random Bloch angles on every site."""
    n = check_sites(n_sites)
    rng = np.random.default_rng(seed)
    polar = rng.uniform(0.0, np.pi, size=n)
    azimuth = rng.uniform(0.0, 2.0 * np.pi, size=n)
    vector: NDArray[np.complex128] = np.ones(1, dtype=complex)
    for j in range(n):
        site = np.array([np.cos(polar[j] / 2), np.exp(1j * azimuth[j]) * np.sin(polar[j] / 2)])
        # site j becomes bit j: kron puts the new factor on the high side
        vector = np.kron(site, vector)
    return StateVector(vector)


def state_from_amplitudes(amplitudes: ArrayLike) -> StateVector:
    return StateVector(np.asarray(amplitudes, dtype=complex))
