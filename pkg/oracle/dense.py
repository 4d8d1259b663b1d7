"""
zeno_ising.oracle.dense — Propagation through the full eigendecomposition.
"""
from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .base import EvolutionBackend


class DenseEvolution(EvolutionBackend):
    """exp(-i H tau) = V diag(e^{-i E tau}) V^T with H = V diag(E) V^T."""

    name = "dense"

    _cached_tau: float | None = None
    _phases: NDArray[np.complex128] | None = None

    def _phase_factors(self, tau: float) -> NDArray[np.complex128]:
        if self._cached_tau != tau or self._phases is None:
            energies, _ = self.hamiltonian.spectrum
            self._phases = np.exp(-1j * energies * tau)
            self._cached_tau = tau
        return self._phases

    def apply(self, amplitudes: NDArray[np.complex128], tau: float) -> NDArray[np.complex128]:
        _, vectors = self.hamiltonian.spectrum
        return vectors @ (self._phase_factors(tau) * (vectors.T @ amplitudes))
