"""
zeno_ising.oracle.krylov — Lanczos propagation for chains too large for eigh.

exp(-i H dt) v is approximated by beta0 V_m exp(-i dt T_m) e_1 on the
Krylov space of (H, v). The time step is halved until the a-posteriori
estimate beta0 * b_m * |[exp(-i dt T_m)]_{m,1}| falls below tolerance.
"""
from __future__ import annotations

import logging

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from ..errors import EvolutionError
from .base import EvolutionBackend

logger = logging.getLogger(__name__)

BREAKDOWN: float = 1e-14


class KrylovEvolution(EvolutionBackend):
    """Fixed-dimension Lanczos with full reorthogonalization."""

    name = "krylov"

    def _step(
        self, vector: NDArray[np.complex128], dt: float
    ) -> tuple[NDArray[np.complex128], float]:
        beta0 = float(np.linalg.norm(vector))
        if beta0 == 0.0:
            return np.zeros_like(vector), 0.0

        dim = vector.size
        m_max = min(self.config.krylov_dim, dim)
        basis = np.zeros((m_max + 1, dim), dtype=complex)
        diag = np.zeros(m_max)
        off = np.zeros(m_max)
        basis[0] = vector / beta0

        m = m_max
        for j in range(m_max):
            w = self.hamiltonian.matvec(basis[j])
            diag[j] = float(np.vdot(basis[j], w).real)
            # full reorthogonalization against every earlier vector
            w = w - basis[: j + 1].T @ (basis[: j + 1].conj() @ w)
            w = w - basis[: j + 1].T @ (basis[: j + 1].conj() @ w)
            off[j] = float(np.linalg.norm(w))
            if off[j] < BREAKDOWN * max(1.0, abs(diag[j])):
                # invariant subspace: the projection is exact
                m = j + 1
                off[j] = 0.0
                break
            basis[j + 1] = w / off[j]

        tri = np.diag(diag[:m]) + np.diag(off[: m - 1], 1) + np.diag(off[: m - 1], -1)
        propagator = expm(-1j * dt * tri)
        result = beta0 * (basis[:m].T @ propagator[:, 0])
        error = beta0 * off[m - 1] * abs(propagator[m - 1, 0])
        return result, error

    def apply(self, amplitudes: NDArray[np.complex128], tau: float) -> NDArray[np.complex128]:
        vector = np.asarray(amplitudes, dtype=complex)
        scale = float(np.linalg.norm(vector))
        substeps = 1
        worst = float("inf")
        while substeps <= self.config.max_substeps:
            dt = tau / substeps
            current = vector
            worst = 0.0
            for _ in range(substeps):
                current, error = self._step(current, dt)
                worst = max(worst, error)
                if worst > self.config.krylov_tol * max(scale, 1e-300):
                    break
            else:
                return current
            logger.debug("Krylov error %.3e with %d substeps; refining", worst, substeps)
            substeps *= 2
        raise EvolutionError(
            f"Krylov propagation did not reach tol {self.config.krylov_tol:g} "
            f"within {self.config.max_substeps} substeps",
            worst,
        )
