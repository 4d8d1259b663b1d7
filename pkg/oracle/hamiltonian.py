"""
zeno_ising.oracle.hamiltonian — Sparse spin Hamiltonian and its ground state.

H = -sum_j s^x_j s^x_{j+1} - Gamma sum_j s^z_j with s_{N+1} = s_1.
s^x_j s^x_{j+1} flips the two bits j and j+1 (mod N); the field term is
diagonal, -Gamma * m.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy import sparse
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from ..core import check_sites
from ..errors import EigensolverError, ResourceError
from .base import EvolutionConfig
from .states import StateVector, magnetizations

logger = logging.getLogger(__name__)

DEGENERACY_GAP: float = 1e-10


@dataclass(frozen=True, eq=False)
class SpinHamiltonian:
    """Read-only handle on the sparse Hamiltonian of one (N, Gamma)."""

    n_sites: int
    gamma: float
    matrix: sparse.csr_matrix

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> NDArray[np.float64]:
        return self.matrix.toarray()

    @cached_property
    def spectrum(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Full eigendecomposition (energies ascending, real eigenvectors as columns)."""
        logger.debug("dense eigendecomposition of dimension %d", self.dim)
        return eigh(self.dense())

    def matvec(self, vector: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return self.matrix @ vector


def build_hamiltonian(n_sites: int, gamma: float, max_sites: int = 16) -> SpinHamiltonian:
    """Assemble H in CSR form; at most N off-diagonal entries per row."""
    n = check_sites(n_sites)
    if n > max_sites:
        raise ResourceError(f"N={n} exceeds the state-vector cap of {max_sites} sites")
    dim = 1 << n
    indices = np.arange(dim, dtype=np.int64)

    rows = [indices]
    cols = [indices]
    values = [-gamma * magnetizations(n).astype(float)]
    for j in range(n):
        bond = (1 << j) | (1 << ((j + 1) % n))
        rows.append(indices)
        cols.append(indices ^ bond)
        values.append(np.full(dim, -1.0))

    matrix = sparse.coo_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
    matrix.eliminate_zeros()
    return SpinHamiltonian(n, float(gamma), matrix)


def _fix_phase(vector: NDArray) -> NDArray[np.complex128]:
    vector = np.asarray(vector, dtype=complex)
    anchor = vector[np.argmax(np.abs(vector))]
    return vector * (abs(anchor) / anchor)


def ground_state_with_energy(
    hamiltonian: SpinHamiltonian,
    config: EvolutionConfig | None = None,
) -> tuple[float, StateVector]:
    """Lowest eigenpair; the largest-magnitude amplitude is made real positive."""
    cfg = config or EvolutionConfig()
    if hamiltonian.n_sites <= cfg.dense_cutoff:
        energies, vectors = hamiltonian.spectrum
        low = energies[:2]
        vector = vectors[:, 0]
    else:
        v0 = np.full(hamiltonian.dim, hamiltonian.dim ** -0.5)
        try:
            low, vecs = eigsh(hamiltonian.matrix, k=2, which="SA", v0=v0, tol=1e-13)
        except ArpackNoConvergence as exc:
            raise EigensolverError(
                f"eigsh converged {len(exc.eigenvalues)} of 2 eigenpairs "
                f"at N={hamiltonian.n_sites}, gamma={hamiltonian.gamma!r}"
            ) from exc
        order = np.argsort(low)
        low = low[order]
        vector = vecs[:, order[0]]

    if low[1] - low[0] < DEGENERACY_GAP:
        logger.warning(
            "degenerate ground space at N=%d, gamma=%r (gap %.3e); using the solver's first vector",
            hamiltonian.n_sites,
            hamiltonian.gamma,
            low[1] - low[0],
        )
    vector = _fix_phase(vector)
    vector /= np.linalg.norm(vector)
    return float(low[0]), StateVector(vector)


def ground_state(
    hamiltonian: SpinHamiltonian, config: EvolutionConfig | None = None
) -> StateVector:
    return ground_state_with_energy(hamiltonian, config)[1]
