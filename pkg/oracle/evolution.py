"""
zeno_ising.oracle.evolution — Backend selection.
"""
from __future__ import annotations

from .base import EvolutionBackend, EvolutionConfig
from .dense import DenseEvolution
from .hamiltonian import SpinHamiltonian
from .krylov import KrylovEvolution
from .states import StateVector


def backend_for(
    hamiltonian: SpinHamiltonian, config: EvolutionConfig | None = None
) -> EvolutionBackend:
    """Dense eigendecomposition up to ``dense_cutoff`` sites, Lanczos above."""
    cfg = config or EvolutionConfig()
    if hamiltonian.n_sites <= cfg.dense_cutoff:
        return DenseEvolution(hamiltonian, cfg)
    return KrylovEvolution(hamiltonian, cfg)


def evolve(
    hamiltonian: SpinHamiltonian,
    state: StateVector,
    tau: float,
    config: EvolutionConfig | None = None,
) -> StateVector:
    """exp(-i H tau)|state>, norm unchanged."""
    return backend_for(hamiltonian, config).evolve(state, tau)
