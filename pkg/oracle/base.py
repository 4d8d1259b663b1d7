"""
zeno_ising.oracle.base — Abstract base for time-evolution backends.

A backend applies exp(-i H tau) to a state vector for one Hamiltonian.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidSpecError
from .states import StateVector

if TYPE_CHECKING:
    from .hamiltonian import SpinHamiltonian


@dataclass(frozen=True)
class EvolutionConfig:
    """Backend selection and tolerances for the state-vector oracle."""

    dense_cutoff: int = 12           # N <= this uses the dense eigendecomposition
    max_sites: int = 16
    krylov_tol: float = 1e-12
    krylov_dim: int = 40
    max_substeps: int = 256


class EvolutionBackend(ABC):
    """Propagator for one SpinHamiltonian.

    Subclasses must implement *apply*; *evolve* wraps it for StateVector.
    """

    name: str = "base"

    def __init__(self, hamiltonian: SpinHamiltonian, config: EvolutionConfig | None = None) -> None:
        self.hamiltonian = hamiltonian
        self.config = config or EvolutionConfig()

    @abstractmethod
    def apply(self, amplitudes: NDArray[np.complex128], tau: float) -> NDArray[np.complex128]:
        """Return exp(-i H tau) @ amplitudes as a new complex array."""

    def evolve(self, state: StateVector, tau: float) -> StateVector:
        if state.dim != self.hamiltonian.dim:
            raise InvalidSpecError(
                f"state of dimension {state.dim} does not match "
                f"H of dimension {self.hamiltonian.dim}"
            )
        # unitary: the norm carries over unchanged
        return StateVector(self.apply(state.amplitudes, tau), state.norm_sq)
