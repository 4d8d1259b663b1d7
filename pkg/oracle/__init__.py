"""zeno_ising.oracle — Exact state-vector simulation of repeated measurement."""
from .base import EvolutionBackend, EvolutionConfig
from .dense import DenseEvolution
from .evolution import backend_for, evolve
from .hamiltonian import SpinHamiltonian, build_hamiltonian, ground_state, ground_state_with_energy
from .krylov import KrylovEvolution
from .measurement import (
    DecayCurve,
    InitialState,
    MeasurementQuestion,
    QuestionKind,
    first_passage,
    prepare_state,
    project_no_branch,
)
from .states import (
    SpinBasisState,
    StateVector,
    all_up_state,
    basis_state,
    magnetizations,
    product_state,
    state_from_amplitudes,
    uniform_state,
)

__all__ = [
    "EvolutionBackend",
    "EvolutionConfig",
    "DenseEvolution",
    "KrylovEvolution",
    "backend_for",
    "evolve",
    "SpinHamiltonian",
    "build_hamiltonian",
    "ground_state",
    "ground_state_with_energy",
    # Measurement
    "QuestionKind",
    "MeasurementQuestion",
    "project_no_branch",
    "DecayCurve",
    "InitialState",
    "prepare_state",
    "first_passage",
    # States
    "SpinBasisState",
    "StateVector",
    "magnetizations",
    "basis_state",
    "all_up_state",
    "uniform_state",
    "product_state",
    "state_from_amplitudes",
]
