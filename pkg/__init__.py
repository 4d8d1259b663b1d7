"""
zeno_ising — Decay constant of the transverse Ising ring under repeated measurement.

Public API::

    from zeno_ising import ChainSpec, alpha_integral, alpha_finite_n
    alpha_integral(0.5, 1.0).alpha
    alpha_finite_n(ChainSpec(16, 0.5, 1.0)).alpha
    critical_gamma(1.0)

State-vector oracle::

    from zeno_ising.oracle import MeasurementQuestion, first_passage
    from zeno_ising import fit_decay
"""
from .alpha import (
    AlphaSample,
    CriticalPoint,
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
from .analyzer import (
    CrossEngineChecker,
    FitResult,
    KinkReport,
    detect_kink,
    detect_kink_arrays,
    fit_decay,
)
from .core import (
    ChainSpec,
    ModeRecord,
    ModeTable,
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
from .engine import SweepResult, SweepSample, run
from .errors import ZenoError

__version__ = "0.1.0"

__all__ = [
    # Chain and modes
    "ChainSpec",
    "ModeRecord",
    "ModeTable",
    "mode_table",
    "momenta",
    "lambda_k",
    "theta_k",
    "evolution_amplitudes",
    "g_k",
    "gap",
    "log_gap",
    "survival_ratio",
    "ground_state_overlap",
    "ground_energy",
    "return_amplitude",
    "ratio_pm1",
    "alpha1",
    "pm1_transfer",
    "pm1_decay_ratio",
    # Decay constant
    "AlphaSample",
    "CriticalPoint",
    "Method",
    "QuadratureConfig",
    "alpha_integral",
    "alpha_finite_n",
    "alpha1_finite_n",
    "critical_gamma",
    "critical_tau",
    "critical_points",
    "criticality_distance",
    "slope_jump_gamma",
    "slope_jump_tau",
    "gap_expansion_fixed_tau",
    "gap_expansion_fixed_gamma",
    # Fits and sweeps
    "FitResult",
    "KinkReport",
    "CrossEngineChecker",
    "fit_decay",
    "detect_kink",
    "detect_kink_arrays",
    "SweepResult",
    "SweepSample",
    "run",
    "ZenoError",
]
