"""
zeno_ising.engine — Run facade for sweeps, simulations and validation.

``run(config)`` executes one SweepConfig and returns a SweepResult. Grid
samples are independent tasks; they fan out over joblib workers and are
merged back in grid order, so the result does not depend on the worker
count.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from math import nan
from typing import TYPE_CHECKING, Callable, Sequence, TypeVar

import numpy as np
from joblib import Parallel, delayed, parallel_backend
from numpy.typing import NDArray

from .alpha import (
    AlphaSample,
    Method,
    alpha_finite_n,
    alpha_integral,
    critical_tau,
    slope_jump_gamma,
    slope_jump_tau,
)
from .analyzer import CrossEngineChecker, FitResult, KinkReport, detect_kink, fit_decay
from .core import ChainSpec
from .errors import FitError, QuadratureError, ZenoError
from .oracle import (
    DecayCurve,
    EvolutionConfig,
    InitialState,
    MeasurementQuestion,
    QuestionKind,
    all_up_state,
    backend_for,
    build_hamiltonian,
    first_passage,
    ground_state_with_energy,
    prepare_state,
)

if TYPE_CHECKING:
    from .cli.schemas import SweepConfig

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SweepSample:
    """One grid point: alpha and how it was obtained."""

    gamma: float
    tau: float
    alpha: float
    method: Method
    error_estimate: float
    fit: FitResult | None = None

    @classmethod
    def from_alpha(cls, sample: AlphaSample) -> SweepSample:
        return cls(sample.gamma, sample.tau, sample.alpha, sample.method, sample.error_estimate)

    @property
    def failed(self) -> bool:
        return self.method is Method.FAILED


@dataclass(frozen=True)
class CriticalRow:
    gamma0: float
    tau0: float
    k0: float
    delta_gamma: float
    delta_tau: float


@dataclass
class SweepResult:
    """Everything one run produced, plus a config echo and timing."""

    config: SweepConfig
    samples: list[SweepSample] = field(default_factory=list)
    curve: DecayCurve | None = None
    fit: FitResult | None = None
    critical: list[CriticalRow] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    kink: KinkReport | None = None
    started_at: str = ""
    elapsed: float = 0.0

    @property
    def axis(self) -> str:
        """Swept parameter of a one-dimensional sweep, else ''."""
        mode = self.config.mode.value
        if mode == "alpha_gamma_sweep":
            return "gamma"
        if mode == "alpha_tau_sweep":
            return "tau"
        return ""

    @property
    def parameters(self) -> NDArray[np.float64]:
        axis = self.axis or "gamma"
        return np.array([getattr(s, axis) for s in self.samples])

    @property
    def alphas(self) -> NDArray[np.float64]:
        return np.array([s.alpha for s in self.samples])

    @property
    def failures(self) -> list[SweepSample]:
        return [s for s in self.samples if s.failed]

    @property
    def passed(self) -> bool:
        return all(check["valid"] for check in self.checks)

    def metadata(self) -> dict:
        return {
            "config": self.config.model_dump(mode="json"),
            "started_at": self.started_at,
            "elapsed_s": self.elapsed,
            "samples": len(self.samples),
            "failed": len(self.failures),
        }


# ---------------------------------------------------------------------------
# Per-sample tasks (top level so worker processes can unpickle them)
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class AlphaTask:
    gamma: float
    tau: float
    method: Method = Method.INTEGRAL
    rel_tol: float = 1e-10
    n_sites: int | None = None
    question: str = "mz_not_one"
    n_max: int = 40
    initial_state: InitialState = InitialState.GROUND
    seed: int = 0
    skip_head: int = 1


def oracle_curve(
    spec: ChainSpec,
    question: MeasurementQuestion,
    n_max: int,
    initial_state: InitialState | str = InitialState.GROUND,
    seed: int = 0,
    config: EvolutionConfig | None = None,
) -> DecayCurve:
    """Build H for ``spec``, prepare the start state and run first_passage."""
    cfg = config or EvolutionConfig()
    hamiltonian = build_hamiltonian(spec.n_sites, spec.gamma, cfg.max_sites)
    psi0 = prepare_state(initial_state, hamiltonian, seed, cfg)
    return first_passage(
        spec, question, psi0, n_max, cfg, hamiltonian, label=InitialState(initial_state).value
    )


def compute_sample(task: AlphaTask) -> SweepSample:
    """Evaluate one grid point; numerical failures become method=failed."""
    try:
        if task.method is Method.INTEGRAL:
            return SweepSample.from_alpha(alpha_integral(task.gamma, task.tau, task.rel_tol))
        spec = ChainSpec(task.n_sites, task.gamma, task.tau)
        if task.method is Method.FINITE_N:
            return SweepSample.from_alpha(alpha_finite_n(spec))
        curve = oracle_curve(
            spec,
            MeasurementQuestion.parse(task.question),
            task.n_max,
            task.initial_state,
            task.seed,
        )
        fit = fit_decay(curve, task.skip_head)
        scale = spec.n_sites * spec.tau ** 2
        return SweepSample(
            task.gamma, task.tau, fit.alpha_hat, Method.ORACLE_FIT, fit.beta_stderr / scale, fit
        )
    except QuadratureError as exc:
        logger.warning("sample gamma=%r tau=%r failed: %s", task.gamma, task.tau, exc)
        return SweepSample(task.gamma, task.tau, nan, Method.FAILED, exc.error_bound)
    except ZenoError as exc:
        logger.warning("sample gamma=%r tau=%r failed: %s", task.gamma, task.tau, exc)
        return SweepSample(task.gamma, task.tau, nan, Method.FAILED, nan)


def parallel_map(func: Callable[[T], R], tasks: Sequence[T], workers: int = 1) -> list[R]:
    """Order-preserving map; runs inline for one worker or one task."""
    if workers <= 1 or len(tasks) < 2:
        return [func(task) for task in tasks]
    n_jobs = min(workers, len(tasks))
    with parallel_backend("loky", n_jobs=n_jobs, inner_max_num_threads=1):
        return Parallel(n_jobs=n_jobs)(delayed(func)(task) for task in tasks)


# ---------------------------------------------------------------------------
# Modes
# ---------------------------------------------------------------------------
def _task(config: SweepConfig, gamma: float, tau: float) -> AlphaTask:
    return AlphaTask(
        gamma=float(gamma),
        tau=float(tau),
        method=Method(config.method.value),
        rel_tol=config.rel_tol,
        n_sites=config.n_sites,
        question=config.question,
        n_max=config.n_max,
        initial_state=config.initial_state,
        seed=config.seed,
        skip_head=config.skip_head,
    )


def _grid_tasks(config: SweepConfig) -> list[AlphaTask]:
    mode = config.mode.value
    if mode == "alpha_point":
        return [_task(config, config.gamma, config.tau)]
    if mode == "alpha_gamma_sweep":
        return [_task(config, g, config.tau) for g in config.grid.values()]
    if mode == "alpha_tau_sweep":
        return [_task(config, config.gamma, t) for t in config.grid.values()]
    # surface: gamma-major, tau varying fastest
    return [_task(config, g, t) for g in config.grid.values() for t in config.tau_grid.values()]


def run_alpha(config: SweepConfig, result: SweepResult) -> None:
    tasks = _grid_tasks(config)
    logger.info(
        "evaluating %d samples with %s on %d workers",
        len(tasks),
        config.method.value,
        config.workers,
    )
    result.samples = parallel_map(compute_sample, tasks, config.workers)
    if result.failures:
        logger.warning("%d of %d samples failed", len(result.failures), len(tasks))
    if config.detect_kink and result.axis:
        try:
            result.kink = detect_kink(result, config.threshold)
        except ZenoError as exc:
            logger.warning("kink detection skipped: %s", exc)


def run_simulate(config: SweepConfig, result: SweepResult) -> None:
    spec = ChainSpec(config.n_sites, config.gamma, config.tau)
    result.curve = oracle_curve(
        spec, config.measurement, config.n_max, config.initial_state, config.seed
    )
    try:
        result.fit = fit_decay(result.curve, config.skip_head)
    except FitError as exc:
        logger.warning("no decay fit (%s): %s", exc.reason, exc)


def run_critical_line(config: SweepConfig, result: SweepResult) -> None:
    rows = []
    for gamma in config.grid.values():
        point = critical_tau(float(gamma))
        if point is None:
            logger.warning("no critical point at gamma=%r; row skipped", float(gamma))
            continue
        rows.append(
            CriticalRow(
                point.gamma0,
                point.tau0,
                point.k0,
                slope_jump_gamma(point.tau0),
                slope_jump_tau(point.gamma0),
            )
        )
    result.critical = rows


def validation_checks(spec: ChainSpec, n_max: int = 12, skip_head: int = 1) -> list[dict]:
    """State-vector against mode-product checks for one chain."""
    cfg = EvolutionConfig()
    hamiltonian = build_hamiltonian(spec.n_sites, spec.gamma, cfg.max_sites)
    energy, ground = ground_state_with_energy(hamiltonian, cfg)
    up = all_up_state(spec.n_sites)
    evolved = backend_for(hamiltonian, cfg).evolve(up, spec.tau)

    checks = [
        CrossEngineChecker.ground_energy(spec, energy),
        CrossEngineChecker.ground_overlap(spec, abs(ground.amplitudes[0]) ** 2),
        CrossEngineChecker.return_amplitude(spec, complex(evolved.amplitudes[0])),
    ]
    not_one = MeasurementQuestion(QuestionKind.MZ_NOT_ONE)
    curve = first_passage(spec, not_one, ground, n_max, cfg, hamiltonian, label="ground")
    checks.append(CrossEngineChecker.survival_ratio(curve))
    checks.append(CrossEngineChecker.fitted_alpha(curve, skip_head))

    pm_one = MeasurementQuestion(QuestionKind.MZ_NOT_PM_ONE)
    pm_curve = first_passage(spec, pm_one, up, n_max, cfg, hamiltonian, label="all_up")
    checks.append(CrossEngineChecker.pm1_survival(pm_curve))
    if (spec.n_sites // 2) % 2:
        checks.append(CrossEngineChecker.pm1_ratio(pm_curve))
    return checks


def run_validate(config: SweepConfig, result: SweepResult) -> None:
    spec = ChainSpec(config.n_sites, config.gamma, config.tau)
    result.checks = validation_checks(spec, config.n_max, config.skip_head)
    for check in result.checks:
        level = logging.INFO if check["valid"] else logging.WARNING
        logger.log(
            level,
            "%s: residual %.3e (tol %.0e)",
            check["name"],
            check["residual"],
            check["tolerance"],
        )


_RUNNERS: dict[str, Callable[[SweepConfig, SweepResult], None]] = {
    "alpha_point": run_alpha,
    "alpha_gamma_sweep": run_alpha,
    "alpha_tau_sweep": run_alpha,
    "alpha_surface": run_alpha,
    "simulate": run_simulate,
    "critical_line": run_critical_line,
    "validate": run_validate,
}


def run(config: SweepConfig) -> SweepResult:
    """Execute one configured run; the caller writes the output."""
    started_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    result = SweepResult(config, started_at=started_at)
    logger.info("run %s started", config.mode.value)
    start = time.perf_counter()
    _RUNNERS[config.mode.value](config, result)
    result.elapsed = time.perf_counter() - start
    logger.info("run %s finished in %.2f s", config.mode.value, result.elapsed)
    return result

