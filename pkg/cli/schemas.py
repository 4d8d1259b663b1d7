"""
zeno_ising.cli.schemas — Pydantic model of a run configuration.

Keys are flat so that a config file line ``step=0.01`` and the flag
``--step 0.01`` fill the same field.
"""
from __future__ import annotations

import os
from enum import Enum
from math import floor
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..alpha import Method
from ..errors import UsageError
from ..oracle.measurement import InitialState, MeasurementQuestion

WORKERS_ENV = "ZENO_ISING_WORKERS"
MAX_GRID_POINTS = 1_000_000
GRID_SLACK = 1e-9


def default_workers() -> int:
    """``ZENO_ISING_WORKERS`` if set, else the CPU count."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"{WORKERS_ENV}={raw!r} is not an integer", (WORKERS_ENV,)) from None
    return os.cpu_count() or 1


class Mode(str, Enum):
    ALPHA_POINT = "alpha_point"
    GAMMA_SWEEP = "alpha_gamma_sweep"
    TAU_SWEEP = "alpha_tau_sweep"
    SURFACE = "alpha_surface"
    SIMULATE = "simulate"
    CRITICAL_LINE = "critical_line"
    VALIDATE = "validate"


class SweepMethod(str, Enum):
    INTEGRAL = Method.INTEGRAL.value
    FINITE_N = Method.FINITE_N.value
    ORACLE_FIT = Method.ORACLE_FIT.value


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------
class GridSpec(BaseModel):
    """Lattice start, start + step, ... never past stop; stop is included when on the lattice."""

    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: float = Field(..., gt=0)

    @model_validator(mode="after")
    def _check_extent(self) -> GridSpec:
        if not self.start < self.stop:
            raise ValueError(f"start ({self.start}) must be < stop ({self.stop})")
        if (self.stop - self.start) / self.step > MAX_GRID_POINTS:
            raise ValueError(f"grid has more than {MAX_GRID_POINTS} points")
        return self

    @property
    def size(self) -> int:
        # stop counts when it is within GRID_SLACK steps of the lattice
        return int(floor((self.stop - self.start) / self.step + GRID_SLACK)) + 1

    def values(self) -> NDArray[np.float64]:
        return np.minimum(self.start + np.arange(self.size) * self.step, self.stop)


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------
_GRID_KEYS = ("start", "stop", "step")
_TAU_GRID_KEYS = ("tau_start", "tau_stop", "tau_step")


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: Mode
    gamma: float | None = None
    tau: float | None = Field(None, gt=0)
    start: float | None = None
    stop: float | None = None
    step: float | None = Field(None, gt=0)
    tau_start: float | None = None
    tau_stop: float | None = None
    tau_step: float | None = Field(None, gt=0)
    method: SweepMethod = SweepMethod.INTEGRAL
    n_sites: int | None = Field(None, ge=4)
    question: str = "mz_not_one"
    n_max: int = Field(40, ge=2)
    initial_state: InitialState = InitialState.GROUND
    seed: int = 0
    skip_head: int = Field(1, ge=0)
    rel_tol: float = Field(1e-10, gt=1e-14, lt=1e-2)
    detect_kink: bool = False
    threshold: float = Field(20.0, gt=0)
    output: Path | None = None
    workers: int = Field(default_factory=default_workers, ge=1)

    @property
    def grid(self) -> GridSpec | None:
        if self.start is None:
            return None
        return GridSpec(start=self.start, stop=self.stop, step=self.step)

    @property
    def tau_grid(self) -> GridSpec | None:
        if self.tau_start is None:
            return None
        return GridSpec(start=self.tau_start, stop=self.tau_stop, step=self.tau_step)

    @property
    def measurement(self) -> MeasurementQuestion:
        return MeasurementQuestion.parse(self.question)

    @model_validator(mode="after")
    def _check_mode(self) -> SweepConfig:
        mode = self.mode
        needs: list[str] = []
        if mode in (Mode.ALPHA_POINT, Mode.SIMULATE, Mode.VALIDATE):
            needs += ["gamma", "tau"]
        if mode is Mode.GAMMA_SWEEP:
            needs += ["tau", *_GRID_KEYS]
        if mode is Mode.TAU_SWEEP:
            needs += ["gamma", *_GRID_KEYS]
        if mode is Mode.SURFACE:
            needs += [*_GRID_KEYS, *_TAU_GRID_KEYS]
        if mode is Mode.CRITICAL_LINE:
            needs += list(_GRID_KEYS)
        if mode in (Mode.SIMULATE, Mode.VALIDATE) or (
            mode not in (Mode.CRITICAL_LINE,) and self.method is not SweepMethod.INTEGRAL
        ):
            needs.append("n_sites")
        missing = [key for key in needs if getattr(self, key) is None]
        if missing:
            raise ValueError(f"mode {mode.value} requires {', '.join(missing)}")

        if self.n_sites is not None and self.n_sites % 2:
            raise ValueError(f"n_sites must be even, got {self.n_sites}")
        uses_oracle = (
            mode in (Mode.SIMULATE, Mode.VALIDATE) or self.method is SweepMethod.ORACLE_FIT
        )
        if uses_oracle and self.n_sites is not None and self.n_sites > 16:
            raise ValueError(f"state-vector runs are capped at 16 sites, got {self.n_sites}")
        if mode in _GRID_MODES:
            grid = self.grid
            if mode is Mode.TAU_SWEEP and grid.start <= 0:
                raise ValueError("tau grid must start above 0")
            if mode is Mode.CRITICAL_LINE and (grid.start < 0 or grid.values()[-1] >= 1):
                raise ValueError("critical_line needs 0 <= gamma < 1 over the whole grid")
        if mode is Mode.SURFACE and self.tau_grid.start <= 0:
            raise ValueError("tau grid must start above 0")
        # a malformed question raises InvalidSpecError, a ValueError
        question = self.measurement
        if self.n_sites is not None:
            question.no_sectors(self.n_sites)
        return self


_GRID_MODES = frozenset({Mode.GAMMA_SWEEP, Mode.TAU_SWEEP, Mode.SURFACE, Mode.CRITICAL_LINE})
