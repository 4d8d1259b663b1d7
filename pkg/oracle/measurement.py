"""
zeno_ising.oracle.measurement — Magnetization questions and the first-passage loop.

A question partitions the basis by total magnetization m. The NO-set is
retained after each measurement; the mass removed at step n is the
probability p_n that the first YES arrives at measurement n.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from ..core import ChainSpec, check_sites
from ..errors import InvalidSpecError
from .base import EvolutionConfig
from .evolution import backend_for
from .hamiltonian import SpinHamiltonian, build_hamiltonian, ground_state
from .states import StateVector, all_up_state, magnetizations, product_state

logger = logging.getLogger(__name__)

UNDERFLOW: float = 1e-280
UNIT_NORM_TOL: float = 1e-10


class QuestionKind(str, Enum):
    MZ_NOT_ONE = "mz_not_one"            # Is M_z != 1 ?
    MZ_NOT_PM_ONE = "mz_not_pm_one"      # Is M_z != +-1 ?
    MZ_EQUALS_Q = "mz_equals_q"          # Is M_z = Q ?
    MZ_NOT_IN = "mz_not_in"              # Is m outside the retained set ?


@dataclass(frozen=True)
class MeasurementQuestion:
    """A yes/no question about the total magnetization.

    ``q`` is used by mz_equals_q (M_z = m/N); ``retained`` by mz_not_in and
    lists the magnetizations m that answer NO.
    """

    kind: QuestionKind
    q: float | None = None
    retained: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", QuestionKind(self.kind))
        object.__setattr__(self, "retained", frozenset(int(m) for m in self.retained))
        if self.kind is QuestionKind.MZ_EQUALS_Q:
            if self.q is None or not -1.0 <= self.q <= 1.0:
                raise InvalidSpecError(f"mz_equals_q needs q in [-1, 1], got {self.q!r}")
        elif self.kind is QuestionKind.MZ_NOT_IN and not self.retained:
            raise InvalidSpecError("mz_not_in needs a non-empty retained set")

    @classmethod
    def parse(cls, text: str) -> MeasurementQuestion:
        """``mz_not_one``, ``mz_not_pm_one``, ``mz_equals_q:0.25`` or ``mz_not_in:8,6``."""
        name, _, arg = text.strip().partition(":")
        try:
            kind = QuestionKind(name.strip())
        except ValueError:
            raise InvalidSpecError(f"unknown measurement question {text!r}") from None
        try:
            if kind is QuestionKind.MZ_EQUALS_Q:
                return cls(kind, q=float(arg))
            if kind is QuestionKind.MZ_NOT_IN:
                return cls(kind, retained=frozenset(int(m) for m in arg.split(",") if m.strip()))
        except ValueError as exc:
            raise InvalidSpecError(f"bad argument in question {text!r}: {exc}") from None
        if arg:
            raise InvalidSpecError(f"question {kind.value} takes no argument, got {text!r}")
        return cls(kind)

    @property
    def label(self) -> str:
        if self.kind is QuestionKind.MZ_EQUALS_Q:
            return f"{self.kind.value}:{self.q!r}"
        if self.kind is QuestionKind.MZ_NOT_IN:
            ordered = sorted(self.retained, reverse=True)
            return f"{self.kind.value}:" + ",".join(str(m) for m in ordered)
        return self.kind.value

    def no_sectors(self, n_sites: int) -> frozenset[int]:
        """Magnetizations m that answer NO (retained) on an N-site chain."""
        n = check_sites(n_sites)
        allowed = frozenset(range(-n, n + 1, 2))
        if self.kind is QuestionKind.MZ_NOT_ONE:
            return frozenset({n})
        if self.kind is QuestionKind.MZ_NOT_PM_ONE:
            return frozenset({n, -n})
        if self.kind is QuestionKind.MZ_EQUALS_Q:
            target = self.q * n
            m = round(target)
            if abs(target - m) > 1e-9 or m not in allowed:
                raise InvalidSpecError(
                    f"q={self.q!r} gives q*N={target!r}: not an integer with the parity of N={n}"
                )
            return allowed - {m}
        bad = self.retained - allowed
        if bad:
            raise InvalidSpecError(f"magnetizations {sorted(bad)} impossible for N={n}")
        return self.retained

    def mask(self, n_sites: int) -> NDArray[np.bool_]:
        """Boolean mask over basis indices, True on the NO-set."""
        return _no_mask(self, n_sites)


@lru_cache(maxsize=32)
def _no_mask(question: MeasurementQuestion, n_sites: int) -> NDArray[np.bool_]:
    mask = np.isin(magnetizations(n_sites), sorted(question.no_sectors(n_sites)))
    mask.setflags(write=False)
    return mask


def project_no_branch(
    state: StateVector, question: MeasurementQuestion
) -> tuple[StateVector, float]:
    """Keep the NO branch unnormalized; also return the removed probability."""
    mask = question.mask(state.n_sites)
    amplitudes = state.amplitudes
    yes = amplitudes[~mask]
    yes_probability = float(np.vdot(yes, yes).real)
    return StateVector(np.where(mask, amplitudes, 0.0)), yes_probability


# ---------------------------------------------------------------------------
# Decay curves
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class DecayCurve:
    """First-occurrence probabilities p_1..p_n and survival weights S_0..S_n."""

    spec: ChainSpec
    question: MeasurementQuestion
    p: NDArray[np.float64]
    survival: NDArray[np.float64]
    truncated: bool = False
    initial_state: str = ""

    def __post_init__(self) -> None:
        if len(self.survival) != len(self.p) + 1:
            raise InvalidSpecError("survival must hold one more entry than p")

    def __len__(self) -> int:
        return len(self.p)

    @property
    def n(self) -> NDArray[np.int64]:
        return np.arange(1, len(self.p) + 1)

    def ratios(self) -> NDArray[np.float64]:
        """p_{n+1} / p_n for n = 1 .. len - 1."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.p[1:] / self.p[:-1]

    def total(self) -> float:
        """sum p_n + S_n; 1 for a unit-norm start."""
        return float(np.sum(self.p) + self.survival[-1])


class InitialState(str, Enum):
    GROUND = "ground"
    ALL_UP = "all_up"
    PRODUCT = "product"


def prepare_state(
    kind: InitialState | str,
    hamiltonian: SpinHamiltonian,
    seed: int = 0,
    config: EvolutionConfig | None = None,
) -> StateVector:
    kind = InitialState(kind)
    if kind is InitialState.GROUND:
        return ground_state(hamiltonian, config)
    if kind is InitialState.ALL_UP:
        return all_up_state(hamiltonian.n_sites)
    return product_state(hamiltonian.n_sites, seed)


def first_passage(
    spec: ChainSpec,
    question: MeasurementQuestion,
    psi0: StateVector,
    n_max: int,
    config: EvolutionConfig | None = None,
    hamiltonian: SpinHamiltonian | None = None,
    label: str = "",
) -> DecayCurve:
    """Alternate exp(-i H tau) with the NO projector n_max times."""
    cfg = config or EvolutionConfig()
    if n_max < 2:
        raise InvalidSpecError(f"n_max must be >= 2, got {n_max}")
    if abs(psi0.norm_sq - 1.0) > UNIT_NORM_TOL:
        raise InvalidSpecError(f"psi0 must have unit norm, got norm^2={psi0.norm_sq!r}")
    if psi0.dim != 1 << spec.n_sites:
        raise InvalidSpecError(
            f"psi0 has dimension {psi0.dim}, N={spec.n_sites} needs {1 << spec.n_sites}"
        )
    if hamiltonian is None:
        hamiltonian = build_hamiltonian(spec.n_sites, spec.gamma, cfg.max_sites)
    elif hamiltonian.n_sites != spec.n_sites or hamiltonian.gamma != spec.gamma:
        raise InvalidSpecError("hamiltonian does not belong to spec")
    question.no_sectors(spec.n_sites)

    backend = backend_for(hamiltonian, cfg)
    p: list[float] = []
    survival: list[float] = [psi0.norm_sq]
    state = psi0
    truncated = False
    for step in range(1, n_max + 1):
        state, yes_probability = project_no_branch(backend.evolve(state, spec.tau), question)
        p.append(yes_probability)
        survival.append(state.norm_sq)
        if state.norm_sq < UNDERFLOW and step < n_max:
            logger.warning(
                "survival %.3e below %.0e after %d measurements; curve truncated",
                state.norm_sq,
                UNDERFLOW,
                step,
            )
            truncated = True
            break
    logger.debug(
        "first_passage %s %s: %d steps, S=%.3e", spec, question.label, len(p), survival[-1]
    )
    return DecayCurve(spec, question, np.array(p), np.array(survival), truncated, label)
