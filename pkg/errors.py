"""
zeno_ising.errors — Exception hierarchy.

Every error raised by the package derives from ZenoError and from the
builtin it refines, so callers may catch either.
"""
from __future__ import annotations


class ZenoError(Exception):
    """Base class for all zeno_ising errors."""


class InvalidSpecError(ZenoError, ValueError):
    """Chain parameters or a measurement question are invalid."""


class SingularModeError(ZenoError, ValueError):
    """A momentum mode sits on the gapless point (lambda_k = 0)."""


class NoCriticalPointError(ZenoError, ValueError):
    """A slope jump was requested where no critical point exists."""


class SingularSampleError(ZenoError, ValueError):
    """A grid mode has g_k^2 = 1, so the finite-N decay constant diverges."""


class QuadratureError(ZenoError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error_bound: float) -> None:
        super().__init__(f"{message} (estimate={estimate!r}, error_bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class ResourceError(ZenoError, MemoryError):
    """The requested state-vector dimension exceeds the configured cap."""


class EvolutionError(ZenoError, RuntimeError):
    """Krylov time evolution did not converge."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class EigensolverError(ZenoError, RuntimeError):
    """The sparse ground-state solver did not converge."""


class FitError(ZenoError, ValueError):
    """A decay curve cannot be fitted.

    ``reason`` is ``"too_few_points"`` or ``"non_positive"``; the revival case
    (p_n = 0) surfaces as ``"non_positive"``.
    """

    def __init__(self, message: str, reason: str) -> None:
        super().__init__(message)
        self.reason = reason


class SweepInputError(ZenoError, ValueError):
    """A sweep handed to kink detection is unusable (too short, non-uniform)."""


class UsageError(ZenoError, ValueError):
    """Command-line or config-file input is invalid."""

    def __init__(self, message: str, keys: tuple[str, ...] = ()) -> None:
        super().__init__(message)
        self.keys = keys
