"""zeno_ising.cli — Command-line front end and run configuration."""
from .schemas import GridSpec, Mode, SweepConfig, SweepMethod, default_workers

__all__ = ["GridSpec", "Mode", "SweepConfig", "SweepMethod", "default_workers"]
