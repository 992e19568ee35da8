"""Maximal Poisson-disk patterns in the unit square.

The fast path keeps a grid of per-cell free regions with explicit Poisson
arrival times and accepts locally-early candidates in constant time per
point; a naive dart-throwing sampler serves as the distributional reference,
and the stats module verifies density, spacing, and maximality claims.
"""

from .engine import Pattern, Sampler, iter_points, run
from .naive import NaiveConfig, naive_run
from .stats import compute_stats, maximality_probe

__version__ = "0.1.0"

__all__ = [
    "Pattern",
    "Sampler",
    "run",
    "iter_points",
    "NaiveConfig",
    "naive_run",
    "compute_stats",
    "maximality_probe",
    "__version__",
]
