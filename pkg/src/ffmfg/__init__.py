"""One-dimensional forward-forward mean-field games as hyperbolic conservation laws."""

from .core import (
    PeriodicGrid,
    PositivityError,
    SimConfig,
    StateField,
    Trajectory,
    cell_mean,
    make_grid,
    sample_field,
)
from .models import PSYSTEM, QQ, EigenPair, ModelKind, ModelSpec
from .riemann import InvariantDomain, riemann_invariants

__all__ = [
    "EigenPair",
    "InvariantDomain",
    "ModelKind",
    "ModelSpec",
    "PSYSTEM",
    "PeriodicGrid",
    "PositivityError",
    "QQ",
    "SimConfig",
    "StateField",
    "Trajectory",
    "cell_mean",
    "make_grid",
    "riemann_invariants",
    "sample_field",
]
__version__ = "0.1.0"
