"""Conserved quantities, equilibrium gaps, invariant extremes and PDE residuals."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .core import StateField, Trajectory
from .models import ModelKind, ModelSpec
from .riemann import riemann_invariants

NAN = float("nan")


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    mass: float
    mean_v: float
    l1_v: float
    l1_m: float
    min_m: float
    max_w1: float
    max_w2: float
    min_w1: float
    min_w2: float

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def record(state: StateField, model: ModelSpec | None = None) -> DiagnosticsRecord:
    """Diagnostics of one snapshot.

    Integrals are midpoint sums.  The Riemann-invariant extremes are NaN when
    the second component is not a positive density (p-system, or lost
    positivity).
    """
    grid = state.grid
    dx = grid.dx
    v, m = state.v, state.m
    mass = dx * float(m.sum())
    mean_v = float(v.sum()) / grid.n_cells
    l1_v = dx * float(np.abs(v).sum())
    l1_m = dx * float(np.abs(m - 1.0).sum())
    min_m = float(m.min())
    is_density = model is None or model.kind is not ModelKind.PSYSTEM
    if is_density and min_m > 0:
        w1, w2 = riemann_invariants(v, m)
        ext = (float(w1.max()), float(w2.max()), float(w1.min()), float(w2.min()))
    else:
        ext = (NAN,) * 4
    return DiagnosticsRecord(state.time, mass, mean_v, l1_v, l1_m, min_m, *ext)


def conservation_drift(trajectory: Trajectory) -> tuple[float, float]:
    """``(max relative mass drift, max absolute drift of mean(v))`` over the run."""
    recs = trajectory.diagnostics
    if not recs:
        raise ValueError("empty trajectory")
    mass0, mv0 = recs[0].mass, recs[0].mean_v
    scale = abs(mass0) if mass0 != 0 else 1.0
    d_mass = max(abs(r.mass - mass0) for r in recs) / scale
    d_mv = max(abs(r.mean_v - mv0) for r in recs)
    return d_mass, d_mv


def invariant_extreme_drift(trajectory: Trajectory) -> tuple[float, float]:
    """Growth of ``max w1`` and ``max w2`` above their initial values.

    Positive values mean the discrete solution left the invariant domain
    spanned by its initial data.
    """
    recs = trajectory.diagnostics
    if any(not r.min_m > 0 or np.isnan(r.max_w1) for r in recs):
        raise ValueError("invariant extremes undefined: a snapshot lost density positivity")
    w1_0, w2_0 = recs[0].max_w1, recs[0].max_w2
    return (max(r.max_w1 for r in recs) - w1_0, max(r.max_w2 for r in recs) - w2_0)


def _check_lattice(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or min(u.shape) < 3:
        raise ValueError(f"need a space-time lattice of at least 3x3, got shape {u.shape}")
    return u


def wave_residual_nonlinear(u_field, dx: float, dt: float) -> float:
    """Max interior residual of ``u_tt - (1 + u_x**2) u_xx`` by centered differences.

    ``u_field[n, j]`` is ``u`` at time level ``n`` and spatial node ``j``.
    """
    u = _check_lattice(u_field)
    c = u[1:-1, 1:-1]
    u_tt = (u[2:, 1:-1] - 2.0 * c + u[:-2, 1:-1]) / dt**2
    u_xx = (u[1:-1, 2:] - 2.0 * c + u[1:-1, :-2]) / dx**2
    u_x = (u[1:-1, 2:] - u[1:-1, :-2]) / (2.0 * dx)
    return float(np.max(np.abs(u_tt - (1.0 + u_x**2) * u_xx)))


def reconstruct_potential(trajectory: Trajectory, u_origin: float = 0.0) -> np.ndarray:
    """Recover ``u`` at the cell interfaces from p-system snapshots ``(v, w) = (u_x, u_t)``.

    ``u`` at the interface ``x = 0`` is advanced by trapezoidal integration of
    ``w`` there (the average of the two adjacent cells); the remaining nodes
    follow by cumulative sums of ``dx * v``.  Returns an array of shape
    ``(n_snapshots, n_cells + 1)`` at nodes ``x_j = j * dx``.
    """
    snaps = trajectory.snapshots
    dx = snaps[0].grid.dx
    times = trajectory.times
    w_origin = np.array([0.5 * (s.m[0] + s.m[-1]) for s in snaps])
    base = u_origin + np.concatenate(
        [[0.0], np.cumsum(0.5 * (w_origin[1:] + w_origin[:-1]) * np.diff(times))]
    )
    u = np.empty((len(snaps), snaps[0].grid.n_cells + 1))
    u[:, 0] = base
    for k, s in enumerate(snaps):
        u[k, 1:] = base[k] + dx * np.cumsum(s.v)
    return u
