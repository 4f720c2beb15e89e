"""First-order conservative finite-volume solver on the torus (zero viscosity)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import PositivityError, SimConfig, StateField, Trajectory
from .diagnostics import record
from .models import ModelSpec, flux, spectral_radius

logger = logging.getLogger(__name__)

FLUX_KINDS = ("rusanov", "lax-friedrichs")


@dataclass(frozen=True)
class HyperbolicScheme:
    """Numerical flux choice and Courant number.

    ``lax-friedrichs`` uses one global dissipation speed (the largest
    spectral radius over all supplied states) instead of the local one.
    """

    cfl: float = 0.5
    flux_kind: str = "rusanov"

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        if self.flux_kind not in FLUX_KINDS:
            raise ValueError(f"flux_kind must be one of {FLUX_KINDS}, got {self.flux_kind!r}")


def numerical_flux(model: ModelSpec, left, right, kind: str = "rusanov"):
    """Two-point flux ``F^ = (F(L) + F(R))/2 - alpha/2 (R - L)``.

    ``left`` and ``right`` are ``(v, m)`` pairs of scalars or equal-length
    arrays (one entry per interface).
    """
    vl, ml = (np.asarray(c, dtype=float) for c in left)
    vr, mr = (np.asarray(c, dtype=float) for c in right)
    f1l, f2l = flux(model, vl, ml)
    f1r, f2r = flux(model, vr, mr)
    alpha = np.maximum(spectral_radius(model, vl, ml), spectral_radius(model, vr, mr))
    if kind == "lax-friedrichs":
        alpha = np.max(alpha)
    elif kind != "rusanov":
        raise ValueError(f"unknown flux kind {kind!r}")
    return (
        0.5 * (f1l + f1r) - 0.5 * alpha * (vr - vl),
        0.5 * (f2l + f2r) - 0.5 * alpha * (mr - ml),
    )


def stable_dt(model: ModelSpec, state: StateField, cfl: float) -> float:
    speed = float(np.max(spectral_radius(model, state.v, state.m)))
    if not speed > 0:
        raise ValueError("maximum wave speed is zero; no CFL time step exists")
    return cfl * state.grid.dx / speed


@lru_cache(maxsize=None)
def periodic_neighbors(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays of the right and left neighbor of every cell on the torus."""
    i = np.arange(n)
    return (i + 1) % n, (i - 1) % n


def flux_divergence(model: ModelSpec, v, m, dx: float, kind: str = "rusanov"):
    """``(F^_{i+1/2} - F^_{i-1/2}) / dx`` for both components, periodic indexing.

    Same formula as :func:`numerical_flux` with cell fluxes and speeds
    evaluated once per cell.
    """
    right, left = periodic_neighbors(len(v))
    f1, f2 = flux(model, v, m)
    rho = spectral_radius(model, v, m)
    alpha = np.maximum(rho, rho[right])
    if kind == "lax-friedrichs":
        alpha = np.max(alpha)
    g1 = 0.5 * (f1 + f1[right]) - 0.5 * alpha * (v[right] - v)
    g2 = 0.5 * (f2 + f2[right]) - 0.5 * alpha * (m[right] - m)
    return (g1 - g1[left]) / dx, (g2 - g2[left]) / dx


def check_positive(model: ModelSpec, m, time: float) -> None:
    if model.needs_positive_density:
        i = int(np.argmin(m))
        if not m[i] > 0:
            raise PositivityError(time, i, float(m[i]))


def step(model: ModelSpec, scheme: HyperbolicScheme, state: StateField, dt: float) -> StateField:
    """One forward-Euler finite-volume update of length ``dt``."""
    d1, d2 = flux_divergence(model, state.v, state.m, state.grid.dx, scheme.flux_kind)
    v = state.v - dt * d1
    m = state.m - dt * d2
    t = state.time + dt
    check_positive(model, m, t)
    return StateField(state.grid, v, m, t)


def _march(config: SimConfig, state: StateField, advance, max_dt) -> Trajectory:
    """Shared time loop: steps of ``min(max_dt(v, m), time to next snapshot)``.

    ``advance(v, m, dt) -> (v, m)`` performs one update.  Snapshot times are
    hit exactly so diagnostics timestamps are reproducible.
    """
    model = config.model
    traj = Trajectory()
    traj.append(state, record(state, model))
    v, m = np.array(state.v), np.array(state.m)
    t = 0.0
    n_steps = 0
    for target in config.snapshot_times()[1:]:
        while t < target:
            dt = max_dt(v, m)
            if target - t <= dt * (1.0 + 1e-9):
                dt, t_next = target - t, target
            else:
                t_next = t + dt
            v, m = advance(v, m, dt)
            n_steps += 1
            try:
                check_positive(model, m, t_next)
            except PositivityError as exc:
                exc.trajectory = traj
                raise
            t = t_next
        snap = StateField(config.grid, v, m, t)
        traj.append(snap, record(snap, model))
    logger.info("reached t = %g in %d steps", t, n_steps)
    return traj


def evolve(config: SimConfig, scheme: HyperbolicScheme | None = None,
           initial: StateField | None = None) -> Trajectory:
    """Integrate the inviscid system from the configured initial data to ``t_end``."""
    if config.epsilon != 0:
        raise ValueError("evolve is the inviscid solver; use parabolic.evolve_viscous for epsilon > 0")
    scheme = scheme or HyperbolicScheme(config.cfl)
    model = config.model
    dx = config.grid.dx
    state = initial if initial is not None else config.initial_state()

    def advance(v, m, dt):
        d1, d2 = flux_divergence(model, v, m, dx, scheme.flux_kind)
        return v - dt * d1, m - dt * d2

    def max_dt(v, m):
        return scheme.cfl * dx / float(np.max(spectral_radius(model, v, m)))

    return _march(config, state, advance, max_dt)
