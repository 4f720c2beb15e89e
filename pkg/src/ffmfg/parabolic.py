"""Explicit solver for the viscous forward-forward system.

Both components receive the same diffusion ``epsilon * U_xx`` on top of the
conservative transport update, so the cell means of ``v`` and ``m`` stay
fixed up to rounding.  For centered data (``mean v = 0``, ``mean m = 1``)
the solution is expected to relax to the equilibrium ``(0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SimConfig, StateField, Trajectory
from .hyperbolic import _march, check_positive, evolve, flux_divergence, periodic_neighbors
from .models import ModelKind, ModelSpec, spectral_radius

MEAN_TOL = 1e-12


@dataclass(frozen=True)
class ViscousScheme:
    cfl: float = 0.5
    diffusion_safety: float = 0.25
    flux_kind: str = "rusanov"

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        if not 0 < self.diffusion_safety <= 0.5:
            raise ValueError(f"diffusion_safety must lie in (0, 0.5], got {self.diffusion_safety!r}")

    def max_dt(self, model: ModelSpec, v, m, dx: float, epsilon: float) -> float:
        speed = float(np.max(spectral_radius(model, v, m)))
        bounds = [self.diffusion_safety * dx * dx / epsilon]
        if speed > 0:
            bounds.append(self.cfl * dx / speed)
        return min(bounds)


def laplacian(u, dx: float):
    right, left = periodic_neighbors(len(u))
    grad = u[right] - u
    return (grad - grad[left]) / (dx * dx)


def diffuse(u, epsilon: float, dt: float, dx: float):
    """Explicit heat-equation update; the flux-free part of a viscous step."""
    return u + epsilon * dt * laplacian(u, dx)


def _viscous_update(model, scheme, v, m, epsilon, dt, dx):
    d1, d2 = flux_divergence(model, v, m, dx, scheme.flux_kind)
    right, left = periodic_neighbors(len(v))
    k = epsilon * dt / (dx * dx)
    # second difference written as a difference of interface gradients so it telescopes
    gv = v[right] - v
    gm = m[right] - m
    v_new = v - dt * d1 + k * (gv - gv[left])
    m_new = m - dt * d2 + k * (gm - gm[left])
    return v_new, m_new


def step_viscous(model: ModelSpec, scheme: ViscousScheme, state: StateField,
                 epsilon: float, dt: float) -> StateField:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive for the viscous step")
    dx = state.grid.dx
    limit = scheme.max_dt(model, state.v, state.m, dx, epsilon)
    if dt > limit * (1.0 + 1e-12):
        raise ValueError(f"dt = {dt!r} exceeds the stability bound {limit!r}")
    v, m = _viscous_update(model, scheme, state.v, state.m, epsilon, dt, dx)
    t = state.time + dt
    check_positive(model, m, t)
    return StateField(state.grid, v, m, t)


def recenter(state: StateField) -> StateField:
    """Shift ``v`` to zero mean and rescale ``m`` to unit mean."""
    mean_m = float(state.m.mean())
    if not mean_m > 0:
        raise ValueError(f"cannot recenter: mean(m) = {mean_m!r} is not positive")
    return state.replace(v=state.v - state.v.mean(), m=state.m / mean_m)


def check_centered(state: StateField, tol: float = MEAN_TOL) -> None:
    mean_v = float(state.v.mean())
    mean_m = float(state.m.mean())
    if abs(mean_v) > tol or abs(mean_m - 1.0) > tol:
        raise ValueError(
            f"initial data must satisfy mean(v) = 0 and mean(m) = 1 (got {mean_v!r}, {mean_m!r}); "
            "recenter the data first"
        )


def evolve_viscous(config: SimConfig, scheme: ViscousScheme | None = None,
                   initial: StateField | None = None, require_centered: bool = True) -> Trajectory:
    """Integrate the viscous system to ``t_end`` and record diagnostics at each snapshot."""
    epsilon = config.epsilon
    if not epsilon > 0:
        raise ValueError("evolve_viscous needs epsilon > 0")
    scheme = scheme or ViscousScheme(config.cfl)
    model = config.model
    dx = config.grid.dx
    state = initial if initial is not None else config.initial_state()
    if config.recenter and model.needs_positive_density:
        state = recenter(state)
    if require_centered:
        check_centered(state)

    def advance(v, m, dt):
        return _viscous_update(model, scheme, v, m, epsilon, dt, dx)

    def max_dt(v, m):
        return scheme.max_dt(model, v, m, dx, epsilon)

    return _march(config, state, advance, max_dt)


def simulate(config: SimConfig, initial: StateField | None = None) -> Trajectory:
    """Dispatch on viscosity: inviscid finite volumes for ``epsilon = 0``, viscous otherwise.

    The mean constraints are enforced only for the quadratic model, where the
    long-time convergence result applies.  ``recenter`` is ignored for the
    p-system, whose second component is not a density.
    """
    state = initial if initial is not None else config.initial_state()
    if config.recenter and config.model.needs_positive_density:
        state = recenter(state)
    if not config.viscous:
        return evolve(config, initial=state)
    qq = config.model.kind is ModelKind.QUADRATIC_QUADRATIC
    return evolve_viscous(config, initial=state, require_centered=qq)
