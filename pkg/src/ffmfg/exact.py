"""Closed-form solutions of the linear-Hamiltonian forward-forward system.

With ``H(p) = p`` the system reads ``u_t + u_x = g(m)``, ``m_t - m_x = 0``.
The density is transported to the left, ``m(x, t) = m0(x + t)``, and

    u(x, t) = u0(x - t) + 1/2 * integral_{x-t}^{x+t} g(m0(s)) ds

so that ``u`` also solves the wave equation ``u_tt - u_xx = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .models import ModelKind, ModelSpec

QUAD_TOL = 1e-12


def complex_step_derivative(f: Callable, x, h: float = 1e-30):
    """``f'(x)`` to machine precision for real-analytic ``f`` accepting complex input."""
    x = np.asarray(x, dtype=float)
    return np.imag(f(x + 1j * h)) / h


@dataclass(frozen=True)
class LinearCaseData:
    """Initial data ``(u0, m0)`` and coupling for the linear-Hamiltonian case.

    ``du0`` defaults to the complex-step derivative of ``u0``, which requires
    ``u0`` to accept complex arrays (numpy ufunc expressions do).
    """

    u0: Callable
    m0: Callable
    coupling: str = "identity"
    length: float = 1.0
    du0: Callable | None = None

    def __post_init__(self):
        # validates the coupling name
        object.__setattr__(self, "coupling", ModelSpec(ModelKind.LINEAR_EXACT, self.coupling).coupling)

    @property
    def model(self) -> ModelSpec:
        return ModelSpec(ModelKind.LINEAR_EXACT, self.coupling)

    def wrap(self, x):
        return np.mod(x, self.length)

    def g_of_m0(self, s):
        return self.model.g(self.m0(self.wrap(s)))

    def u0_prime(self, x):
        if self.du0 is not None:
            return self.du0(x)
        return complex_step_derivative(self.u0, x)


def _scalar(f):
    def wrapped(data, x, t, *args, **kwargs):
        if np.ndim(x) == 0 and np.ndim(t) == 0:
            return f(data, float(x), float(t), *args, **kwargs)
        xs, ts = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
        out = [f(data, a, b, *args, **kwargs) for a, b in zip(xs.ravel(), ts.ravel())]
        return np.array(out).reshape(xs.shape)

    wrapped.__name__ = f.__name__
    wrapped.__doc__ = f.__doc__
    return wrapped


@_scalar
def linear_u(data: LinearCaseData, x: float, t: float) -> float:
    """Value function from the characteristic formula, adaptive quadrature to 1e-12."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return float(data.u0(data.wrap(x)))
    integral, _ = integrate.quad(
        lambda s: float(data.g_of_m0(s)), x - t, x + t,
        epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=500,
    )
    return float(data.u0(data.wrap(x - t))) + 0.5 * integral


def linear_m(data: LinearCaseData, x, t):
    """Transported density ``m0(x + t)``."""
    return data.m0(data.wrap(np.asarray(x, float) + np.asarray(t, float)))


def linear_m_reversed(data: LinearCaseData, x, t):
    """``m0(x - t)``: the opposite transport direction, kept as a discrepancy probe."""
    return data.m0(data.wrap(np.asarray(x, float) - np.asarray(t, float)))


def linear_v(data: LinearCaseData, x, t):
    """``u_x`` in closed form: ``u0'(x - t) + (g(m0(x+t)) - g(m0(x-t))) / 2``."""
    x = np.asarray(x, float)
    t = np.asarray(t, float)
    return data.u0_prime(data.wrap(x - t)) + 0.5 * (data.g_of_m0(x + t) - data.g_of_m0(x - t))


def linear_residuals(data: LinearCaseData, x: float, t: float, h: float = 1e-4,
                     m_func: Callable | None = None):
    """Central-difference residuals of ``u_t + u_x - g(m)`` and ``m_t - m_x``.

    ``m_func(data, x, t)`` replaces the density formula; pass
    :func:`linear_m_reversed` to see the first residual fail to vanish.
    """
    if not 0 < h <= 1e-3:
        raise ValueError("h must lie in (0, 1e-3]")
    if t < h:
        raise ValueError("t must be at least h so the time stencil stays in t >= 0")
    m_func = m_func or linear_m
    u = lambda a, b: linear_u(data, a, b)  # noqa: E731
    mm = lambda a, b: float(m_func(data, a, b))  # noqa: E731
    u_t = (u(x, t + h) - u(x, t - h)) / (2 * h)
    u_x = (u(x + h, t) - u(x - h, t)) / (2 * h)
    m_t = (mm(x, t + h) - mm(x, t - h)) / (2 * h)
    m_x = (mm(x + h, t) - mm(x - h, t)) / (2 * h)
    g = float(data.model.g(mm(x, t)))
    return u_t + u_x - g, m_t - m_x


def dalembert_check(u_values, grid, dt: float) -> float:
    """Max interior centered-difference residual of ``u_tt - u_xx``.

    ``u_values[n, j]`` is sampled at time ``n * dt`` and node ``j``; ``grid``
    is a :class:`~ffmfg.core.PeriodicGrid` or the spatial spacing itself.
    """
    u = np.asarray(u_values, dtype=float)
    if u.ndim != 2 or min(u.shape) < 3:
        raise ValueError(f"need a space-time lattice of at least 3x3, got shape {u.shape}")
    dx = float(getattr(grid, "dx", grid))
    c = u[1:-1, 1:-1]
    u_tt = (u[2:, 1:-1] - 2.0 * c + u[:-2, 1:-1]) / dt**2
    u_xx = (u[1:-1, 2:] - 2.0 * c + u[1:-1, :-2]) / dx**2
    return float(np.max(np.abs(u_tt - u_xx)))
