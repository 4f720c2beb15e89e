"""Refinement studies: solver against the exact linear-case oracle, self-convergence,
and the nonlinear-wave consistency of the p-system."""

from __future__ import annotations

import math

import numpy as np

from .core import SimConfig, StateField, make_grid
from .diagnostics import reconstruct_potential, wave_residual_nonlinear
from .exact import LinearCaseData, linear_m, linear_v
from .hyperbolic import HyperbolicScheme, evolve
from .models import PSYSTEM


def observed_orders(n_cells, errors) -> list[float]:
    """``log(e_k / e_{k+1}) / log(n_{k+1} / n_k)``; NaN for the first rung."""
    out = [math.nan]
    for (n0, e0), (n1, e1) in zip(zip(n_cells, errors), zip(n_cells[1:], errors[1:])):
        out.append(math.log(e0 / e1) / math.log(n1 / n0) if e0 > 0 and e1 > 0 else math.nan)
    return out


def linear_errors(data: LinearCaseData, n_cells: int, t_end: float, cfl: float = 0.5):
    """L1 and max errors of the finite-volume solution against the closed form at ``t_end``.

    Both components count: ``L1 = dx * sum(|v - v_exact| + |m - m_exact|)``.
    """
    grid = make_grid(n_cells, data.length)
    config = SimConfig(data.model, grid, t_end, v0=data.u0_prime, m0=data.m0, cfl=cfl)
    final = evolve(config, HyperbolicScheme(cfl)).final
    x = grid.centers
    ev = np.abs(final.v - linear_v(data, x, t_end))
    em = np.abs(final.m - linear_m(data, x, t_end))
    return grid.dx * float(np.sum(ev + em)), float(max(ev.max(), em.max()))


def convergence_study(data: LinearCaseData, ladder=(64, 128, 256), t_end: float = 0.25,
                      cfl: float = 0.5) -> list[dict]:
    rows = []
    for n in ladder:
        l1, linf = linear_errors(data, n, t_end, cfl)
        rows.append({"n_cells": int(n), "l1_error": l1, "linf_error": linf})
    for row, order in zip(rows, observed_orders(list(ladder), [r["l1_error"] for r in rows])):
        row["observed_order"] = order
    return rows


def restrict(state: StateField) -> tuple[np.ndarray, np.ndarray]:
    """Average pairs of cells: the fine state expressed on the grid with half the cells."""
    if state.grid.n_cells % 2:
        raise ValueError("restriction needs an even number of cells")
    return state.v.reshape(-1, 2).mean(axis=1), state.m.reshape(-1, 2).mean(axis=1)


def self_convergence(config_for, ladder) -> tuple[list[float], list[float]]:
    """L1 differences between successive rungs of a doubling ladder, and their orders.

    ``config_for(n)`` returns the :class:`SimConfig` to run on ``n`` cells.
    """
    finals = [evolve(config_for(n)).final for n in ladder]
    diffs = []
    for coarse, fine in zip(finals, finals[1:]):
        if fine.grid.n_cells != 2 * coarse.grid.n_cells:
            raise ValueError("ladder must double at every rung")
        fv, fm = restrict(fine)
        diffs.append(coarse.grid.dx * float(np.sum(np.abs(coarse.v - fv) + np.abs(coarse.m - fm))))
    return diffs, observed_orders(list(ladder[:-1]), diffs)[1:]


def psystem_wave_residuals(v0, w0, ladder=(64, 128, 256, 512), t_end: float = 0.5,
                           stride: float = 4.0) -> tuple[list[float], list[float]]:
    """Nonlinear-wave residual of ``u`` rebuilt from p-system runs, per rung.

    Snapshots are taken every ``stride * dx`` so the space-time lattice is
    refined in both directions together.
    """
    residuals = []
    for n in ladder:
        grid = make_grid(n)
        dt = stride * grid.dx
        config = SimConfig(PSYSTEM, grid, t_end, v0=v0, m0=w0, snapshot_interval=dt)
        u = reconstruct_potential(evolve(config))
        residuals.append(wave_residual_nonlinear(u, grid.dx, dt))
    return residuals, observed_orders(list(ladder), residuals)[1:]
