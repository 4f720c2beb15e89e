"""Grids, discrete state fields, run configuration and trajectory containers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .models import ModelSpec


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform cell-centered grid on the torus ``[0, length)``."""

    n_cells: int
    length: float = 1.0

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ValueError(f"n_cells must be an integer >= 2, got {self.n_cells!r}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length!r}")
        object.__setattr__(self, "n_cells", int(self.n_cells))
        object.__setattr__(self, "length", float(self.length))

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return _frozen((np.arange(self.n_cells) + 0.5) * self.dx)

    @property
    def interfaces(self) -> np.ndarray:
        """Right interface of every cell, ``x_{i+1/2}``."""
        return _frozen((np.arange(self.n_cells) + 1.0) * self.dx)


def make_grid(n_cells: int, length: float = 1.0) -> PeriodicGrid:
    return PeriodicGrid(n_cells, length)


@dataclass(frozen=True)
class StateField:
    """Cell averages of the two evolved components at one instant.

    For the quadratic and linear models the components are ``(v, m)`` with
    ``v = u_x`` and ``m`` the density.  For the p-system the second slot
    holds ``w = u_t`` and carries no sign constraint.
    """

    grid: PeriodicGrid
    v: np.ndarray
    m: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        v = _frozen(self.v)
        m = _frozen(self.m)
        n = self.grid.n_cells
        if v.shape != (n,) or m.shape != (n,):
            raise ValueError(f"v and m must have {n} entries, got {v.shape} and {m.shape}")
        if not np.all(np.isfinite(v)) or not np.all(np.isfinite(m)):
            raise ValueError("state contains non-finite entries")
        if self.time < 0:
            raise ValueError("time must be nonnegative")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "time", float(self.time))

    @property
    def w(self) -> np.ndarray:
        """Alias of the second component, named as in the p-system."""
        return self.m

    @property
    def density_positive(self) -> bool:
        return bool(self.m.min() > 0)

    def stacked(self) -> np.ndarray:
        return np.stack([self.v, self.m])

    def replace(self, v=None, m=None, time=None) -> StateField:
        return StateField(
            self.grid,
            self.v if v is None else v,
            self.m if m is None else m,
            self.time if time is None else time,
        )


def sample_field(
    grid: PeriodicGrid,
    f_v: Callable[[np.ndarray], np.ndarray] | float,
    f_m: Callable[[np.ndarray], np.ndarray] | float,
    check_positive: bool = True,
) -> StateField:
    """Pointwise samples of ``f_v`` and ``f_m`` at the cell centers, at time 0.

    ``check_positive=False`` is for the p-system, whose second component is
    a velocity rather than a density.
    """
    x = grid.centers
    v = np.broadcast_to(f_v(x) if callable(f_v) else f_v, x.shape)
    m = np.broadcast_to(f_m(x) if callable(f_m) else f_m, x.shape)
    if check_positive and not np.all(m > 0):
        bad = int(np.argmax(~(m > 0)))
        raise ValueError(
            f"initial density must be strictly positive; m({x[bad]:.6g}) = {m[bad]:.6g}"
        )
    return StateField(grid, v, m, 0.0)


def cell_mean(grid: PeriodicGrid, values) -> float:
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n_cells,):
        raise ValueError(f"expected {grid.n_cells} values, got shape {values.shape}")
    return float(values.sum() / grid.n_cells)


def integrate(grid: PeriodicGrid, values) -> float:
    """Midpoint-rule integral over the torus of a piecewise-constant field."""
    return grid.length * cell_mean(grid, values)


@dataclass(frozen=True)
class SimConfig:
    model: ModelSpec
    grid: PeriodicGrid
    t_end: float
    v0: Callable[[np.ndarray], np.ndarray]
    m0: Callable[[np.ndarray], np.ndarray]
    cfl: float = 0.5
    epsilon: float = 0.0
    snapshot_interval: float | None = None
    u0: Callable[[np.ndarray], np.ndarray] | None = None
    seed: int = 0
    recenter: bool = False

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end!r}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon!r}")
        if self.snapshot_interval is None:
            object.__setattr__(self, "snapshot_interval", self.t_end)
        elif not self.snapshot_interval > 0:
            raise ValueError("snapshot_interval must be positive")

    @property
    def viscous(self) -> bool:
        return self.epsilon > 0

    def initial_state(self) -> StateField:
        return sample_field(self.grid, self.v0, self.m0, check_positive=self.model.needs_positive_density)

    def snapshot_times(self) -> np.ndarray:
        """Snapshot schedule ``0, h, 2h, ..., t_end`` with ``t_end`` always last."""
        n_full = int(np.floor(self.t_end / self.snapshot_interval * (1 + 1e-12)))
        times = [k * self.snapshot_interval for k in range(n_full + 1)]
        times = [t for t in times if t < self.t_end * (1 - 1e-12)]
        times.append(self.t_end)
        return np.array(times)


class PositivityError(RuntimeError):
    """The discrete density reached a non-positive value and the run was halted."""

    def __init__(self, time: float, cell: int, value: float, trajectory=None):
        super().__init__(
            f"density lost positivity at t = {time!r} in cell {cell}: m = {value!r}"
        )
        self.time = time
        self.cell = cell
        self.value = value
        self.trajectory = trajectory


@dataclass
class Trajectory:
    snapshots: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])

    @property
    def final(self) -> StateField:
        return self.snapshots[-1]

    def append(self, state: StateField, record) -> None:
        if self.snapshots and state.time <= self.snapshots[-1].time:
            raise ValueError("snapshot times must be strictly increasing")
        self.snapshots.append(state)
        self.diagnostics.append(record)
