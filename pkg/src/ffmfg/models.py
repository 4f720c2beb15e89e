"""Flux functions and eigenstructure of the one-dimensional forward-forward systems.

Three systems are supported, all written as ``U_t + F(U)_x = 0``:

* quadratic Hamiltonian with quadratic coupling, ``U = (v, m)``::

      F(v, m) = (v**2/2 - m**2/2, -v*m)

* the p-system of nonlinear elastodynamics, ``U = (v, w)``::

      F(v, w) = (-w, -sigma(v)),   sigma(z) = z + z**3/3

* linear Hamiltonian ``H(p) = p`` with coupling ``g``, ``U = (v, m)``::

      F(v, m) = (v - g(m), -m)

Every scalar operation here also accepts numpy arrays and broadcasts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class ModelKind(enum.Enum):
    QUADRATIC_QUADRATIC = "qq"
    PSYSTEM = "psystem"
    LINEAR_EXACT = "linear"


COUPLINGS = {
    "identity": (lambda m: m, lambda m: np.ones_like(m)),
    "logarithm": (np.log, lambda m: 1.0 / m),
    "half-square": (lambda m: 0.5 * m * m, lambda m: m),
}


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind = ModelKind.QUADRATIC_QUADRATIC
    coupling: str = "identity"

    def __post_init__(self):
        if not isinstance(self.kind, ModelKind):
            object.__setattr__(self, "kind", ModelKind(self.kind))
        aliases = {"log": "logarithm", "id": "identity", "halfsquare": "half-square"}
        object.__setattr__(self, "coupling", aliases.get(self.coupling, self.coupling))
        if self.coupling not in COUPLINGS:
            raise ValueError(f"unknown coupling {self.coupling!r}; choose from {sorted(COUPLINGS)}")

    @property
    def needs_positive_density(self) -> bool:
        return self.kind is not ModelKind.PSYSTEM

    def g(self, m):
        return COUPLINGS[self.coupling][0](m)

    def dg(self, m):
        return COUPLINGS[self.coupling][1](m)


QQ = ModelSpec(ModelKind.QUADRATIC_QUADRATIC)
PSYSTEM = ModelSpec(ModelKind.PSYSTEM)


@dataclass(frozen=True)
class EigenPair:
    lambda1: float
    lambda2: float
    r1: tuple
    r2: tuple


def check_density(m) -> None:
    m = np.asarray(m)
    if not np.all(m > 0):
        raise ValueError(f"density must be strictly positive, got min(m) = {np.min(m)!r}")


def _speed(v, m):
    return np.hypot(v, m)


def _s_minus_v(v, m, s):
    # s - v without cancellation for v > 0
    return np.where(v > 0, m * m / (s + np.abs(v)), s - v)


def _s_plus_v(v, m, s):
    # s + v without cancellation for v < 0
    return np.where(v < 0, m * m / (s + np.abs(v)), s + v)


def flux_qq(v, m):
    check_density(m)
    return 0.5 * v * v - 0.5 * m * m, -v * m


def jacobian_qq(v, m) -> np.ndarray:
    check_density(m)
    v = np.asarray(v, dtype=float)
    m = np.asarray(m, dtype=float)
    return np.array([[v, -m], [-m, -v]])


def eigen_qq(v, m) -> EigenPair:
    """Eigenvalues ``-s, s`` with ``s = sqrt(v**2 + m**2)`` and unnormalized eigenvectors.

    ``r1 = (s - v, m)`` and ``r2 = (s + v, -m)``.  The differences are
    evaluated in the cancellation-free form ``m**2 / (s + |v|)`` where needed.
    """
    check_density(m)
    s = _speed(v, m)
    r1 = (_s_minus_v(v, m, s), m)
    r2 = (_s_plus_v(v, m, s), -m)
    return EigenPair(-s, s, r1, r2)


def gnl_indicators(v, m):
    """Genuine-nonlinearity indicators of the two characteristic fields.

    Returns::

        ((-m**2 + v*(v - s)) / (m*s),  (m**2 - v*(v + s)) / (m*s))

    These equal ``grad(lambda_1).r_1 / m`` and ``-grad(lambda_2).r_2 / m``; the
    zero sets are those of the directional derivatives.
    """
    check_density(m)
    s = _speed(v, m)
    den = m * s
    return (-m * m - v * _s_minus_v(v, m, s)) / den, (m * m - v * _s_plus_v(v, m, s)) / den


def singular_residual(v, m):
    """``m**2 - 3 v**2``, zero exactly where genuine nonlinearity fails."""
    return m * m - 3.0 * v * v


def sigma(z):
    return z + z**3 / 3.0


def flux_psystem(v, w):
    return -np.asarray(w, dtype=float), -sigma(np.asarray(v, dtype=float))


def psystem_speeds(v):
    c = np.sqrt(1.0 + np.asarray(v, dtype=float) ** 2)
    return -c, c


def flux_linear(v, m, model: ModelSpec):
    check_density(m)
    return v - model.g(m), -np.asarray(m, dtype=float)


def flux(model: ModelSpec, v, m):
    """Physical flux of ``model`` evaluated componentwise."""
    if model.kind is ModelKind.QUADRATIC_QUADRATIC:
        return flux_qq(v, m)
    if model.kind is ModelKind.PSYSTEM:
        return flux_psystem(v, m)
    return flux_linear(v, m, model)


def spectral_radius(model: ModelSpec, v, m):
    """Largest characteristic speed in absolute value."""
    if model.kind is ModelKind.QUADRATIC_QUADRATIC:
        return _speed(v, m)
    if model.kind is ModelKind.PSYSTEM:
        return np.sqrt(1.0 + np.asarray(v, dtype=float) ** 2)
    return np.ones_like(np.asarray(v, dtype=float))


def jacobian(model: ModelSpec, v, m) -> np.ndarray:
    if model.kind is ModelKind.QUADRATIC_QUADRATIC:
        return jacobian_qq(v, m)
    v = np.asarray(v, dtype=float)
    m = np.asarray(m, dtype=float)
    zero, one = np.zeros_like(v), np.ones_like(v)
    if model.kind is ModelKind.PSYSTEM:
        return np.array([[zero, -one], [-(1.0 + v * v), zero]])
    check_density(m)
    return np.array([[one, -model.dg(m)], [zero, -one]])
