import numpy as np
import pytest

from ffmfg.core import PositivityError, SimConfig, StateField, make_grid
from ffmfg.diagnostics import conservation_drift
from ffmfg.hyperbolic import evolve
from ffmfg.models import PSYSTEM, QQ
from ffmfg.parabolic import (
    ViscousScheme,
    check_centered,
    diffuse,
    evolve_viscous,
    recenter,
    simulate,
    step_viscous,
)

from conftest import m_wave, v_wave


def test_scheme_validation():
    with pytest.raises(ValueError):
        ViscousScheme(diffusion_safety=0.6)
    with pytest.raises(ValueError):
        ViscousScheme(cfl=0)


def test_dt_bound_takes_the_minimum():
    scheme = ViscousScheme()
    v, m = np.zeros(100), np.ones(100)
    # advective 0.5 * 0.01 / 1, diffusive 0.25 * 1e-4 / eps
    assert scheme.max_dt(QQ, v, m, 0.01, 1e-3) == pytest.approx(0.005)
    assert scheme.max_dt(QQ, v, m, 0.01, 0.05) == pytest.approx(5e-4)


@pytest.mark.parametrize("eps", [1e-3, 0.05, 1.0])
def test_equilibrium_is_fixed(eps):
    grid = make_grid(64)
    state = StateField(grid, np.zeros(64), np.ones(64))
    dt = ViscousScheme().max_dt(QQ, state.v, state.m, grid.dx, eps)
    out = step_viscous(QQ, ViscousScheme(), state, eps, dt)
    np.testing.assert_array_equal(out.v, 0.0)
    np.testing.assert_array_equal(out.m, 1.0)


def test_step_preserves_means(rng):
    grid = make_grid(256)
    state = StateField(grid, rng.uniform(-0.5, 0.5, 256), rng.uniform(0.5, 1.5, 256))
    scheme = ViscousScheme()
    eps = 0.05
    for _ in range(20):
        dt = scheme.max_dt(QQ, state.v, state.m, grid.dx, eps)
        new = step_viscous(QQ, scheme, state, eps, dt)
        assert abs(new.v.mean() - state.v.mean()) <= 1e-13 * np.abs(state.v).mean()
        assert abs(new.m.mean() - state.m.mean()) <= 1e-13 * state.m.mean()
        state = new


def test_step_rejects_oversize_dt():
    grid = make_grid(64)
    state = StateField(grid, np.zeros(64), np.ones(64))
    limit = ViscousScheme().max_dt(QQ, state.v, state.m, grid.dx, 0.05)
    with pytest.raises(ValueError, match="stability bound"):
        step_viscous(QQ, ViscousScheme(), state, 0.05, 1.01 * limit)
    with pytest.raises(ValueError):
        step_viscous(QQ, ViscousScheme(), state, 0.0, limit)


def test_heat_decay_rate():
    eps, t_end, n = 0.05, 0.1, 256
    grid = make_grid(n)
    u0 = np.sin(2 * np.pi * grid.centers)
    dt = 0.25 * grid.dx**2 / eps
    steps = int(np.ceil(t_end / dt))
    dt = t_end / steps
    u = u0
    for _ in range(steps):
        u = diffuse(u, eps, dt, grid.dx)
    expected = np.exp(-4 * np.pi**2 * eps * t_end) * u0
    assert np.max(np.abs(u - expected)) <= 0.02 * np.max(np.abs(expected))


def test_recenter_examples():
    grid = make_grid(4)
    out = recenter(StateField(grid, np.full(4, 5.0), np.full(4, 2.0)))
    np.testing.assert_array_equal(out.v, 0.0)
    np.testing.assert_array_equal(out.m, 1.0)

    grid2 = make_grid(2)
    out = recenter(StateField(grid2, np.array([1.0, 3.0]), np.array([1.0, 3.0])))
    np.testing.assert_array_equal(out.v, [-1.0, 1.0])
    np.testing.assert_array_equal(out.m, [0.5, 1.5])


def test_recenter_idempotent(rng):
    grid = make_grid(64)
    state = recenter(StateField(grid, rng.normal(size=64), rng.uniform(0.5, 2, 64)))
    again = recenter(state)
    np.testing.assert_allclose(again.v, state.v, atol=1e-15)
    np.testing.assert_allclose(again.m, state.m, rtol=1e-15)


def test_recenter_rejects_nonpositive_mean():
    grid = make_grid(2)
    with pytest.raises(ValueError):
        recenter(StateField(grid, np.zeros(2), np.array([-1.0, 0.5])))


def test_mean_constraint_enforced():
    config = SimConfig(QQ, make_grid(64), 0.1, v0=lambda x: 0.1 + v_wave(x), m0=m_wave, epsilon=0.05)
    with pytest.raises(ValueError, match="recenter"):
        evolve_viscous(config)
    with pytest.raises(ValueError):
        check_centered(config.initial_state())
    recentered = SimConfig(QQ, make_grid(64), 0.1, v0=lambda x: 0.1 + v_wave(x), m0=m_wave,
                           epsilon=0.05, recenter=True)
    traj = evolve_viscous(recentered)
    assert abs(traj.diagnostics[0].mean_v) <= 1e-15


def test_evolve_viscous_needs_epsilon():
    with pytest.raises(ValueError):
        evolve_viscous(SimConfig(QQ, make_grid(16), 1.0, v0=v_wave, m0=m_wave))


def test_equilibrium_trajectory():
    config = SimConfig(QQ, make_grid(64), 2.0, v0=lambda x: 0 * x, m0=lambda x: 1 + 0 * x,
                       epsilon=0.05, snapshot_interval=0.5)
    for rec in evolve_viscous(config).diagnostics:
        assert rec.l1_v == 0 and rec.l1_m == 0


@pytest.mark.parametrize("eps", [1e-4, 1e-3])
def test_vanishing_viscosity_consistency(eps):
    grid = make_grid(256)
    v = lambda x: 0.2 * np.sin(2 * np.pi * x)  # noqa: E731
    m = lambda x: 1 + 0.2 * np.cos(2 * np.pi * x)  # noqa: E731
    a = evolve(SimConfig(QQ, grid, 0.1, v0=v, m0=m)).final
    b = evolve_viscous(SimConfig(QQ, grid, 0.1, v0=v, m0=m, epsilon=eps)).final
    diff = grid.dx * np.sum(np.abs(a.v - b.v) + np.abs(a.m - b.m))
    # measured gap is about 0.93 * eps
    assert 0.5 * eps <= diff <= 2 * eps


def test_simulate_dispatch():
    inviscid = SimConfig(QQ, make_grid(32), 0.1, v0=v_wave, m0=m_wave)
    viscous = SimConfig(QQ, make_grid(32), 0.1, v0=v_wave, m0=m_wave, epsilon=0.01)
    np.testing.assert_array_equal(simulate(inviscid).final.v, evolve(inviscid).final.v)
    np.testing.assert_array_equal(simulate(viscous).final.v, evolve_viscous(viscous).final.v)


def test_simulate_psystem_skips_mean_constraint():
    config = SimConfig(PSYSTEM, make_grid(32), 0.1, v0=lambda x: 0.5 + v_wave(x),
                       m0=lambda x: 3 + 0 * x, epsilon=0.01, recenter=True)
    traj = simulate(config)
    assert traj.diagnostics[0].mean_v == pytest.approx(0.5)


def test_viscous_failure_reports_time(monkeypatch):
    import ffmfg.parabolic as par

    def draining(model, v, m, dx, kind):
        d2 = np.zeros_like(m)
        d2[3] = 10.0
        return np.zeros_like(v), d2

    monkeypatch.setattr(par, "flux_divergence", draining)
    config = SimConfig(QQ, make_grid(16), 1.0, v0=lambda x: 0 * x, m0=lambda x: 1 + 0 * x,
                       epsilon=1e-3)
    with pytest.raises(PositivityError) as info:
        evolve_viscous(config)
    assert info.value.cell in (2, 3, 4) and info.value.time < 0.2


def test_long_time_decay(long_viscous_run):
    final = long_viscous_run.diagnostics[-1]
    assert final.time == 50.0
    assert final.l1_v <= 1e-3 and final.l1_m <= 1e-3
    assert all(r.min_m > 0 for r in long_viscous_run.diagnostics)
    d_mass, d_mean_v = conservation_drift(long_viscous_run)
    assert d_mass <= 1e-12 and d_mean_v <= 1e-12
