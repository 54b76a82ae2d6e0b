import numpy as np
import pytest

from kdv5lab.cutoffs import ContractViolation
from kdv5lab.models import catalog, eval_rhs
from kdv5lab.solver import (
    BlowUpError,
    SolverConfig,
    kdv_soliton,
    linear_exact,
    reflect,
    simulate,
    step,
)
from kdv5lab.spectral import (
    Field,
    Grid,
    band_limited_random,
    derivative,
    from_function,
    sobolev_norm,
)


def test_solver_config_validation():
    with pytest.raises(ContractViolation):
        SolverConfig(dt=-1e-3, t_end=1.0)
    with pytest.raises(ContractViolation):
        SolverConfig(dt=1e-3, t_end=1.0, scheme="RK45")
    with pytest.raises(ContractViolation):
        SolverConfig(dt=3e-4, t_end=1.0)  # not an integer number of steps
    with pytest.raises(ContractViolation):
        SolverConfig(dt=1e-3, t_end=1.0, stride=7)


def test_linear_flow_matches_exact_solution():
    g = Grid(20.0, 256)
    u0 = band_limited_random(g, 20, seed=0, amplitude=1.0)
    model = catalog("general_c", 0.0, 0.0, 0.0)  # u_t = u_xxxxx
    cfg = SolverConfig(dt=1e-3, t_end=0.5, scheme="ETDRK4")
    traj = simulate(model, u0, cfg)
    exact = linear_exact(u0, 0.5, a5=1.0)
    err = np.max(np.abs(traj.final.samples - exact.samples))
    assert err <= 1e-12


def test_step_consistent_with_simulate():
    g = Grid(20.0, 128)
    u0 = band_limited_random(g, 10, seed=2, amplitude=0.2)
    model = catalog("benney")
    cfg = SolverConfig(dt=1e-4, t_end=3e-4, stride=1)
    traj = simulate(model, u0, cfg)
    u = u0
    for _ in range(3):
        u = step(u, model, SolverConfig(dt=1e-4, t_end=1e-4))
    np.testing.assert_allclose(u.samples, traj.final.samples, atol=1e-13)


def test_soliton_ansatz_residual():
    # u = 3c sech^2(sqrt(c)(x - x0)/2) makes u_t + u_xxx + u u_x = 0,
    # i.e. the right-hand side must equal -c u_x
    g = Grid(40.0, 1024)
    u = kdv_soliton(g, c=4.0, x0=20.0)
    rhs = eval_rhs(catalog("kdv"), u, dealias="pad").samples
    want = -4.0 * derivative(u, 1).samples
    assert np.max(np.abs(rhs - want)) <= 1e-7 * np.max(np.abs(want))


def test_soliton_transit():
    g = Grid(40.0, 1024)
    u0 = kdv_soliton(g, c=4.0, x0=16.0)
    cfg = SolverConfig(dt=2.5e-4, t_end=0.25, scheme="ETDRK4")
    traj = simulate(catalog("kdv"), u0, cfg)
    exact = kdv_soliton(g, c=4.0, x0=16.0 + 4.0 * 0.25)
    err = np.max(np.abs(traj.final.samples - exact.samples))
    assert err <= 1e-6


def test_schemes_cross_check():
    g = Grid(20.0, 256)
    u0 = band_limited_random(g, 15, seed=3, amplitude=0.2)
    model = catalog("kdv5")
    outs = {}
    for scheme in ("ETDRK4", "IFRK4"):
        cfg = SolverConfig(dt=2e-5, t_end=2e-3, scheme=scheme)
        outs[scheme] = simulate(model, u0, cfg).final.samples
    err = np.max(np.abs(outs["ETDRK4"] - outs["IFRK4"]))
    assert err <= 1e-4


def test_reversibility_under_reflection():
    # for u_t = u5 + N(u) with N odd under x -> -x, reflecting, evolving,
    # reflecting and evolving again returns the initial data
    g = Grid(20.0, 256)
    u0 = band_limited_random(g, 15, seed=4, amplitude=0.2)
    model = catalog("kdv5")
    cfg = SolverConfig(dt=1e-5, t_end=1e-3)
    fwd = simulate(model, u0, cfg).final
    back = simulate(model, reflect(fwd), cfg).final
    err = np.max(np.abs(reflect(back).samples - u0.samples))
    assert err <= 1e-5


def test_blowup_raises_with_last_good_time():
    # example_xx (u_t = u5 + u u_xx) with large rough data blows up fast
    g = Grid(10.0, 256)
    u0 = band_limited_random(g, 60, seed=0, amplitude=50.0)
    cfg = SolverConfig(dt=1e-3, t_end=1.0, scheme="IFRK4", stride=10)
    with pytest.raises(BlowUpError) as exc:
        simulate(catalog("example_xx"), u0, cfg)
    assert 0.0 <= exc.value.t_last < 1.0


def test_observers_are_recorded():
    g = Grid(20.0, 128)
    u0 = band_limited_random(g, 10, seed=5, amplitude=0.1)

    def l2(t, u):
        return sobolev_norm(u, 0)

    cfg = SolverConfig(dt=1e-4, t_end=1e-3, stride=5)
    traj = simulate(catalog("benney"), u0, cfg, observers=[l2])
    assert traj.times == pytest.approx([0.0, 5e-4, 1e-3])
    assert len(traj.observations["l2"]) == 3


def test_mass_and_l2_conserved_short_run():
    g = Grid(20.0, 512)
    u0 = band_limited_random(g, 20, seed=5, amplitude=0.2)
    cfg = SolverConfig(dt=1e-5, t_end=1e-3, stride=100)
    traj = simulate(catalog("kdv5"), u0, cfg)
    l2_0 = sobolev_norm(u0, 0)
    l2_T = sobolev_norm(traj.final, 0)
    assert abs(l2_T - l2_0) <= 1e-6 * l2_0
    mass0 = np.sum(u0.samples) * g.h
    massT = np.sum(traj.final.samples) * g.h
    assert abs(massT - mass0) <= 1e-12
