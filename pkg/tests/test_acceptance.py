"""Acceptance gate: one test per release criterion.

Each test prints a single PASS/FAIL line via pytest -v and enforces the
pinned tolerances and runtime budgets.
"""

import collections
import json
import time
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from kdv5lab.cli import identity_rows, main
from kdv5lab.cutoffs import (
    CutoffSpec,
    certify_inequalities,
    rho,
    rho_exact,
    rho_ratio_closed,
)
from kdv5lab.experiments import (
    bootstrap_schedule,
    nu_degree,
    run_decay,
    run_propagation,
)
from kdv5lab.functionals import (
    check_dyadic_decay,
    check_energy_lemma,
    check_linfty_trick,
    check_sob2,
)
from kdv5lab.models import catalog, eval_rhs, general_c
from kdv5lab.solver import SolverConfig, kdv_soliton, linear_exact, simulate
from kdv5lab.spectral import (
    Field,
    Grid,
    WeightFunction,
    band_limited_random,
    derivative,
    from_function,
    integrate,
    sobolev_norm,
)


def _golden():
    path = resources.files("kdv5lab") / "golden" / "references.json"
    return json.loads(path.read_text())


def test_criterion_1_cutoff_certification():
    t0 = time.monotonic()

    # rho endpoint conditions to 1e-12
    assert abs(rho(np.array([0.0]), 0)[0]) <= 1e-12
    assert abs(rho(np.array([1.0]), 0)[0] - 1.0) <= 1e-12
    for order in range(1, 6):
        assert abs(rho(np.array([0.0]), order)[0]) <= 1e-12
        assert abs(rho(np.array([1.0]), order)[0]) <= 1e-12

    # ratio closed form to relative 1e-10 at 10^3 points (floats), plus the
    # exact rational identity at the same abscissas
    xs = np.linspace(1e-3, 1.0 - 1e-3, 1000)
    direct = rho(xs, 3) ** 2 / rho(xs, 1)
    closed = rho_ratio_closed(xs)
    assert np.max(np.abs(direct - closed) / np.abs(closed)) <= 1e-10
    x = Fraction(1, 3)
    assert rho_exact(x, 3) ** 2 / rho_exact(x, 1) == \
        Fraction(-277200) * x * (x - 1) * (2 - 9 * x + 9 * x ** 2) ** 2

    # the nine inequalities at 10^4 points/unit for all pinned (eps, b, n)
    ratio_sups = {}
    for eps, b in ((0.5, 1.0), (1.0, 1.0), (1.0, 2.0)):
        for n in (1, 2, 3, 5):
            reports = certify_inequalities(
                CutoffSpec("weighted", n, eps, b), resolution=10_000)
            assert len(reports) == 9
            bad = [r.inequality for r in reports if not r.passed]
            assert not bad, f"(eps={eps}, b={b}, n={n}) failed {bad}"
            ratio_sups[(eps, b)] = next(
                r.sup_value for r in reports if r.inequality == "cutoff_ratio")

    # sup of (chi''')^2 / chi' is independent of eps (and scales as b^-5)
    assert ratio_sups[(0.5, 1.0)] == pytest.approx(
        ratio_sups[(1.0, 1.0)], rel=1e-6)
    assert ratio_sups[(1.0, 2.0)] * 2.0 ** 5 == pytest.approx(
        ratio_sups[(1.0, 1.0)], rel=1e-6)

    assert time.monotonic() - t0 < 5.0


def test_criterion_2_identity_suite():
    t0 = time.monotonic()

    worst = {256: collections.defaultdict(float),
             512: collections.defaultdict(float)}
    for N in (256, 512):
        for rid, seed, nu, res in identity_rows(seeds=20, N=N):
            worst[N][rid] = max(worst[N][rid], res.rel_residual)
    overall = max(worst[256].values())
    assert overall <= 1e-8, f"worst N=256 residual {overall:.3e}"
    for rid, w256 in worst[256].items():
        assert w256 >= 4.0 * worst[512][rid], \
            f"{rid}: {w256:.3e} -> {worst[512][rid]:.3e} under N doubling"

    # manufactured energy-inequality cases: u_t - u_xxxxx = F by construction
    g = Grid(40.0, 512)
    k = 2.0 * np.pi / 40.0

    def u_of_t(t):
        return from_function(g, lambda x: np.exp(-t) * np.cos(k * x))

    def F_of_t(t):
        return from_function(
            g, lambda x: -np.exp(-t) * np.cos(k * x)
                         - k ** 5 * np.exp(-t) * np.sin(k * x))

    rep = check_energy_lemma(u_of_t, F_of_t, CutoffSpec("plain", 0, 8.0, 10.0),
                             times=np.linspace(0.0, 1.0, 5), nu=1.0)
    assert rep.passed

    one = WeightFunction(func=lambda x, order: np.ones_like(x) * (order == 0),
                         nondecreasing=True)
    rep = check_energy_lemma(u_of_t, F_of_t, one, times=np.linspace(0, 1, 5))
    assert rep.passed and abs(rep.worst_slack) <= 1e-10

    assert time.monotonic() - t0 < 30.0


def test_criterion_3_solver_correctness():
    t0 = time.monotonic()

    # linear flow vs exact propagator at t = 1
    g = Grid(20.0, 256)
    u0 = band_limited_random(g, 20, seed=0, amplitude=1.0)
    traj = simulate(general_c(0.0, 0.0, 0.0), u0,
                    SolverConfig(dt=1e-3, t_end=1.0, stride=1000))
    exact = linear_exact(u0, 1.0, a5=1.0)
    assert np.max(np.abs(traj.final.samples - exact.samples)) <= 1e-10

    # soliton transit, L = 40, N = 1024, t_end = 1
    g = Grid(40.0, 1024)
    c = 4.0
    u0 = kdv_soliton(g, c=c, x0=16.0)
    traj = simulate(catalog("kdv"), u0,
                    SolverConfig(dt=2.5e-4, t_end=1.0, stride=4000))
    exact = kdv_soliton(g, c=c, x0=16.0 + c * 1.0)
    assert np.max(np.abs(traj.final.samples - exact.samples)) <= 1e-4

    # observed temporal order of ETDRK4 in the classical (non-stiff) regime
    g = Grid(40.0, 64)
    u0 = band_limited_random(g, 4, seed=1, amplitude=2.0)
    model = catalog("kdv5")

    def final_at(dt):
        return simulate(model, u0, SolverConfig(
            dt=dt, t_end=0.1, stride=int(round(0.1 / dt)))).final.samples

    ref = final_at(1.25e-5)
    errs = [np.max(np.abs(final_at(dt) - ref))
            for dt in (1e-3, 5e-4, 2.5e-4)]
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(3.5 <= p <= 4.5 for p in orders), f"orders {orders}"

    # invariant drift over t_end = 0.1 on the Hamiltonian flow
    g = Grid(40.0, 512)
    u0 = band_limited_random(g, 20, seed=5, amplitude=0.2)
    traj = simulate(catalog("kdv5"), u0,
                    SolverConfig(dt=1e-5, t_end=0.1, stride=10_000))
    l2_0, l2_T = sobolev_norm(u0, 0), sobolev_norm(traj.final, 0)
    assert abs(l2_T - l2_0) / l2_0 <= 1e-6
    assert abs(integrate(traj.final) - integrate(u0)) <= 1e-10

    # L^2 balance identity with random coefficients
    rng = np.random.default_rng(7)
    g = Grid(20.0, 512)
    u = band_limited_random(g, 20, seed=11, amplitude=0.3)
    ux, uxx = derivative(u, 1).samples, derivative(u, 2).samples
    for _ in range(3):
        c1, c2, c3 = rng.uniform(-5.0, 5.0, 3)
        rhs = eval_rhs(general_c(c1, c2, c3), u, dealias="pad")
        lhs = integrate(Field(g, u.samples * rhs.samples))
        want = (2.0 * c3 - c2) * integrate(Field(g, u.samples * ux * uxx))
        assert abs(lhs - want) <= 1e-10 * max(1.0, abs(want))

    assert time.monotonic() - t0 < 60.0


def test_criterion_4_structure_constants():
    assert [nu_degree(l) for l in range(1, 7)] == [1, 1, 2, 2, 4, 8]
    for l in (7, 10, 20):
        assert nu_degree(l) == 8 * (l - 5)
    sched = bootstrap_schedule(9)
    assert sched["pairs"] == [(2 * k, 9 - k) for k in range(10)]
    assert sched["final_l"] == 19


def test_criterion_5_propagation_and_decay_vs_golden():
    t0 = time.monotonic()
    golden = _golden()

    for key in ("propagation_nu0", "propagation_nu1"):
        ref = golden[key]
        rows, _ = run_propagation(dict(ref["config"]))
        sup = collections.defaultdict(lambda: float("-inf"))
        series = collections.defaultdict(list)
        for t, fid, v in rows:
            sup[fid] = max(sup[fid], v)
            series[fid].append(v)
        # windowed H^3 pinned to the golden sup within 1.05x
        gref = ref["sup"]["window_h3"]
        assert gref / 1.05 <= sup["window_h3"] <= 1.05 * gref, key
        # the global H^4 norm dwarfs what the window sees
        assert sup["global_h4"] >= 1e3 * sup["window_h3"], key
        # smoothing accumulators: finite and nondecreasing
        acc = series["smooth_l2_acc"]
        assert all(np.isfinite(acc)) and acc == sorted(acc), key

    ref = golden["decay"]
    rows, _ = run_decay(dict(ref["config"]))
    sup = collections.defaultdict(lambda: float("-inf"))
    for t, fid, v in rows:
        sup[fid] = max(sup[fid], v)
    for fid in ("xw_n2_m0", "xw_n2_m1", "xw_n2_m2", "cubic_n2"):
        gref = ref["sup"][fid]
        assert gref / 1.05 <= sup[fid] <= 1.05 * gref, fid

    assert time.monotonic() - t0 < 120.0  # < 60 s per experiment


def test_criterion_6_auxiliary_lemmas():
    # dyadic decay lemma: sharp family, zero function, violated hypothesis
    assert check_dyadic_decay(lambda x: 2.0 * x, 256.0, 2.0, 0.5).passed
    assert check_dyadic_decay(lambda x: np.zeros_like(x), 256.0, 2.0, 0.5).passed
    rep = check_dyadic_decay(lambda x: x ** 3, 256.0, 2.0, 0.5)
    assert not rep.hypothesis_ok and not rep.passed

    # two-variable Sobolev bound: constant (equality), linear, oscillatory
    assert check_sob2(lambda x, t: 3.0 + 0.0 * x, lambda x, t: 0.0 * x,
                      lambda x, t: 0.0 * x, lambda x, t: 0.0 * x,
                      L=2.0, T=1.5).passed
    assert check_sob2(lambda x, t: x, lambda x, t: np.ones_like(x),
                      lambda x, t: 0.0 * x, lambda x, t: 0.0 * x,
                      L=1.0, T=1.0).passed
    w = 2.0 * np.pi
    assert check_sob2(
        lambda x, t: np.sin(w * x) * np.sin(w * t),
        lambda x, t: w * np.cos(w * x) * np.sin(w * t),
        lambda x, t: w * np.sin(w * x) * np.cos(w * t),
        lambda x, t: w * w * np.cos(w * x) * np.cos(w * t),
        L=1.0, T=1.0).passed

    # triple-product bound constant over 50 random fields
    g = Grid(40.0, 512)
    psi = CutoffSpec("plain", 0, 1.0, 1.0)
    worst = 0.0
    for seed in range(50):
        u = band_limited_random(g, 12, seed=seed, amplitude=1.0)
        rep = check_linfty_trick(u, psi, 1, 2, 0)
        assert rep.passed
        worst = max(worst, rep.constant)
    assert worst <= 8.0


def test_criterion_7_reproducibility(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "data_id = gaussian\ngrid.L = 40.0\ngrid.N = 256\n"
        "solver.dt = 1e-4\nsolver.t_end = 1e-3\nsolver.stride = 5\n"
        "amplitude = 0.1\nwidth = 2.0\nseed = 3\n")
    digests = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        digests.append((manifest["config_digest"], manifest["output_digests"]))
        assert manifest["passes"]["completed"] is True
    assert digests[0] == digests[1]
    assert (tmp_path / "r1" / "report.csv").read_bytes() == \
        (tmp_path / "r2" / "report.csv").read_bytes()

    outs = []
    for name in ("i1", "i2"):
        out = tmp_path / f"{name}.csv"
        assert main(["check-identities", "--seeds", "3", "--N", "256",
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
