import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kdv5lab.cutoffs import ContractViolation, CutoffSpec
from kdv5lab.spectral import (
    Field,
    Grid,
    SupportViolationError,
    WeightFunction,
    band_limited_random,
    derivative,
    export_csv,
    from_function,
    integrate,
    load_field,
    save_field,
    sobolev_norm,
    weighted_integral,
)


def _cos_field(L=2.0 * np.pi, N=128):
    g = Grid(L, N)
    return from_function(g, np.cos)


def test_grid_validation():
    with pytest.raises(ContractViolation):
        Grid(10.0, 127)
    with pytest.raises(ContractViolation):
        Grid(-1.0, 128)
    with pytest.raises(ContractViolation):
        Field(Grid(10.0, 16), np.zeros(17))
    with pytest.raises(ContractViolation):
        Field(Grid(10.0, 16), np.full(16, np.nan))


def test_cos_sobolev_norms():
    u = _cos_field()
    assert sobolev_norm(u, 0) == pytest.approx(np.sqrt(np.pi), rel=1e-12)
    assert sobolev_norm(u, 1) == pytest.approx(np.sqrt(2.0 * np.pi), rel=1e-12)


def test_derivative_exact_on_trig():
    g = Grid(2.0 * np.pi, 128)
    u = from_function(g, lambda x: np.sin(3.0 * x))
    for order, f in ((1, lambda x: 3.0 * np.cos(3.0 * x)),
                     (2, lambda x: -9.0 * np.sin(3.0 * x)),
                     (5, lambda x: 243.0 * np.cos(3.0 * x))):
        got = derivative(u, order).samples
        # roundoff in empty modes is amplified by k^order, up to ~64^5 eps
        np.testing.assert_allclose(got, f(g.x), atol=1e-7)
    with pytest.raises(ContractViolation):
        derivative(u, 7)


def test_integrate_periodic_exactness():
    g = Grid(5.0, 64)
    u = from_function(g, lambda x: 2.0 + np.sin(2.0 * np.pi * x / 5.0))
    assert integrate(u) == pytest.approx(10.0, rel=1e-13)


def test_weighted_integral_constant_against_ramp_area():
    # integral of chi(.; 1, 1) over [0, 10] = 0.5 (ramp) + 8 (plateau) = 8.5
    g = Grid(10.0, 512)
    one = from_function(g, lambda x: np.ones_like(x))
    val = weighted_integral(one, CutoffSpec("plain", 0, 1.0, 1.0))
    assert val == pytest.approx(8.5, rel=1e-10)


def test_weighted_integral_support_violation():
    g = Grid(10.0, 64)
    one = from_function(g, lambda x: np.ones_like(x))
    spec = CutoffSpec("plain", 0, 1.0, 1.0)
    with pytest.raises(SupportViolationError):
        weighted_integral(one, spec, shift=1.0)   # ramp foot hits x = 0
    with pytest.raises(SupportViolationError):
        weighted_integral(one, spec, shift=-8.5)  # ramp end hits x = L


def test_weighted_integral_translation_covariance():
    # chi(x + s; eps, b) == chi(x; eps - s, b), so shifting via the shift
    # argument must agree with shifting the ramp location in the CutoffSpec.
    g = Grid(40.0, 512)
    u = band_limited_random(g, 10, seed=3, amplitude=1.0)
    s = 2.5
    for order in (0, 1, 3):
        lhs = weighted_integral(u, CutoffSpec("plain", 0, 10.0, 5.0),
                                shift=s, order=order)
        rhs = weighted_integral(u, CutoffSpec("plain", 0, 10.0 - s, 5.0),
                                order=order)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_weight_function_wrappers():
    with pytest.raises(ContractViolation):
        WeightFunction()
    w = WeightFunction(func=lambda x, order: np.ones_like(x) * (order == 0))
    g = Grid(10.0, 64)
    u = from_function(g, lambda x: np.ones_like(x))
    assert weighted_integral(u, w) == pytest.approx(10.0, rel=1e-12)


def test_band_limited_random_amplitude_and_determinism():
    g = Grid(20.0, 256)
    u1 = band_limited_random(g, 40, seed=7, amplitude=0.3)
    u2 = band_limited_random(g, 40, seed=7, amplitude=0.3)
    assert np.max(np.abs(u1.samples)) == pytest.approx(0.3, rel=1e-14)
    np.testing.assert_array_equal(u1.samples, u2.samples)
    assert abs(integrate(u1)) < 1e-12
    with pytest.raises(ContractViolation):
        band_limited_random(g, 120, seed=0)


def test_save_load_roundtrip(tmp_path):
    g = Grid(20.0, 128)
    u = band_limited_random(g, 12, seed=1)
    base = str(tmp_path / "snap")
    save_field(u, base, t=0.25)
    v, t = load_field(base)
    assert t == 0.25 and v.grid == g
    np.testing.assert_array_equal(v.samples, u.samples)


def test_export_csv(tmp_path):
    g = Grid(4.0, 8)
    u = from_function(g, lambda x: x * 0.5)
    path = tmp_path / "u.csv"
    export_csv(u, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "x,u"
    assert len(lines) == 9
    x0, u0 = lines[1].split(",")
    assert float(x0) == 0.0 and float(u0) == 0.0


@given(st.integers(min_value=0, max_value=10_000_000))
@settings(max_examples=30, deadline=None)
def test_parseval_matches_grid_sum(seed):
    g = Grid(15.0, 128)
    u = band_limited_random(g, 20, seed=seed, amplitude=1.0)
    l2_grid = np.sqrt(integrate(Field(g, u.samples ** 2)))
    assert sobolev_norm(u, 0) == pytest.approx(l2_grid, rel=1e-10)


@given(st.floats(min_value=0.5, max_value=4.0),
       st.floats(min_value=0.5, max_value=4.0))
@settings(max_examples=30, deadline=None)
def test_sobolev_norm_monotone_in_s(s1, s2):
    u = band_limited_random(Grid(10.0, 128), 15, seed=5)
    lo, hi = sorted((s1, s2))
    assert sobolev_norm(u, lo) <= sobolev_norm(u, hi) * (1.0 + 1e-12)
