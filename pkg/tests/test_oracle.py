import math
import warnings

import numpy as np
import pytest

from superint import model, oracle, spectra
from superint.errors import AccuracyWarning, DomainError

UNITS = model.Constants()


def test_harmonic_oscillator_line():
    prob = oracle.SL1D("line", q=lambda x: x * x, lower=-12, upper=12, n_points=1000)
    np.testing.assert_allclose(oracle.sl_eigs(prob, 3), [1, 3, 5], atol=1e-6)


def test_dirichlet_box():
    prob = oracle.SL1D("box", lower=0.0, upper=math.pi, n_points=400)
    np.testing.assert_allclose(oracle.sl_eigs(prob, 3), [1, 4, 9], atol=1e-8)


def test_hydrogen_s_waves():
    prob = oracle.SL1D("radial", q=lambda x: -2 / x, upper=200, mu_left=1.0, n_points=8000)
    np.testing.assert_allclose(oracle.sl_eigs(prob, 2), [-1, -0.25], atol=1e-5)


@pytest.mark.parametrize("prob", [
    oracle.SL1D("radial", q=lambda x: -2 / x, upper=60, mu_left=1.0, n_points=1500),
    oracle.SL1D("line", q=lambda x: x * x, lower=-10, upper=10, n_points=200),
    oracle.SL1D("radial", q=lambda x: x * x, upper=10, mu_left=1.7, n_points=300),
])
def test_grid_convergence_slope(prob):
    assert oracle.convergence_slope(prob, 1) == pytest.approx(2.0, abs=0.2)


def test_trig_problem_slope():
    assert oracle.convergence_slope(oracle.trig_problem(0.3, 0.6, 200), 1) == pytest.approx(2.0, abs=0.2)


def test_refinement_stability():
    # halving the grid (and with it the half-step offset at the singular end)
    prob = oracle.trig_problem(0.3, 0.6, 400)
    coarse = oracle.sl_eigs(prob, 3)
    fine = oracle.sl_eigs(oracle.SL1D("trig", mu_left=prob.mu_left, mu_right=prob.mu_right, n_points=800), 3)
    np.testing.assert_allclose(coarse, fine, atol=1e-6)


def test_angular_barrier_free():
    vals = oracle.oracle_angular(model.V1(0.5, 0.5), 3)
    np.testing.assert_allclose(vals, [4, 16, 36], rtol=1e-8)


def test_angular_free_rotor_shift():
    vals = oracle.oracle_angular(model.V4(0.0, gamma=1.0), 5)
    np.testing.assert_allclose(vals, [1, 2, 2, 5, 5], rtol=1e-6)


def test_angular_barriers():
    vals = oracle.oracle_angular(model.V3(0.3, 0.6), 4)
    want = [(2 * n + 0.3 + 0.6 + 1) ** 2 for n in range(4)]
    np.testing.assert_allclose(vals, want, rtol=1e-6)


def test_angular_minus_branch():
    vals = oracle.oracle_angular(model.V1(0.3, 0.8, "plus", "minus"), 3)
    want = [(2 * n + 0.3 - 0.8 + 1) ** 2 for n in range(3)]
    np.testing.assert_allclose(vals, want, rtol=1e-6)


def test_v1_oracle_spectrum():
    e = oracle.oracle_spectrum(model.V1(0.5, 0.5), "polar", UNITS, 3)
    np.testing.assert_allclose(e, [-1 / (2 * N * N) for N in (1.5, 2.5, 3.5)], rtol=1e-5)


def test_v3_oracle_spectrum():
    spec = model.V3(0.3, 0.6)
    e = oracle.oracle_spectrum(spec, "spherical", UNITS, 2)
    want = [lvl.energy for lvl in spectra.enumerate_levels(spec, "spherical", UNITS, 2)]
    np.testing.assert_allclose(e, want, rtol=1e-5)


def test_v2_oracle_spectrum():
    e = oracle.oracle_spectrum(model.V2(0.1, 0.1), "parabolic", UNITS, 1)
    w = spectra.v2_frequency(1, UNITS, 0.1, 0.1)
    assert e[0] == pytest.approx(-w * w / 2, rel=1e-4)


def test_units_scale():
    c = model.Constants(hbar=1.2, mass=0.9, alpha0=1.7)
    e = oracle.oracle_spectrum(model.V1(0.5, 0.5), "parabolic", c, 2)
    want = [-c.mass * c.alpha0 ** 2 / (2 * c.hbar ** 2 * N * N) for N in (1.5, 2.5)]
    np.testing.assert_allclose(e, want, rtol=1e-6)


def test_warning_on_bad_trend():
    # a jump in q off the grid breaks the h^2 error expansion
    prob = oracle.SL1D("box", q=lambda x: 20.0 * (x > 1.01234), lower=0, upper=3, n_points=64)
    with pytest.warns(AccuracyWarning):
        oracle.sl_eigs(prob, 4)


def test_no_warning_on_smooth_problem():
    with warnings.catch_warnings():
        warnings.simplefilter("error", AccuracyWarning)
        oracle.sl_eigs(oracle.SL1D("box", lower=0, upper=1, n_points=200), 3)


def test_problem_validation():
    with pytest.raises(DomainError):
        oracle.SL1D("cone")
    with pytest.raises(DomainError):
        oracle.SL1D("box", n_points=10)
    with pytest.raises(DomainError):
        oracle.SL1D("radial", upper=5.0)
    with pytest.raises(DomainError):
        oracle.barrier_exponent(-0.3)


def test_oracle_does_not_import_closed_forms():
    import ast
    import inspect
    tree = ast.parse(inspect.getsource(oracle))
    names = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            names.update(a.name for a in node.names)
            names.add(node.module or "")
        elif isinstance(node, ast.Import):
            names.update(a.name for a in node.names)
    assert not names & {"spectra", "wavefun", "specfun", "greens", "so21"}
