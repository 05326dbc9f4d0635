import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superint import model
from superint.errors import DomainError, SingularityError

UNITS = model.Constants()


def test_v1_barrier_free_value():
    assert model.potential_value(model.V1(0.5, 0.5), UNITS, (1.0, 0.0)) == pytest.approx(-1.0)


def test_v3_barrier_free_value():
    assert model.potential_value(model.V3(0.5, 0.5), UNITS, (0.0, 0.0, 2.0)) == pytest.approx(-0.5)


def test_v4_hartmann_value():
    assert model.potential_value(model.V4(0.0, gamma=1.0), UNITS, (1.0, 0.0, 0.0)) == pytest.approx(-0.5)


def test_v1_barrier_value():
    spec = model.V1(0.3, 0.6)
    x1, x2 = 0.4, 0.9
    rho = math.hypot(x1, x2)
    want = -1 / rho + ((0.09 - 0.25) / (rho + x1) + (0.36 - 0.25) / (rho - x1)) / (4 * rho)
    assert model.potential_value(spec, UNITS, (x1, x2)) == pytest.approx(want, rel=1e-14)


def test_singular_points():
    with pytest.raises(SingularityError):
        model.potential_value(model.V1(0.5, 0.5), UNITS, (0.0, 0.0))
    with pytest.raises(SingularityError):
        model.potential_value(model.V3(0.3, 0.5), UNITS, (0.0, 1.0, 1.0))
    with pytest.raises(SingularityError):
        model.potential_value(model.V4(0.2, gamma=1.0), UNITS, (0.0, 0.0, 1.0))


def test_parameter_validation():
    with pytest.raises(DomainError):
        model.Constants(hbar=0.0)
    with pytest.raises(DomainError):
        model.V1(1.5, 0.5, s1="minus")
    with pytest.raises(DomainError):
        model.V3(0.5, 0.5, s2="sideways")
    with pytest.raises(DomainError):
        model.V4(-0.1)
    with pytest.raises(DomainError):
        model.ContinuumLabels(p=0.0)
    with pytest.raises(DomainError):
        model.Parabolic2D(-1, 0)


def test_system_check():
    with pytest.raises(DomainError):
        model.qn_type(model.V2(0.1, 0.1), "polar")
    assert model.qn_type(model.V3(0.5, 0.5), "spherical") is model.Spherical3D


def test_ks_examples():
    np.testing.assert_allclose(model.ks_map((1, 0, 0, 0)), (0, 0, -1))
    np.testing.assert_allclose(model.ks_map((0, 0, 1, 0)), (0, 0, 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_ks_norm(u):
    x = model.ks_map(u)
    assert np.linalg.norm(x) == pytest.approx(sum(v * v for v in u), abs=1e-12)


def test_derived_scales():
    s = model.derived_scales(UNITS, -0.5)
    assert (s.omega, s.p, s.a) == pytest.approx((1.0, -1.0, 1.0))
    c = model.Constants(hbar=1.3, mass=0.7, alpha0=2.1)
    N = 2.5
    E = -c.mass * c.alpha0 ** 2 / (2 * c.hbar ** 2 * N ** 2)
    assert model.derived_scales(c, E).p == pytest.approx(-N, rel=1e-14)
    with pytest.raises(DomainError):
        model.derived_scales(UNITS, 0.0)


@settings(max_examples=50, deadline=None)
@given(rho=st.floats(0.01, 10), phi=st.floats(0.01, math.pi - 0.01))
def test_parabolic_polar_roundtrip(rho, phi):
    xi, eta = model.parabolic_from_polar(rho, phi)
    r2, p2 = model.polar_from_parabolic(xi, eta)
    assert (r2, p2) == pytest.approx((rho, phi), rel=1e-12)
    a = model.to_cartesian(model.V1(0.5, 0.5), "parabolic", (xi, eta))
    b = model.to_cartesian(model.V1(0.5, 0.5), "polar", (rho, phi))
    assert a == pytest.approx(b, abs=1e-12)


def test_v3_coordinates_agree():
    spec = model.V3(0.5, 0.5)
    r, theta, phi = 1.7, 0.8, 0.4
    xi, eta = math.sqrt(2 * r) * math.cos(theta / 2), math.sqrt(2 * r) * math.sin(theta / 2)
    a = model.to_cartesian(spec, "parabolic", (xi, eta, phi))
    b = model.to_cartesian(spec, "spherical", (r, theta, phi))
    assert a == pytest.approx(b, abs=1e-12)


def test_v4_table_validation():
    phi = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    vals = np.ones((1, 64)) / math.sqrt(2 * math.pi)
    tab = model.AngularTable(lambda_phi=np.array([1.0]), phi=phi, values=vals, f_values=np.ones(64))
    spec = model.V4(0.5, table=tab)
    assert spec.lambda_phi_sq(0) == 1.0
    assert spec.f_value(1.234) == pytest.approx(1.0)
    assert spec.azimuthal(0, 0.3) == pytest.approx(1 / math.sqrt(2 * math.pi))
    with pytest.raises(DomainError):
        spec.lambda_phi_sq(1)
    with pytest.raises(DomainError):
        model.V4(0.5, gamma=1.0, table=tab)
