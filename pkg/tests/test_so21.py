import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superint import so21
from superint.errors import DomainError, SingularityError


def test_split_at_quarter_period():
    k = so21.bch_split(1.0, math.pi / 4, 1.0)
    assert k.a == pytest.approx(2.0, rel=1e-15)
    assert k.b == pytest.approx(-math.log(2.0), rel=1e-15)
    assert k.c == pytest.approx(1.0, rel=1e-15)


def test_split_small_angle():
    S = 1e-3
    k = so21.bch_split(1.0, S, 1.0)
    assert k.a == pytest.approx(2 * S, abs=S ** 3)
    assert k.b == pytest.approx(-S ** 2, abs=S ** 3)
    assert k.c == pytest.approx(S, abs=S ** 3)


def test_split_pole():
    with pytest.raises(SingularityError):
        so21.bch_split(1.0, math.pi / 2, 1.0)


@pytest.mark.parametrize("omega,S", [(0.7, 0.3), (1.3, 1.0), (2.0, 2.0), (0.5, 5.0)])
def test_split_invariants(omega, S):
    k = so21.bch_split(omega, S, 1.0)
    assert k.a * k.c == pytest.approx(2 * math.tan(omega * S) ** 2, rel=1e-12)
    assert abs(cmath.exp(k.b) - math.cos(omega * S) ** 2) <= 1e-12


def test_merge_at_zero_tau():
    k = so21.bch_merge(0.0, 1.0)
    assert (k.alpha, k.beta, k.gamma) == (0, 0, 1)


def test_merge_zero_c():
    k = so21.bch_merge(2j, 0.0)
    assert k.alpha == pytest.approx(-2.0)
    assert k.beta == 0 and k.gamma == 0


def test_merge_pole():
    with pytest.raises(SingularityError):
        so21.bch_merge(-2j, 1.0)


@settings(max_examples=50, deadline=None)
@given(tr=st.floats(-3, 3), ti=st.floats(-3, 3), c=st.floats(-2, 2))
def test_merge_invariants(tr, ti, c):
    tau = complex(tr, ti)
    d = 1 - 1j * tau * c / 2
    if abs(d) < 1e-3:
        return
    k = so21.bch_merge(tau, c)
    assert abs(k.gamma * d - c) <= 1e-12 * max(1, abs(c))
    assert abs(k.alpha * d - 1j * tau) <= 1e-12 * max(1, abs(tau))


def test_matrix_representation_commutators():
    t1, t2, t3 = so21.MATRIX_T1, so21.MATRIX_T2, so21.MATRIX_T3
    comm = lambda a, b: a @ b - b @ a
    np.testing.assert_allclose(comm(t1, t2), -1j * t1, atol=1e-15)
    np.testing.assert_allclose(comm(t2, t3), -1j * t3, atol=1e-15)
    np.testing.assert_allclose(comm(t1, t3), -1j * t2, atol=1e-15)


def test_split_identity_grid():
    worst = 0.0
    for omega, S, hbar in itertools.product([0.3, 0.7, 1.0, 1.6, 2.5], [0.1, 0.4, 0.9, 1.3, 2.2], [0.5, 1.0, 2.0]):
        if abs(math.cos(omega * S)) < 1e-3:
            continue
        worst = max(worst, so21.split_residual(omega, S, hbar))
    assert worst <= 1e-12


def test_merge_identity_grid():
    worst = 0.0
    taus = [0.3, -0.8 + 0.2j, 1.1j, 0.5 - 0.5j, -1.4]
    for tau, c in itertools.product(taus, [-1.0, -0.2, 0.0, 0.6, 1.5]):
        worst = max(worst, so21.merge_residual(tau, c))
    assert worst <= 1e-12


@pytest.mark.parametrize("pair,mu,s,x", [("T1T2", 2, 2, 1.0), ("T2T3", 0, 2, 0.5), ("T1T3", 1, 3, 2.0)])
def test_commutator_examples(pair, mu, s, x):
    assert so21.commutator_residual(pair, mu, s, x) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(pair=st.sampled_from(["T1T2", "T2T3", "T1T3"]), mu=st.floats(-0.4, 3), s=st.integers(2, 6),
       x=st.floats(0.2, 3), hbar=st.floats(0.5, 2), mass=st.floats(0.5, 2))
def test_commutators_property(pair, mu, s, x, hbar, mass):
    scale = max(1.0, x ** (s + 4) * math.exp(-x * x / 2))
    assert so21.commutator_residual(pair, mu, s, x, hbar, mass) <= 1e-12 * scale


def test_commutator_small_power_rejected():
    with pytest.raises(DomainError):
        so21.commutator_residual("T1T2", 2.0, 1, 1.0)


def test_kernel_half_integer_order():
    p = so21.KernelParams(mu=1.0, omega=1.0)
    x, y, S = 1.0, 1.5, 0.7
    z = x * y / (1j * math.sin(S))
    elementary = (1 / (1j * math.sin(S)) * math.sqrt(x * y)
                  * cmath.exp(0.5j * (x * x + y * y) / math.tan(S))
                  * cmath.sqrt(2 / (math.pi * z)) * cmath.sinh(z))
    assert abs(so21.kernel(x, y, S, p) - elementary) <= 1e-13 * abs(elementary)


def test_kernel_symmetry():
    p = so21.KernelParams(mu=1.7, omega=0.9, hbar=1.2, mass=0.8)
    assert so21.kernel(0.4, 2.1, 1.3, p) == so21.kernel(2.1, 0.4, 1.3, p)


def test_kernel_caustic():
    with pytest.raises(SingularityError):
        so21.kernel(1.0, 1.0, math.pi, so21.KernelParams(mu=1.0, omega=1.0))


def test_kernel_params_domain():
    with pytest.raises(DomainError):
        so21.KernelParams(mu=-0.5, omega=1.0)


def test_kernel_finite_on_caustic_free_interval():
    p = so21.KernelParams(mu=2.0, omega=1.0)
    vals = [so21.kernel(1.0, 1.3, S, p) for S in np.linspace(0.01, math.pi - 0.01, 50)]
    assert all(cmath.isfinite(v) for v in vals)


def test_spectral_sum():
    p = so21.KernelParams(mu=2.0, omega=1.0)
    S = -0.3j
    diff = abs(so21.kernel(1.0, 1.0, S, p) - so21.spectral_kernel(1.0, 1.0, S, p, n_max=60))
    assert diff <= 1e-8


def test_radial_eigenstates_orthonormal():
    from scipy import integrate
    p = so21.KernelParams(mu=1.4, omega=0.8)
    for m, n in [(0, 0), (3, 3), (1, 4), (2, 2)]:
        val, _ = integrate.quad(lambda x: so21.radial_eigenstate(m, x, p) * so21.radial_eigenstate(n, x, p), 0, 30,
                                epsabs=1e-13, limit=200)
        assert val == pytest.approx(float(m == n), abs=1e-10)


@pytest.mark.parametrize("x,xp,S1,S2,mu", [(1.0, 1.5, -0.4j, -0.7j, 2.0), (0.5, 2.0, -0.2j, -0.3j, 0.8)])
def test_semigroup(x, xp, S1, S2, mu):
    p = so21.KernelParams(mu=mu, omega=1.0)
    assert so21.semigroup_residual(x, xp, S1, S2, p) <= 1e-6


def test_delta_limit():
    p = so21.KernelParams(mu=2.0, omega=1.0)
    g = lambda y: y ** 3 * math.exp(-(y - 1) ** 2)
    x = 1.2
    e3 = abs(so21.delta_smear(x, -1e-3j, p, g) - g(x))
    e4 = abs(so21.delta_smear(x, -1e-4j, p, g) - g(x))
    assert e4 < 1e-3
    # first-order approach: error shrinks tenfold per decade of S
    assert 8 < e3 / e4 < 12
    # Richardson on the linear trend removes the leading term
    rich = (10 * so21.delta_smear(x, -1e-4j, p, g) - so21.delta_smear(x, -1e-3j, p, g)) / 9
    assert abs(rich - g(x)) < 1e-6
