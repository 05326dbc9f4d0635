import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superint import greens, model, spectra
from superint.errors import DomainError, PoleError, UnsupportedError

UNITS = model.Constants()
ODD_UNITS = model.Constants(hbar=1.3, mass=0.7, alpha0=1.1)

CHANNELS = [
    (model.V1(0.3, 0.6), "polar", 0),
    (model.V1(0.3, 0.6), "polar", 2),
    (model.V1(0.7, 0.2, "minus", "plus"), "polar", 1),
    (model.V3(0.3, 0.6), "spherical", (1, 0)),
    (model.V3(0.5, 0.5), "spherical", (0, 1)),
    (model.V4(0.0, gamma=1.0), "spherical", (0, 1)),
    (model.V4(0.5, gamma=1.0), "spherical", (1, -1)),
]


def _id(case):
    return f"{case[0].name}-{case[2]}"


def test_exchange_symmetry():
    spec = model.V1(0.3, 0.6)
    a = greens.radial_green(spec, 0, -0.3, 1.0, 2.0)
    b = greens.radial_green(spec, 0, -0.3, 2.0, 1.0)
    assert a == b


@pytest.mark.parametrize("case", CHANNELS, ids=_id)
def test_poles_are_bound_levels(case):
    spec, system, ch = case
    poles = greens.pole_energies(spec, ch, 4)
    for level, E in enumerate(poles):
        qn = greens._bound_qn(spec, ch, level)
        assert spectra.bound_energy(spec, system, qn, UNITS).energy == pytest.approx(E, rel=1e-15)
        with pytest.raises(PoleError):
            greens.radial_green(spec, ch, E, 1.0, 1.5)


@pytest.mark.parametrize("c", [UNITS, ODD_UNITS], ids=["unit", "odd"])
@pytest.mark.parametrize("case", CHANNELS, ids=_id)
def test_residue_factorization(case, c):
    spec, system, ch = case
    for level in range(3):
        check = greens.pole_residue(spec, system, ch, level, c)
        assert check.residue_match <= 1e-6


def test_lowest_v1_residue_example():
    check = greens.pole_residue(model.V1(0.3, 0.6), "polar", 0, 0)
    assert check.E_pole == pytest.approx(-1 / (2 * 1.45 ** 2), rel=1e-14)
    assert check.residue_match <= 1e-6


def _radial_residual(spec, ch, E, rp, r, c, h=1e-3):
    g = lambda x: greens.radial_green(spec, ch, E, x, rp, c)
    L = greens.channel_index(spec, ch)
    f0 = g(r)
    d1 = (g(r - 2 * h) - 8 * g(r - h) + 8 * g(r + h) - g(r + 2 * h)) / (12 * h)
    d2 = (-g(r - 2 * h) + 16 * g(r - h) - 30 * f0 + 16 * g(r + h) - g(r + 2 * h)) / (12 * h * h)
    k = c.hbar ** 2 / (2 * c.mass)
    if spec.name == "V1":
        h_g = -k * (d2 + d1 / r - L * L / r ** 2 * f0) - c.alpha0 / r * f0
    else:
        h_g = -k * (d2 + 2 * d1 / r - (L * L - 0.25) / r ** 2 * f0) - c.alpha0 / r * f0
    return abs(h_g - E * f0) / (abs(E * f0) + 1e-30)


@pytest.mark.parametrize("case", CHANNELS, ids=_id)
def test_homogeneous_equation_off_diagonal(case):
    spec, _, ch = case
    for c in (UNITS, ODD_UNITS):
        for r in (0.4, 2.5, 6.0):
            assert _radial_residual(spec, ch, -0.37, 1.3, r, c) <= 1e-6


@pytest.mark.parametrize("case", CHANNELS, ids=_id)
def test_derivative_jump(case):
    spec, _, ch = case
    c, E, rp, h = ODD_UNITS, -0.21, 1.7, 1e-4
    g = lambda x: greens.radial_green(spec, ch, E, x, rp, c)
    # one-sided 3-point derivatives on either side of r = r'
    right = (-3 * g(rp) + 4 * g(rp + h) - g(rp + 2 * h)) / (2 * h)
    left = (3 * g(rp) - 4 * g(rp - h) + g(rp - 2 * h)) / (2 * h)
    want = 1j * c.mass / (c.hbar * rp) if spec.name == "V1" else 2j * c.mass / (c.hbar * rp * rp)
    assert (right - left) == pytest.approx(want, rel=1e-6)


def test_closed_form_vs_spectral():
    spec = model.V1(0.3, 0.6)
    E = 0.9 * spectra.enumerate_levels(spec, "polar", UNITS, 1)[0].energy
    x, xp = (1.0, 0.7), (1.5, 0.9)
    closed = greens.green_assemble(spec, "polar", E, x, xp, 12)
    spectral = greens.green_assemble(spec, "polar", E, x, xp, 12, mode="spectral")
    assert abs(closed.value - spectral.value) <= 1e-3 * abs(closed.value)


def test_spectral_channel_v4():
    spec = model.V4(0.0, gamma=1.0)
    E = 0.9 * spectra.enumerate_levels(spec, "spherical", UNITS, 1)[0].energy
    x, xp = (1.0, 0.8, 0.4), (1.5, 1.1, 0.6)
    closed = greens.green_assemble(spec, "spherical", E, x, xp, 1)
    # the 3D channels converge more slowly in k_max than the 2D ones
    spectral = greens.green_assemble(spec, "spherical", E, x, xp, 1, mode="spectral", k_max=120, n_k=640)
    assert abs(closed.value - spectral.value) <= 2e-3 * abs(closed.value)


@settings(max_examples=15, deadline=None)
@given(r=st.floats(0.2, 4), rp=st.floats(0.2, 4), phi=st.floats(0.1, 3.0), phip=st.floats(0.1, 3.0),
       n_max=st.integers(0, 6))
def test_assembled_symmetry_v1(r, rp, phi, phip, n_max):
    spec = model.V1(0.3, 0.6)
    a = greens.green_assemble(spec, "polar", -0.3, (r, phi), (rp, phip), n_max).value
    b = greens.green_assemble(spec, "polar", -0.3, (rp, phip), (r, phi), n_max).value
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_assembled_symmetry_v4():
    spec = model.V4(0.5, gamma=1.0)
    x, xp = (1.0, 0.8, 0.4), (1.7, 2.0, 4.0)
    a = greens.green_assemble(spec, "spherical", -0.2, x, xp, 4).value
    b = greens.green_assemble(spec, "spherical", -0.2, xp, x, 4).value
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("case", CHANNELS[:1] + CHANNELS[5:6], ids=_id)
def test_truncation_decay(case):
    # radial channel factors decrease monotonically from the first channel on
    spec = case[0]
    chans = [n if spec.name == "V1" else (n, 1) for n in range(15)]
    mags = [abs(greens.radial_green(spec, ch, -0.1, 1.0, 1.5)) for ch in chans]
    assert all(b < a for a, b in zip(mags, mags[1:]))


def test_truncation_estimate_is_last_shell():
    spec = model.V1(0.3, 0.6)
    parts = greens.shell_sums(spec, "polar", -0.3, (1.0, 0.7), (1.5, 2.4), 6)
    v = greens.green_assemble(spec, "polar", -0.3, (1.0, 0.7), (1.5, 2.4), 6)
    assert v.truncation_estimate == abs(parts[-1])
    assert v.value == pytest.approx(sum(parts))


def test_v3_shells_cover_channels():
    shells = greens.channels(model.V3(0.5, 0.5), 2)
    assert shells == [[(0, 0)], [(0, 1), (1, 0)], [(0, 2), (1, 1), (2, 0)]]
    v4 = greens.channels(model.V4(0.5, gamma=1.0), 1)
    assert v4 == [[(0, 0)], [(1, 0), (0, 1), (0, -1)]]


def test_errors():
    spec = model.V1(0.3, 0.6)
    with pytest.raises(DomainError):
        greens.radial_green(spec, 0, 0.2, 1.0, 1.5)
    with pytest.raises(DomainError):
        greens.radial_green(spec, 0, -0.2, -1.0, 1.5)
    with pytest.raises(UnsupportedError):
        greens.green_assemble(model.V2(0.1, 0.1), "parabolic", -0.2, (1, 1), (1, 2), 3)
    with pytest.raises(UnsupportedError):
        greens.green_assemble(spec, "parabolic", -0.2, (1, 1), (1, 2), 3)
    with pytest.raises(DomainError):
        greens.green_assemble(spec, "polar", -0.2, (1, 4.0), (1, 2), 3)


def test_no_positive_energy_poles():
    # Gamma(p + L + 1/2) has no poles for E > 0; the library refuses E >= 0 outright
    spec = model.V1(0.3, 0.6)
    assert all(E < 0 for E in greens.pole_energies(spec, 0, 50))
    with pytest.raises(DomainError):
        greens.radial_green(spec, 0, 1e-3, 1.0, 1.5)
