"""Energy-domain Green's functions for E < 0.

Radial Green's functions come from the time integral of the radial
oscillator kernel and reduce to Whittaker functions,

    2D:  G(r, r') = Gamma(p + L + 1/2) / (2 i w Gamma(2L + 1) sqrt(r r')) M(r<) W(r>)
    3D:  G(r, r') = Gamma(p + L + 1/2) / (  i w Gamma(2L + 1) r r'      ) M(r<) W(r>)

with w = sqrt(-2E/M), p = -alpha0/(hbar w) and Whittaker arguments
2 M w r / hbar.  In 2D the channels pair with Phi_n(phi/2) Phi_n(phi'/2);
in 3D with unit-normalized angular functions.  With these conventions the
residue at every pole is i hbar psi(x) psi*(x'), matching the spectral form
G = i hbar sum psi psi* / (E - E_n).

The parabolic partial Green's functions are left as time integrals by the
theory; here they are available only through the spectral mode.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import spectra, specfun, wavefun
from .errors import DomainError, PoleError, UnsupportedError
from .model import Constants, PotentialSpec
from .model import Polar2D, Spherical3D, V4Spherical

_RADIAL_SYSTEM = {"V1": "polar", "V3": "spherical", "V4": "spherical"}


@dataclass(frozen=True)
class GreensValue:
    value: complex
    E: float
    points: tuple
    n_max: int
    truncation_estimate: float


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

def channel_index(spec: PotentialSpec, channel) -> float:
    """Whittaker index of a radial channel.

    ``channel`` is ``n`` for V1, ``(m, n)`` for V3 and ``(n, nu)`` for V4.
    """
    if spec.name == "V1":
        n = int(channel if np.ndim(channel) == 0 else channel[0])
        return float(spectra.angular_constants(spec, n).lam)
    if spec.name == "V3":
        m, n = channel
        if m < 0:
            raise DomainError("m must be non-negative")
        return m + float(spectra.angular_constants(spec, n).lambda1) + 0.5
    if spec.name == "V4":
        n, nu = channel
        if n < 0:
            raise DomainError("n must be non-negative")
        sep = spectra.angular_constants(spec, nu)
        return n + (sep.lambda_plus + sep.lambda_minus + 1) / 2
    raise UnsupportedError(f"{spec.name} has no closed-form radial Green's function")


def _bound_qn(spec, channel, level):
    if spec.name == "V1":
        n = int(channel if np.ndim(channel) == 0 else channel[0])
        return Polar2D(level, n)
    if spec.name == "V3":
        return Spherical3D(level, *channel)
    return V4Spherical(level, *channel)


# ---------------------------------------------------------------------------
# radial Green's function
# ---------------------------------------------------------------------------

def _coulomb_parameter(E: float, c: Constants):
    if not E < 0:
        raise DomainError("the Green's function is provided for E < 0 only")
    w = math.sqrt(-2 * E / c.mass)
    return w, -c.alpha0 / (c.hbar * w)


def radial_green(spec: PotentialSpec, channel, E: float, r: float, rp: float,
                 c: Constants | None = None) -> complex:
    """Closed-form radial Green's function of one angular channel."""
    c = c or Constants()
    if not (r > 0 and rp > 0):
        raise DomainError("radii must be positive")
    L = channel_index(spec, channel)
    w, p = _coulomb_parameter(E, c)
    z = p + L + 0.5
    nearest = round(z)
    if nearest <= 0 and abs(z - nearest) <= 1e-13 * max(1.0, abs(z)):
        raise PoleError(f"E = {E!r} sits on a pole of the channel")
    lo, hi = min(r, rp), max(r, rp)
    scale = 2 * c.mass * w / c.hbar
    mw = specfun.whittaker_m(-p, L, scale * lo) * specfun.whittaker_w(-p, L, scale * hi)
    log_amp = specfun.log_gamma(z) - math.lgamma(2 * L + 1)
    if spec.name == "V1":
        den = 2j * w * math.sqrt(r * rp)
    else:
        den = 1j * w * r * rp
    return cmath.exp(log_amp) * mw / den


def pole_energies(spec: PotentialSpec, channel, count: int, c: Constants | None = None) -> list[float]:
    """Poles of Gamma(p + L + 1/2): p = -(l + L + 1/2), l = 0, 1, ..."""
    c = c or Constants()
    L = channel_index(spec, channel)
    return [-c.mass * c.alpha0 ** 2 / (2 * c.hbar ** 2 * (l + L + 0.5) ** 2) for l in range(count)]


def _angular(spec: PotentialSpec, channel, point) -> complex:
    """Unit-normalized angular factor (Phi_n(phi/2) in 2D) of a channel at a point."""
    if spec.name == "V1":
        n = int(channel if np.ndim(channel) == 0 else channel[0])
        return complex(wavefun.angular_fn(spec.a2, spec.a1, n, point[1] / 2))
    _, theta, phi = point
    if spec.name == "V3":
        m, n = channel
        lam1 = float(spectra.angular_constants(spec, n).lambda1)
        return complex(wavefun._legendre_theta(m, lam1, theta) * wavefun.angular_fn(spec.a2, spec.a1, n, phi))
    n, nu = channel
    sep = spectra.angular_constants(spec, nu)
    return complex(wavefun.angular_fn(sep.lambda_plus, sep.lambda_minus, n, theta / 2)
                   / math.sqrt(2 * math.sin(theta)) * spec.azimuthal(nu, phi))


def _check_points(spec, system, x, xp, c):
    probe = wavefun.bound_state(spec, system, _bound_qn(spec, _first_channel(spec), 0), c)
    return wavefun.check_point(probe, x), wavefun.check_point(probe, xp)


def _first_channel(spec):
    if spec.name == "V1":
        return 0
    if spec.name == "V3":
        return (0, 0)
    return (0, next(iter(_v4_nus(spec, 10_000))))


def _v4_nus(spec, limit):
    """Admissible azimuthal labels ordered by |nu| (then sign)."""
    if spec.table is not None:
        for nu in range(len(spec.table.lambda_phi)):
            if spec.lambda_phi_sq(nu) >= spec.k1 ** 2:
                yield nu
        return
    for a in range(limit + 1):
        for nu in ((a,) if a == 0 else (a, -a)):
            if spec.lambda_phi_sq(nu) >= spec.k1 ** 2:
                yield nu


def channels(spec: PotentialSpec, n_max: int):
    """Angular channels grouped in shells of total angular order 0..n_max."""
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    shells = []
    for order in range(n_max + 1):
        if spec.name == "V1":
            shells.append([order])
        elif spec.name == "V3":
            shells.append([(m, order - m) for m in range(order + 1)])
        else:
            rank = abs if spec.table is None else int
            shells.append([(order - rank(nu), nu) for nu in _v4_nus(spec, order) if rank(nu) <= order])
    return shells


def _radial_system(spec, system):
    want = _RADIAL_SYSTEM.get(spec.name)
    if want is None:
        raise UnsupportedError(f"{spec.name} Green's functions are not provided")
    if system != want:
        raise UnsupportedError(f"Green's functions are assembled in {want} coordinates for {spec.name}")


def continuum_radial(spec: PotentialSpec, channel, k: float, r: float, c: Constants | None = None) -> complex:
    """k-normalized regular radial Coulomb wave of a channel.

    |Gamma(L + 1/2 - i/ak)| e^(pi/2ak) M_{i/ak, L}(-2ikr) / Gamma(2L + 1)
    oscillates with amplitude 2 (times r^(-1/2) in 2D, r^(-1) in 3D); the
    prefactor brings the amplitude to sqrt(1/pi) in 2D (angular factors
    Phi_n(phi/2) of norm 2) and sqrt(2/pi) in 3D, i.e. delta(k - k')
    normalization of the full channel product.
    """
    c = c or Constants()
    if not (k > 0 and r > 0):
        raise DomainError("k and r must be positive")
    L = channel_index(spec, channel)
    a = c.bohr_radius
    amp = wavefun._abs_gamma(0.5 + L - 1j / (a * k)) * math.exp(math.pi / (2 * a * k) - math.lgamma(2 * L + 1))
    m = wavefun._coulomb_factor(k, a, L, r)
    if spec.name == "V1":
        return amp * m / (2 * math.sqrt(math.pi * r))
    return amp * m / (math.sqrt(2 * math.pi) * r)


def _spectral_channel(spec, system, channel, E, x, xp, c, n_bound, k_max, n_k):
    """i hbar [sum_l psi psi*/(E - E_l) + int dk psi_k psi_k*/(E - E_k)] for one channel."""
    total = 0j
    term = 0j
    for level in range(n_bound):
        st = wavefun.bound_state(spec, system, _bound_qn(spec, channel, level), c)
        term = wavefun.wavefunction(st, x) * np.conj(wavefun.wavefunction(st, xp))
        total += term / (E - st.energy)
    if n_bound:
        # high levels: N^3 psi psi* tends to a threshold limit and E_l -> 0,
        # so the omitted tail is term * N^3 * zeta(3, N + 1) / E
        N = level + channel_index(spec, channel) + 0.5
        total += term * N ** 3 * special.zeta(3, N + 1) / E
    if n_k:
        ks = np.linspace(0.0, k_max, n_k + 1)[1:]
        h = ks[0]
        ang = _angular(spec, channel, x) * np.conj(_angular(spec, channel, xp))
        vals = np.array([continuum_radial(spec, channel, k, x[0], c) * np.conj(continuum_radial(spec, channel, k, xp[0], c))
                         / (E - c.hbar ** 2 * k * k / (2 * c.mass)) for k in ks])
        # trapezoid; the integrand vanishes linearly at threshold (k |psi_E|^2),
        # so the k = 0 node drops out and the Euler-Maclaurin h^2 term is kept
        cont = h * (vals.sum() - vals[-1] / 2)
        if n_k >= 2:
            slope0 = (8 * vals[0] - vals[1]) / (6 * h)
            cont += h * h / 12 * slope0
        total += ang * cont
    return 1j * c.hbar * total


def shell_sums(spec: PotentialSpec, system: str, E: float, x, xp, n_max: int,
               c: Constants | None = None, mode: str = "partial",
               n_bound: int = 40, k_max: float = 30.0, n_k: int = 160) -> list[complex]:
    """Contribution of each angular shell 0..n_max (see ``channels``)."""
    c = c or Constants()
    _radial_system(spec, system)
    if mode not in ("partial", "spectral"):
        raise DomainError("mode must be 'partial' or 'spectral'")
    _coulomb_parameter(E, c)
    x, xp = _check_points(spec, system, x, xp, c)
    out = []
    for shell in channels(spec, n_max):
        part = 0j
        for ch in shell:
            if mode == "partial":
                part += radial_green(spec, ch, E, x[0], xp[0], c) * _angular(spec, ch, x) * np.conj(_angular(spec, ch, xp))
            else:
                part += _spectral_channel(spec, system, ch, E, x, xp, c, n_bound, k_max, n_k)
        out.append(complex(part))
    return out


def green_assemble(spec: PotentialSpec, system: str, E: float, x, xp, n_max: int,
                   c: Constants | None = None, mode: str = "partial",
                   n_bound: int = 40, k_max: float = 30.0, n_k: int = 160) -> GreensValue:
    """Truncated partial-wave (closed-form radial factors) or spectral sum.

    The spectral mode adds ``n_bound`` bound states per channel (plus a
    zeta-function estimate of the remaining levels) and a trapezoidal
    discretization of the continuum on (0, k_max] with ``n_k`` nodes.  It is
    an approximation limited by k_max and the node spacing.
    """
    c = c or Constants()
    parts = shell_sums(spec, system, E, x, xp, n_max, c, mode, n_bound, k_max, n_k)
    pts = _check_points(spec, system, x, xp, c)
    return GreensValue(complex(sum(parts)), float(E), pts, n_max, float(abs(parts[-1])))


@dataclass(frozen=True)
class PoleCheck:
    E_pole: float
    residue: complex
    expected: complex
    residue_match: float


def pole_residue(spec: PotentialSpec, system: str, channel, level: int,
                 c: Constants | None = None, x=None, xp=None, rel_step: float = 1e-6) -> PoleCheck:
    """Residue of the channel Green's function at its ``level``-th pole.

    (E - E_pole) G is differenced symmetrically at E_pole +- delta and
    Richardson-refined once; the result is compared with
    i hbar psi(x) psi*(x') of the bound state in that channel.
    """
    c = c or Constants()
    _radial_system(spec, system)
    if level < 0:
        raise DomainError("pole index must be non-negative")
    state = wavefun.bound_state(spec, system, _bound_qn(spec, channel, level), c)
    E0 = pole_energies(spec, channel, level + 1, c)[level]
    if x is None:
        x, xp = ((1.0, 0.7), (1.5, 0.9)) if spec.name == "V1" else ((1.0, 0.8, 0.4), (1.5, 1.1, 0.6))
    x, xp = wavefun.check_point(state, x), wavefun.check_point(state, xp)
    ang = _angular(spec, channel, x) * np.conj(_angular(spec, channel, xp))

    def sym(delta):
        g_up = radial_green(spec, channel, E0 + delta, x[0], xp[0], c)
        g_dn = radial_green(spec, channel, E0 - delta, x[0], xp[0], c)
        return delta * (g_up - g_dn) / 2

    delta = rel_step * abs(E0)
    res = (4 * sym(delta / 2) - sym(delta)) / 3 * ang
    want = 1j * c.hbar * wavefun.wavefunction(state, x) * np.conj(wavefun.wavefunction(state, xp))
    return PoleCheck(E0, complex(res), complex(want), float(abs(res - want) / abs(want)))
