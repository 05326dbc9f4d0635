"""The so(2,1) algebra: realization, BCH coefficient maps and the radial kernel.

The generators act on functions of a radial variable ``x > 0``::

    T1 = -(hbar^2 / 2M) (d^2/dx^2 - mu (mu - 1) / x^2)
    T2 = -(i/2) (x d/dx + 1/2)
    T3 = (M / 4 hbar^2) x^2

and satisfy [T1, T2] = -i T1, [T2, T3] = -i T3, [T1, T3] = -i T2.

Propagation time ``S`` may be complex.  Real ``S`` gives the oscillatory
kernel; ``S = -i T`` gives the Euclidean (heat) kernel, which is what the
numerical semigroup and spectral-sum checks use because the real-time
integrals only converge conditionally.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.linalg import expm

from . import specfun
from .errors import DomainError, SingularityError

_POLE_TOL = 1e-12


@dataclass(frozen=True)
class KernelParams:
    """Barrier index ``mu`` and frequency ``omega`` of a radial oscillator."""

    mu: float
    omega: float
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.mu > -0.5:
            raise DomainError("mu must exceed -1/2 so that lambda = mu - 1/2 > -1")
        if not self.omega > 0:
            raise DomainError("omega must be positive")
        if not (self.hbar > 0 and self.mass > 0):
            raise DomainError("hbar and mass must be positive")

    @property
    def lam(self) -> float:
        return self.mu - 0.5


@dataclass(frozen=True)
class BchSplit:
    a: float
    b: complex
    c: float


@dataclass(frozen=True)
class BchMerge:
    alpha: complex
    beta: complex
    gamma: complex
    tau: complex
    c: float


def bch_split(omega: float, S: float, hbar: float = 1.0) -> BchSplit:
    """Coefficients of exp(-iS/hbar (T1 + 2 hbar^2 omega^2 T3)) as T3.T2.T1 product."""
    cos = math.cos(omega * S)
    if abs(cos) < _POLE_TOL:
        raise SingularityError("omega*S is at a pole of tan")
    tan = math.tan(omega * S)
    b = 2 * cmath.log(cos)
    if b.imag == 0:
        b = b.real
    return BchSplit(a=2 * hbar * omega * tan, b=b, c=tan / (hbar * omega))


def bch_merge(tau: complex, c: float) -> BchMerge:
    """Coefficients turning exp(-icT1) exp(tau T3) into a T3.T2.T1 product."""
    d = 1 - 1j * tau * c / 2
    if abs(d) < _POLE_TOL:
        raise SingularityError("1 - i tau c / 2 vanishes")
    return BchMerge(alpha=1j * tau / d, beta=2 * cmath.log(d), gamma=c / d, tau=tau, c=c)


# ---------------------------------------------------------------------------
# 2x2 representation
# ---------------------------------------------------------------------------

#: A faithful 2x2 representation of the algebra.
MATRIX_T1 = np.array([[0, 1], [0, 0]], dtype=complex)
MATRIX_T2 = 0.5j * np.diag([1.0, -1.0]).astype(complex)
MATRIX_T3 = np.array([[0, 0], [0.5, 0]], dtype=complex)


def split_residual(omega: float, S: float, hbar: float = 1.0) -> float:
    """Max-entry mismatch of the split identity in the 2x2 representation."""
    k = bch_split(omega, S, hbar)
    lhs = expm(-1j * S / hbar * (MATRIX_T1 + 2 * hbar ** 2 * omega ** 2 * MATRIX_T3))
    rhs = expm(-1j * k.a * MATRIX_T3) @ expm(-1j * k.b * MATRIX_T2) @ expm(-1j * k.c * MATRIX_T1)
    return float(np.max(np.abs(lhs - rhs)))


def merge_residual(tau: complex, c: float) -> float:
    """Max-entry mismatch of the merge identity in the 2x2 representation."""
    k = bch_merge(tau, c)
    lhs = expm(-1j * k.alpha * MATRIX_T3) @ expm(-1j * k.beta * MATRIX_T2) @ expm(-1j * k.gamma * MATRIX_T1)
    rhs = expm(-1j * c * MATRIX_T1) @ expm(tau * MATRIX_T3)
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# differential realization on x^s exp(-x^2/2)
# ---------------------------------------------------------------------------

# A function is a dict {j: c_j} standing for sum_j c_j x^j exp(-x^2/2).

def _add(f, g, scale=1.0):
    out = dict(f)
    for j, c in g.items():
        out[j] = out.get(j, 0) + scale * c
    return out


def _scale(f, s):
    return {j: s * c for j, c in f.items()}


def _deriv(f):
    out = {}
    for j, c in f.items():
        if j != 0:
            out[j - 1] = out.get(j - 1, 0) + j * c
        out[j + 1] = out.get(j + 1, 0) - c
    return out


def _apply(op, f, mu, hbar, mass):
    if op == "T1":
        barrier = {j - 2: mu * (mu - 1) * c for j, c in f.items()}
        return _scale(_add(_deriv(_deriv(f)), barrier, -1.0), -hbar ** 2 / (2 * mass))
    if op == "T2":
        xf = {j + 1: c for j, c in _deriv(f).items()}
        return _scale(_add(xf, f, 0.5), -0.5j)
    if op == "T3":
        return {j + 2: mass / (4 * hbar ** 2) * c for j, c in f.items()}
    raise DomainError(f"unknown generator {op!r}")


# [A, B] = -i C
_EXPECTED = {"T1T2": "T1", "T2T3": "T3", "T1T3": "T2"}


def commutator_residual(pair: str, mu: float, s: int, x: float,
                        hbar: float = 1.0, mass: float = 1.0) -> float:
    """|([A,B] + i C) f_s(x)| for f_s(x) = x^s exp(-x^2/2)."""
    if pair not in _EXPECTED:
        raise DomainError(f"unknown pair {pair!r}")
    if s < 2 and mu * (mu - 1) != 0:
        raise DomainError("test functions need s >= 2 when the barrier is present")
    if not x > 0:
        raise DomainError("x must be positive")
    a, b = pair[:2], pair[2:]
    f = {s: 1.0}
    ab = _apply(a, _apply(b, f, mu, hbar, mass), mu, hbar, mass)
    ba = _apply(b, _apply(a, f, mu, hbar, mass), mu, hbar, mass)
    expected = _scale(_apply(_EXPECTED[pair], f, mu, hbar, mass), -1j)
    res = _add(_add(ab, ba, -1.0), expected, -1.0)
    gauss = math.exp(-x * x / 2)
    return abs(sum(c * x ** j for j, c in res.items()) * gauss)


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

def kernel(x: float, xp: float, S: complex, params: KernelParams) -> complex:
    """Radial oscillator propagator for H = T1 + 2 hbar^2 omega^2 T3.

    Accepts complex ``S``; the Bessel function is evaluated exponentially
    scaled so that short Euclidean times do not overflow.
    """
    if not (x > 0 and xp > 0):
        raise DomainError("kernel arguments must be positive")
    w, hb, m = params.omega, params.hbar, params.mass
    sin = cmath.sin(w * S)
    if abs(sin) < _POLE_TOL:
        raise SingularityError("omega*S is a multiple of pi (caustic)")
    cot = cmath.cos(w * S) / sin
    z = m * w * x * xp / (1j * hb * sin)
    expo = 1j * m * w / (2 * hb) * (x * x + xp * xp) * cot + abs(z.real)
    pref = m * w / (1j * hb * sin) * math.sqrt(x * xp)
    return pref * cmath.exp(expo) * specfun.bessel_i_scaled(params.lam, z)


def radial_eigenstate(n: int, x, params: KernelParams):
    """Normalized eigenfunction (on dx) of the radial oscillator, energy hbar*omega*(2n+mu+1/2)."""
    lam = params.lam
    s = params.mass * params.omega / params.hbar
    x = np.asarray(x, dtype=float)
    log_norm = 0.5 * (math.log(2.0) + math.lgamma(n + 1) + (lam + 1) * math.log(s) - math.lgamma(n + lam + 1))
    return math.exp(log_norm) * x ** (lam + 0.5) * np.exp(-s * x * x / 2) * specfun.laguerre(n, lam, s * x * x)


def radial_energy(n: int, params: KernelParams) -> float:
    return params.hbar * params.omega * (2 * n + params.mu + 0.5)


def spectral_kernel(x: float, xp: float, S: complex, params: KernelParams, n_max: int = 60) -> complex:
    """Truncated eigenfunction expansion sum_{n<=n_max} exp(-i E_n S/hbar) phi_n(x) phi_n(x')."""
    total = 0j
    for n in range(n_max + 1):
        phase = cmath.exp(-1j * radial_energy(n, params) * S / params.hbar)
        total += phase * float(radial_eigenstate(n, x, params)) * float(radial_eigenstate(n, xp, params))
    return total


def semigroup_residual(x: float, xp: float, S1: complex, S2: complex, params: KernelParams) -> float:
    """|int_0^inf K(x,y;S1) K(y,x';S2) dy - K(x,x';S1+S2)| by adaptive quadrature."""
    # Gaussian envelope exp(-M omega y^2 Re(...)/2hbar): pick y_max where it is < 1e-16
    decay = min(_envelope_rate(S1, params), _envelope_rate(S2, params))
    if decay <= 0:
        raise DomainError("semigroup quadrature needs Im S < 0 (Euclidean times)")
    y_max = max(x, xp) + math.sqrt(math.log(1e16) / decay)

    def part(y, which):
        v = kernel(x, y, S1, params) * kernel(y, xp, S2, params)
        return v.real if which == 0 else v.imag

    opts = dict(epsabs=1e-13, epsrel=1e-12, limit=400, points=[x, xp])
    re, _ = integrate.quad(part, 0, y_max, args=(0,), **opts)
    im, _ = integrate.quad(part, 0, y_max, args=(1,), **opts)
    return abs(complex(re, im) - kernel(x, xp, S1 + S2, params))


def _envelope_rate(S: complex, params: KernelParams) -> float:
    # coefficient of -y^2 in log|K| at large y: (M omega / 2 hbar) * [Im cot - |Im 1/sin|] sign-adjusted
    w = params.omega
    sin = cmath.sin(w * S)
    cot = cmath.cos(w * S) / sin
    a = -(1j * cot).real
    return params.mass * w / (2 * params.hbar) * a


def delta_smear(x: float, S: complex, params: KernelParams, g) -> complex:
    """int_0^inf K(x, x'; S) g(x') dx' for a smooth test function g."""
    decay = _envelope_rate(S, params)
    half = math.sqrt(math.log(1e16) / max(decay, 1e-300)) if decay > 0 else 10.0
    lo, hi = max(0.0, x - half), x + half

    def part(y, which):
        v = kernel(x, y, S, params) * g(y) if y > 0 else 0j
        return v.real if which == 0 else v.imag

    opts = dict(epsabs=1e-14, epsrel=1e-12, limit=400, points=[x])
    re, _ = integrate.quad(part, lo, hi, args=(0,), **opts)
    im, _ = integrate.quad(part, lo, hi, args=(1,), **opts)
    return complex(re, im)
