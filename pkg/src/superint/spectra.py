"""Closed-form bound-state spectra and level enumeration.

Principal numbers ``N`` are carried as exact ``Fraction`` values built from
the binary expansion of the (float) potential parameters, so that the same
level reached through two coordinate systems compares equal exactly.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy import optimize

from . import model
from .errors import DomainError, ExclusionError
from .model import Constants, PotentialSpec


@dataclass(frozen=True)
class SeparationConstants:
    """Separation indices of a state; unused entries stay ``None``.

    ``lam`` is the polar index of V1, ``lambda1``/``lambda2`` the azimuthal
    and spherical-radial indices of V3 (``lambda1`` is also the Whittaker
    index of the V4 spherical radial factor).
    """

    N: Fraction | None = None
    lam: Fraction | None = None
    lambda1: Fraction | None = None
    lambda2: Fraction | None = None
    lambda_plus: float | None = None
    lambda_minus: float | None = None
    lambda_phi: float | None = None
    omega: float | None = None


@dataclass(frozen=True)
class EnergyLevel:
    energy: float
    qn: object
    sep: SeparationConstants
    degeneracy: int = 1
    members: tuple = field(default=(), compare=False)

    @property
    def N(self):
        return self.sep.N


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def coulomb_energy(N, c: Constants) -> float:
    return -c.mass * c.alpha0 ** 2 / (2 * c.hbar ** 2 * float(N) ** 2)


# ---------------------------------------------------------------------------
# V2 frequency
# ---------------------------------------------------------------------------

def _cubic_coeffs(N: int, c: Constants, beta1: float, beta2: float):
    A = 2 * c.alpha0 / (N * c.hbar)
    B = 2 * (beta1 ** 2 + beta2 ** 2) / (N * c.mass * c.hbar)
    return A, B


def cubic_residual(omega: float, N: int, c: Constants, beta1: float, beta2: float) -> float:
    A, B = _cubic_coeffs(N, c, beta1, beta2)
    return omega ** 3 - A * omega ** 2 - B


def v2_frequency(N: int, c: Constants, beta1: float, beta2: float) -> float:
    """Unique positive root of w^3 - (2 a0/N hbar) w^2 - 2(b1^2+b2^2)/(N M hbar) = 0."""
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    A, B = _cubic_coeffs(N, c, beta1, beta2)
    if B == 0:
        return A
    # w^2 (w - A) = B with w >= A gives w - A <= min(B/A^2, B^(1/3))
    delta = min(B / A / A if A > 0 else math.inf, B ** (1 / 3))
    if A + delta == A:
        # the shift is below the resolution of A: first order is exact here
        return A + B / A / A
    # doubled so that rounding in A + delta cannot drop below the root
    lo, hi = A, A + 2 * delta
    root = optimize.brentq(lambda w: w * w * (w - A) - B, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
    # one Newton polish step in the factored form
    f = root * root * (root - A) - B
    df = 3 * root * root - 2 * A * root
    return root - f / df if df else root


def v2_frequency_closed_form(N: int, c: Constants, beta1: float, beta2: float) -> float | None:
    """Cardano form of the root; ``None`` if its radicand is negative."""
    A, B = _cubic_coeffs(N, c, beta1, beta2)
    q = A / 3
    half = B / 2
    rad = half * (half + 2 * q ** 3)
    if rad < 0:
        return None
    s = math.sqrt(rad)
    # the two cube roots multiply to q^2; taking the second as q^2/u avoids
    # the cancellation in q^3 + B/2 - sqrt(...) when B dominates
    u = float(np.cbrt(q ** 3 + half + s))
    return q + u + q * q / u


# ---------------------------------------------------------------------------
# separation constants
# ---------------------------------------------------------------------------

def _v4_indices(spec: model.V4, nu: int):
    lp2 = spec.lambda_phi_sq(nu)
    k2 = spec.k1 ** 2
    if lp2 < k2:
        raise DomainError(f"lambda_phi^2 = {lp2:g} < k1^2 makes lambda_minus complex")
    return math.sqrt(lp2), math.sqrt(lp2 + k2), math.sqrt(lp2 - k2)


def angular_constants(spec: PotentialSpec, n: int) -> SeparationConstants:
    """Angular separation indices for angular quantum number ``n`` (``nu`` for V4)."""
    if spec.name == "V1":
        return SeparationConstants(lam=n + (1 + _frac(spec.a1) + _frac(spec.a2)) / 2)
    if spec.name == "V3":
        return SeparationConstants(lambda1=2 * n + _frac(spec.a1) + _frac(spec.a2) + 1)
    if spec.name == "V4":
        lphi, lplus, lminus = _v4_indices(spec, n)
        return SeparationConstants(lambda_phi=lphi, lambda_plus=lplus, lambda_minus=lminus)
    raise DomainError(f"{spec.name} has no angular separation constant")


def principal_number(spec: PotentialSpec, system: str, qn) -> SeparationConstants:
    """Separation constants including the principal parameter N."""
    want = model.qn_type(spec, system)
    if not isinstance(qn, want):
        raise DomainError(f"{spec.name}/{system} needs {want.__name__} quantum numbers")
    if spec.name == "V1":
        if system == "parabolic":
            N = qn.n1 + qn.n2 + (_frac(spec.a1) + _frac(spec.a2)) / 2 + 1
            return SeparationConstants(N=N)
        sep = angular_constants(spec, qn.n)
        return replace(sep, N=qn.m + sep.lam + Fraction(1, 2))
    if spec.name == "V2":
        if (qn.n1 + qn.n2) % 2:
            raise ExclusionError("V2 admits only an even total number of oscillator quanta")
        return SeparationConstants(N=Fraction(qn.n1 + qn.n2 + 1))
    if spec.name == "V3":
        sep = angular_constants(spec, qn.n)
        if system == "parabolic":
            return replace(sep, N=qn.n1 + qn.n2 + sep.lambda1 + 1)
        lam2 = qn.m + sep.lambda1 + Fraction(1, 2)
        return replace(sep, lambda2=lam2, N=qn.l + lam2 + Fraction(1, 2))
    sep = angular_constants(spec, qn.nu)
    lp, lm = _frac(sep.lambda_plus), _frac(sep.lambda_minus)
    if system == "parabolic":
        return replace(sep, N=qn.n1 + qn.n2 + (lm + lp) / 2 + 1)
    lam1 = qn.n + (lp + lm + 1) / 2
    return replace(sep, lambda1=lam1, N=qn.l + lam1 + Fraction(1, 2))


def bound_energy(spec: PotentialSpec, system: str, qn, c: Constants) -> EnergyLevel:
    sep = principal_number(spec, system, qn)
    if spec.name == "V2":
        omega = v2_frequency(int(sep.N), c, spec.beta1, spec.beta2)
        sep = replace(sep, omega=omega)
        return EnergyLevel(energy=-c.mass * omega ** 2 / 2, qn=qn, sep=sep, members=(qn,))
    return EnergyLevel(energy=coulomb_energy(sep.N, c), qn=qn, sep=sep, members=(qn,))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _neighbors(qn):
    for name in qn.__dataclass_fields__:
        v = getattr(qn, name)
        if name == "nu":
            if v >= 0:
                yield replace(qn, nu=v + 1)
            if v <= 0:
                yield replace(qn, nu=v - 1)
        else:
            yield replace(qn, **{name: v + 1})


def _seed(spec: PotentialSpec, system: str):
    cls = model.qn_type(spec, system)
    zero = cls(*([0] * len(cls.__dataclass_fields__)))
    if spec.name != "V4":
        return [zero]
    # lambda_phi grows with |nu| (table rows are ascending), so walking outward
    # from the first admissible angular index never meets an inadmissible one
    nus = range(0, 10_000) if spec.table is None else range(len(spec.table.lambda_phi))
    for nu in nus:
        if spec.lambda_phi_sq(nu) >= spec.k1 ** 2:
            seeds = [replace(zero, nu=nu)]
            if spec.table is None and nu > 0:
                seeds.append(replace(zero, nu=-nu))
            return seeds
    raise DomainError("no admissible angular state")


def _admissible(spec, qn) -> bool:
    if spec.name == "V2":
        return (qn.n1 + qn.n2) % 2 == 0
    if spec.name == "V4":
        if spec.table is not None and qn.nu >= len(spec.table.lambda_phi):
            return False
        return spec.lambda_phi_sq(qn.nu) >= spec.k1 ** 2
    return True


def _order_key(spec, system, qn):
    # N is monotone in every index, so it orders the search for all systems
    if spec.name == "V2":
        return Fraction(qn.n1 + qn.n2 + 1)
    return principal_number(spec, system, qn).N


def enumerate_levels(spec: PotentialSpec, system: str, c: Constants, count: int) -> list[EnergyLevel]:
    """The ``count`` lowest distinct levels with degeneracy tallies."""
    if count < 1:
        raise DomainError("count must be at least 1")
    heap, seen = [], set()
    for s in _seed(spec, system):
        heapq.heappush(heap, (_order_key(spec, system, s), s))
        seen.add(s)
    groups: dict = {}
    order: list = []
    while heap:
        key, qn = heapq.heappop(heap)
        if len(order) >= count and key > order[count - 1]:
            break
        if _admissible(spec, qn):
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(qn)
        for nb in _neighbors(qn):
            if nb in seen:
                continue
            if spec.name == "V4" and spec.table is not None and not 0 <= nb.nu < len(spec.table.lambda_phi):
                continue
            seen.add(nb)
            heapq.heappush(heap, (_order_key(spec, system, nb), nb))
    levels = []
    for key in sorted(order)[:count]:
        members = tuple(sorted(groups[key]))
        lvl = bound_energy(spec, system, members[0], c)
        levels.append(replace(lvl, degeneracy=len(members), members=members))
    return levels


def level_multiset(spec: PotentialSpec, system: str, max_quanta: int) -> list:
    """Sorted principal numbers of all states with index sum <= max_quanta.

    For the parabolic systems the index sum is n1+n2 (plus the angular
    index); for polar/spherical it is m+n or l+m (plus the angular index),
    matching the cross-system identities n1+n2 = m+n and n1+n2 = l+m.
    """
    cls = model.qn_type(spec, system)
    names = list(cls.__dataclass_fields__)
    out = []

    def rec(prefix):
        if len(prefix) == len(names):
            qn = cls(*prefix)
            if _admissible(spec, qn):
                out.append(principal_number(spec, system, qn).N)
            return
        used = sum(abs(v) for v in prefix)
        for v in range(0, max_quanta - used + 1):
            rec(prefix + [v])

    rec([])
    return sorted(out)
