"""Problem definitions: constants, potentials, coordinates and quantum numbers.

Coordinate conventions (all systems use the same ``xi``/``eta`` names):

* V1 parabolic ``(xi, eta)``, ``xi, eta > 0``:  x1 = (xi^2 - eta^2)/2, x2 = xi*eta.
  Polar ``(rho, phi)``, ``0 < phi < pi``.  Measure (xi^2 + eta^2) dxi deta.
* V2 parabolic ``(xi, eta)`` on the whole plane, same map as V1.
* V3 parabolic ``(xi, eta, phi)``: x1 = xi*eta*cos(phi), x2 = xi*eta*sin(phi),
  x3 = (xi^2 - eta^2)/2 with ``0 < phi < pi/2``.  Measure xi*eta*(xi^2+eta^2).
  Spherical ``(r, theta, phi)`` with the same ``phi`` range.
* V4 uses the V3 maps with ``0 <= phi < 2 pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, SingularityError

SIGNS = {"plus": 1, "minus": -1}


@dataclass(frozen=True)
class Constants:
    hbar: float = 1.0
    mass: float = 1.0
    alpha0: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "alpha0"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")

    @property
    def bohr_radius(self) -> float:
        return self.hbar ** 2 / (self.mass * self.alpha0)


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

class PotentialSpec:
    """Base class of the four potential families."""

    name: str = ""
    systems: tuple = ()

    def check_system(self, system: str) -> None:
        if system not in self.systems:
            raise DomainError(f"{self.name} is not solved in {system!r} coordinates; "
                              f"choose from {', '.join(self.systems)}")


def _check_branch(k: float, sign: str, label: str) -> None:
    if sign not in SIGNS:
        raise DomainError(f"{label} sign must be 'plus' or 'minus'")
    if not k > 0:
        raise DomainError(f"{label} must be positive")
    if sign == "minus" and not k < 1:
        raise DomainError(f"the minus branch of {label} needs {label} < 1")


@dataclass(frozen=True)
class V1(PotentialSpec):
    """2D Coulomb plus half-line barriers, separable in parabolic and polar."""

    k1: float
    k2: float
    s1: str = "plus"
    s2: str = "plus"
    name = "V1"
    systems = ("parabolic", "polar")

    def __post_init__(self):
        _check_branch(self.k1, self.s1, "k1")
        _check_branch(self.k2, self.s2, "k2")

    @property
    def a1(self) -> float:
        """Signed index +-k1."""
        return SIGNS[self.s1] * self.k1

    @property
    def a2(self) -> float:
        return SIGNS[self.s2] * self.k2


@dataclass(frozen=True)
class V2(PotentialSpec):
    """2D Coulomb plus square-root terms, separable in shifted parabolic coordinates."""

    beta1: float
    beta2: float
    name = "V2"
    systems = ("parabolic",)

    def __post_init__(self):
        if not (math.isfinite(self.beta1) and math.isfinite(self.beta2)):
            raise DomainError("beta1 and beta2 must be finite")


@dataclass(frozen=True)
class V3(PotentialSpec):
    """3D Coulomb plus inverse-square barriers in x1 and x2."""

    k1: float
    k2: float
    s1: str = "plus"
    s2: str = "plus"
    name = "V3"
    systems = ("parabolic", "spherical")

    def __post_init__(self):
        _check_branch(self.k1, self.s1, "k1")
        _check_branch(self.k2, self.s2, "k2")

    @property
    def a1(self) -> float:
        return SIGNS[self.s1] * self.k1

    @property
    def a2(self) -> float:
        return SIGNS[self.s2] * self.k2


@dataclass(frozen=True)
class AngularTable:
    """Numerically supplied eigenpairs of -d^2/dphi^2 + F(tan phi) on [0, 2 pi).

    ``values[j]`` samples the normalized eigenfunction with eigenvalue
    ``lambda_phi[j]**2`` on the periodic grid ``phi`` (endpoint excluded).
    """

    lambda_phi: tuple
    phi: tuple
    values: tuple
    f_values: tuple = ()

    def __post_init__(self):
        if len(self.lambda_phi) != len(self.values):
            raise DomainError("one eigenfunction sample per eigenvalue is required")
        if len(self.phi) < 8:
            raise DomainError("angular table needs at least 8 grid points")
        lam = list(self.lambda_phi)
        if any(v < 0 for v in lam) or lam != sorted(lam):
            raise DomainError("lambda_phi must be non-negative and ascending")

    def _spline(self, j: int) -> CubicSpline:
        phi = np.asarray(self.phi, dtype=float)
        vals = np.asarray(self.values[j], dtype=float)
        return CubicSpline(np.append(phi, 2 * math.pi), np.append(vals, vals[0]), bc_type="periodic")

    def __call__(self, j: int, phi):
        return self._spline(j)(np.mod(phi, 2 * math.pi))

    def second_derivative(self, j: int, phi):
        return self._spline(j)(np.mod(phi, 2 * math.pi), 2)

    def f_at(self, phi):
        if len(self.f_values) == 0:
            raise DomainError("table carries no samples of F")
        grid = np.asarray(self.phi, dtype=float)
        vals = np.asarray(self.f_values, dtype=float)
        spl = CubicSpline(np.append(grid, 2 * math.pi), np.append(vals, vals[0]), bc_type="periodic")
        return spl(np.mod(phi, 2 * math.pi))


@dataclass(frozen=True)
class V4(PotentialSpec):
    """Coulomb plus k1^2 x3/r and F(x2/x1) over the cylinder radius squared.

    ``gamma`` selects the Hartmann case F = gamma^2; ``table`` supplies the
    angular eigenpairs for any other F.  Exactly one of them is set.
    """

    k1: float
    gamma: float | None = None
    table: AngularTable | None = None
    name = "V4"
    systems = ("parabolic", "spherical")

    def __post_init__(self):
        if not self.k1 >= 0:
            raise DomainError("k1 must be non-negative")
        if self.gamma is None and self.table is None:
            object.__setattr__(self, "gamma", 0.0)
        if (self.gamma is None) == (self.table is None):
            raise DomainError("V4 needs exactly one of gamma (constant F) or an angular table")

    def lambda_phi_sq(self, nu: int) -> float:
        if self.table is None:
            return float(nu) ** 2 + self.gamma ** 2
        if not 0 <= nu < len(self.table.lambda_phi):
            raise DomainError(f"angular index {nu} outside the supplied table")
        return float(self.table.lambda_phi[nu]) ** 2

    def azimuthal(self, nu: int, phi):
        """Normalized azimuthal factor Psi_{lambda_phi}(phi)."""
        if self.table is None:
            return np.exp(1j * nu * np.asarray(phi, dtype=float)) / math.sqrt(2 * math.pi)
        return self.table(nu, phi)

    def f_value(self, phi) -> float:
        if self.table is None:
            return self.gamma ** 2
        return float(self.table.f_at(phi))


# ---------------------------------------------------------------------------
# quantum numbers and continuum labels
# ---------------------------------------------------------------------------

def _nonneg(*vals):
    for v in vals:
        if int(v) != v or v < 0:
            raise DomainError("quantum numbers must be non-negative integers")


@dataclass(frozen=True, order=True)
class Parabolic2D:
    n1: int
    n2: int

    def __post_init__(self):
        _nonneg(self.n1, self.n2)


@dataclass(frozen=True, order=True)
class Polar2D:
    m: int
    n: int

    def __post_init__(self):
        _nonneg(self.m, self.n)


@dataclass(frozen=True, order=True)
class Parabolic3D:
    n1: int
    n2: int
    n: int

    def __post_init__(self):
        _nonneg(self.n1, self.n2, self.n)


@dataclass(frozen=True, order=True)
class Spherical3D:
    l: int
    m: int
    n: int

    def __post_init__(self):
        _nonneg(self.l, self.m, self.n)


@dataclass(frozen=True, order=True)
class V4Parabolic:
    n1: int
    n2: int
    nu: int

    def __post_init__(self):
        _nonneg(self.n1, self.n2)
        if int(self.nu) != self.nu:
            raise DomainError("nu must be an integer")


@dataclass(frozen=True, order=True)
class V4Spherical:
    l: int
    n: int
    nu: int

    def __post_init__(self):
        _nonneg(self.l, self.n)
        if int(self.nu) != self.nu:
            raise DomainError("nu must be an integer")


QN_TYPES = {
    ("V1", "parabolic"): Parabolic2D,
    ("V1", "polar"): Polar2D,
    ("V2", "parabolic"): Parabolic2D,
    ("V3", "parabolic"): Parabolic3D,
    ("V3", "spherical"): Spherical3D,
    ("V4", "parabolic"): V4Parabolic,
    ("V4", "spherical"): V4Spherical,
}


def qn_type(spec: PotentialSpec, system: str):
    spec.check_system(system)
    return QN_TYPES[(spec.name, system)]


@dataclass(frozen=True)
class ContinuumLabels:
    """Momentum ``p`` and, for parabolic systems, separation parameter ``sep``."""

    p: float
    sep: float = 0.0

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError("continuum momentum must be positive")

    def energy(self, c: Constants) -> float:
        return c.hbar ** 2 * self.p ** 2 / (2 * c.mass)


@dataclass(frozen=True)
class DerivedScales:
    omega: float
    p: float
    a: float


def derived_scales(c: Constants, E: float) -> DerivedScales:
    """Frequency, Coulomb parameter and Bohr radius at energy E < 0."""
    if not E < 0:
        raise DomainError("derived scales need E < 0")
    omega = math.sqrt(-2 * E / c.mass)
    return DerivedScales(omega=omega, p=-c.alpha0 / (c.hbar * omega), a=c.bohr_radius)


# ---------------------------------------------------------------------------
# potential values and coordinate maps
# ---------------------------------------------------------------------------

def ks_map(u: Sequence[float]) -> np.ndarray:
    """Kustaanheimo-Stiefel map R^4 -> R^3."""
    u1, u2, u3, u4 = (float(v) for v in u)
    a = np.array([
        [u3, u4, u1, u2],
        [-u4, u3, u2, -u1],
        [-u1, -u2, u3, u4],
    ])
    return a @ np.array([u1, u2, u3, u4])


def _barrier(coef: float, denom: float, what: str) -> float:
    if coef == 0:
        return 0.0
    if denom == 0:
        raise SingularityError(f"potential is singular on {what}")
    return coef / denom


def potential_value(spec: PotentialSpec, c: Constants, point: Sequence[float]) -> float:
    """Potential energy at a Cartesian point."""
    pt = [float(v) for v in point]
    scale = c.hbar ** 2 / c.mass
    if spec.name in ("V1", "V2"):
        if len(pt) != 2:
            raise DomainError(f"{spec.name} takes a 2D point")
        x1, x2 = pt
        rho = math.hypot(x1, x2)
        if rho == 0:
            raise SingularityError("potential is singular at the origin")
        if spec.name == "V1":
            b1 = _barrier(spec.k1 ** 2 - 0.25, rho + x1, "the negative x1 half-line")
            b2 = _barrier(spec.k2 ** 2 - 0.25, rho - x1, "the positive x1 half-line")
            return -c.alpha0 / rho + scale / (4 * rho) * (b1 + b2)
        return -c.alpha0 / rho + (spec.beta1 * math.sqrt(rho + x1) + spec.beta2 * math.sqrt(max(rho - x1, 0.0))) / rho
    if len(pt) != 3:
        raise DomainError(f"{spec.name} takes a 3D point")
    x1, x2, x3 = pt
    r = math.sqrt(x1 * x1 + x2 * x2 + x3 * x3)
    if r == 0:
        raise SingularityError("potential is singular at the origin")
    if spec.name == "V3":
        b1 = _barrier(spec.k1 ** 2 - 0.25, x1 * x1, "the plane x1 = 0")
        b2 = _barrier(spec.k2 ** 2 - 0.25, x2 * x2, "the plane x2 = 0")
        return -c.alpha0 / r + scale / 2 * (b1 + b2)
    cyl = x1 * x1 + x2 * x2
    if cyl == 0:
        raise SingularityError("potential is singular on the x3 axis")
    phi = math.atan2(x2, x1)
    return -c.alpha0 / r + scale / (2 * cyl) * (spec.k1 ** 2 * x3 / r + spec.f_value(phi))


def to_cartesian(spec: PotentialSpec, system: str, coords: Sequence[float]) -> tuple:
    spec.check_system(system)
    q = [float(v) for v in coords]
    if spec.name in ("V1", "V2"):
        if system == "parabolic":
            xi, eta = q
            return ((xi * xi - eta * eta) / 2, xi * eta)
        rho, phi = q
        return (rho * math.cos(phi), rho * math.sin(phi))
    if system == "parabolic":
        xi, eta, phi = q
        s = xi * eta
        return (s * math.cos(phi), s * math.sin(phi), (xi * xi - eta * eta) / 2)
    r, theta, phi = q
    return (r * math.sin(theta) * math.cos(phi), r * math.sin(theta) * math.sin(phi), r * math.cos(theta))


def parabolic_from_polar(rho: float, phi: float) -> tuple:
    return (math.sqrt(2 * rho) * math.cos(phi / 2), math.sqrt(2 * rho) * math.sin(phi / 2))


def polar_from_parabolic(xi: float, eta: float) -> tuple:
    return ((xi * xi + eta * eta) / 2, 2 * math.atan2(eta, xi))
