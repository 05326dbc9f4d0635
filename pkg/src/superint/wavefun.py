"""Bound and continuum wave functions, residual and normalization checks.

Coordinates per system (all lengths in the units of ``Constants``):

* V1/V2 parabolic ``(xi, eta)``: x1 = (xi^2 - eta^2)/2, x2 = xi eta.
  V1 uses xi, eta > 0; V2 uses the whole plane (xi, eta) in R^2.
* V1 polar ``(rho, phi)`` with phi in (0, pi).
* V3/V4 parabolic ``(xi, eta, phi)``: x1 + i x2 = xi eta e^{i phi},
  x3 = (xi^2 - eta^2)/2.  phi in (0, pi/2) for V3, [0, 2 pi) for V4.
* V3/V4 spherical ``(r, theta, phi)``.

Bound states are normalized with the coordinate measure of each system;
continuum states carry the published normalization constants.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import spectra, specfun
from .errors import DomainError
from .model import Constants, ContinuumLabels, PotentialSpec

#: Scale of the even/odd parabolic cylinder functions relative to the
#: unit-normalized ``specfun.pcf`` (E0(0) = 1, E1'(0) = 1).
PCF_SCALE = specfun.BUCHHOLZ_SCALE
RESIDUAL_EPS = 1e-30

# continuum angular labels per (potential, system)
_ANGULAR_LABELS = {
    ("V1", "parabolic"): (),
    ("V1", "polar"): ("n",),
    ("V2", "parabolic"): (),
    ("V3", "parabolic"): ("n",),
    ("V3", "spherical"): ("m", "n"),
    ("V4", "parabolic"): ("nu",),
    ("V4", "spherical"): ("n", "nu"),
}


@dataclass(frozen=True)
class StateSpec:
    """A bound state (``qn`` set) or a continuum state (``labels`` set).

    Continuum states also take the integer ``angular`` labels: ``(n,)`` for
    V1 polar and V3 parabolic, ``(m, n)`` for V3 spherical, ``(nu,)`` for V4
    parabolic and ``(n, nu)`` for V4 spherical.
    """

    spec: PotentialSpec
    system: str
    qn: object = None
    labels: ContinuumLabels | None = None
    angular: tuple = ()
    c: Constants = field(default_factory=Constants)

    def __post_init__(self):
        self.spec.check_system(self.system)
        if (self.qn is None) == (self.labels is None):
            raise DomainError("give either bound quantum numbers or continuum labels")
        if self.qn is not None:
            spectra.principal_number(self.spec, self.system, self.qn)
            return
        want = _ANGULAR_LABELS[(self.spec.name, self.system)]
        ang = tuple(self.angular)
        if len(ang) != len(want) or any(int(v) != v for v in ang):
            raise DomainError(f"{self.spec.name}/{self.system} continuum needs integer labels {want}")
        if any(v < 0 for name, v in zip(want, ang) if name != "nu"):
            raise DomainError("angular labels must be non-negative")
        if "nu" in want:
            spectra.angular_constants(self.spec, ang[want.index("nu")])

    @property
    def kind(self) -> str:
        return "bound" if self.qn is not None else "continuum"

    @property
    def energy(self) -> float:
        if self.qn is not None:
            return spectra.bound_energy(self.spec, self.system, self.qn, self.c).energy
        return self.labels.energy(self.c)

    @property
    def dim(self) -> int:
        return 2 if self.spec.name in ("V1", "V2") else 3


def bound_state(spec, system, qn, c=None) -> StateSpec:
    return StateSpec(spec, system, qn=qn, c=c or Constants())


def continuum_state(spec, system, labels, angular=(), c=None) -> StateSpec:
    return StateSpec(spec, system, labels=labels, angular=tuple(angular), c=c or Constants())


# ---------------------------------------------------------------------------
# angular functions
# ---------------------------------------------------------------------------

def _angular_log_norm(a, b, n):
    return 0.5 * (math.log(2 * (2 * n + a + b + 1)) + math.lgamma(n + 1) + math.lgamma(n + a + b + 1)
                  - math.lgamma(n + a + 1) - math.lgamma(n + b + 1))


def angular_fn(a: float, b: float, n: int, phi):
    """Normalized Phi_n^(a,b)(phi) on (0, pi/2).

    sin^(1/2+a) cos^(1/2+b) P_n^(a,b)(cos 2 phi), with unit L2 norm on
    (0, pi/2).  At the endpoints the limit is returned.
    """
    if not (a > -1 and b > -1):
        raise DomainError("angular indices must exceed -1")
    if int(n) != n or n < 0:
        raise DomainError("n must be a non-negative integer")
    phi = np.asarray(phi, dtype=float)
    if np.any((phi < 0) | (phi > math.pi / 2)):
        raise DomainError("phi must lie in [0, pi/2]")
    s, co = np.sin(phi), np.cos(phi)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (math.exp(_angular_log_norm(a, b, n)) * s ** (0.5 + a) * co ** (0.5 + b)
               * specfun.jacobi(n, a, b, np.cos(2 * phi)))
    val = np.where((phi == 0) & (a > -0.5), 0.0, val)
    val = np.where((phi == math.pi / 2) & (b > -0.5), 0.0, val)
    return val if val.ndim else float(val)


def _legendre_theta(m: int, lam1: float, theta):
    """Unit-normalized (sin theta d theta) P_{m+lam1}^{-lam1}(cos theta)."""
    nu = m + lam1
    norm = 0.5 * (math.log(nu + 0.5) + math.lgamma(m + 2 * lam1 + 1) - math.lgamma(m + 1))
    theta = np.asarray(theta, dtype=float)
    # tensor grids repeat theta values; evaluate each distinct one once
    uniq, inv = np.unique(theta.ravel(), return_inverse=True)
    vals = np.array([specfun.legendre_p(nu, -lam1, math.cos(t)) for t in uniq])
    return math.exp(norm) * vals[inv].reshape(theta.shape)


# ---------------------------------------------------------------------------
# bound states
# ---------------------------------------------------------------------------

def _laguerre_factor(n, alpha, x):
    """x^(alpha/2) e^(-x/2) L_n^alpha(x) without the normalization."""
    return x ** (alpha / 2) * np.exp(-x / 2) * specfun.laguerre(n, alpha, x)


def _hermite_fn(n, x):
    """Hermite function normalized on the real line in the variable x."""
    log_norm = -0.25 * math.log(math.pi) - 0.5 * (n * math.log(2) + math.lgamma(n + 1))
    return math.exp(log_norm) * np.exp(-x * x / 2) * specfun.hermite(n, x)


def _bound_eval(state: StateSpec, coords):
    spec, c, qn = state.spec, state.c, state.qn
    sep = spectra.principal_number(spec, state.system, qn)
    a = c.bohr_radius
    N = float(sep.N)
    aN = a * N
    name, system = spec.name, state.system

    if name == "V1" and system == "parabolic":
        xi, eta = coords
        k1, k2 = spec.a1, spec.a2
        u, v = xi * xi / aN, eta * eta / aN
        log_c = 0.5 * (math.log(2 / (a * a * N ** 3)) + math.lgamma(qn.n1 + 1) + math.lgamma(qn.n2 + 1)
                       - math.lgamma(qn.n1 + k1 + 1) - math.lgamma(qn.n2 + k2 + 1))
        return math.exp(log_c) * (u ** 0.25 * _laguerre_factor(qn.n1, k1, u)
                                  * v ** 0.25 * _laguerre_factor(qn.n2, k2, v))

    if name == "V1":
        rho, phi = coords
        lam = float(sep.lam)
        x = 2 * rho / aN
        log_c = 0.5 * (math.lgamma(qn.m + 1) - math.log(a * a * N ** 3) - math.lgamma(qn.m + 2 * lam + 1))
        radial = math.exp(log_c) * _laguerre_factor(qn.m, 2 * lam, x)
        return radial * angular_fn(spec.a2, spec.a1, qn.n, phi / 2)

    if name == "V2":
        xi, eta = coords
        n_tot = qn.n1 + qn.n2 + 1
        w = spectra.v2_frequency(n_tot, c, spec.beta1, spec.beta2)
        E = -c.mass * w * w / 2
        s = math.sqrt(c.mass * w / c.hbar)
        A, _ = spectra._cubic_coeffs(n_tot, c, spec.beta1, spec.beta2)
        slope = 3 * w * w - 2 * A * w
        # 1/norm^2 = <xi^2 + eta^2> = n_tot hbar/(M w) + (b1^2+b2^2)/E^2 = n_tot hbar slope / (M w^3)
        norm = math.sqrt(c.mass * w ** 3 / (n_tot * c.hbar * slope))
        xt, et = xi - spec.beta1 / E, eta - spec.beta2 / E
        return norm * s * _hermite_fn(qn.n1, s * xt) * _hermite_fn(qn.n2, s * et)

    if system == "parabolic":
        xi, eta, phi = coords
        if name == "V3":
            lm = lp = float(sep.lambda1)
            ang = angular_fn(spec.a2, spec.a1, qn.n, phi)
        else:
            lm, lp = sep.lambda_minus, sep.lambda_plus
            ang = spec.azimuthal(qn.nu, phi)
        u, v = xi * xi / aN, eta * eta / aN
        log_c = 0.5 * (math.log(2 / (a ** 3 * N ** 4)) + math.lgamma(qn.n1 + 1) + math.lgamma(qn.n2 + 1)
                       - math.lgamma(qn.n1 + lm + 1) - math.lgamma(qn.n2 + lp + 1))
        return math.exp(log_c) * _laguerre_factor(qn.n1, lm, u) * _laguerre_factor(qn.n2, lp, v) * ang

    r, theta, phi = coords
    if name == "V3":
        lam1 = float(sep.lambda1)
        index = float(sep.lambda2)
        ang = _legendre_theta(qn.m, lam1, theta) * angular_fn(spec.a2, spec.a1, qn.n, phi)
    else:
        index = float(sep.lambda1)
        ang = (angular_fn(sep.lambda_plus, sep.lambda_minus, qn.n, theta / 2) / np.sqrt(2 * np.sin(theta))
               * spec.azimuthal(qn.nu, phi))
    x = 2 * r / aN
    # (2r/aN)^(index - 1/2) e^(-r/aN) L_l^(2 index)(2r/aN)
    log_c = 0.5 * (math.log(4 / (a ** 3 * N ** 4)) + math.lgamma(qn.l + 1) - math.lgamma(qn.l + 2 * index + 1))
    radial = math.exp(log_c) * x ** -0.5 * _laguerre_factor(qn.l, 2 * index, x)
    return radial * ang


# ---------------------------------------------------------------------------
# continuum states
# ---------------------------------------------------------------------------

def _abs_gamma(z) -> float:
    return math.exp(specfun.log_gamma(z).real)


def _parabolic_factor(p, sep_sum, mu, x):
    """M_{kappa, mu}(-i p x^2) with kappa = (i/2p) sep_sum.

    Solves f'' = [(4 mu^2 - 1/4)/x^2 - p^2 x^2 - 2 sep_sum] f after division
    by sqrt(x).
    """
    kappa = 1j * sep_sum / (2 * p)
    return specfun.whittaker_m(kappa, mu, -1j * p * x * x)


def _coulomb_factor(k, a, mu, r):
    """M_{i/(ak), mu}(-2ikr): regular Coulomb wave in r at momentum k."""
    return specfun.whittaker_m(1j / (a * k), mu, -2j * k * r)


def _pcf_pair(nu, z):
    return (PCF_SCALE[0] * specfun.pcf("even", nu, z), PCF_SCALE[1] * specfun.pcf("odd", nu, z))


def _continuum_point(state: StateSpec, point) -> complex:
    spec, c, lab = state.spec, state.c, state.labels
    name, system = spec.name, state.system
    a = c.bohr_radius
    k = lab.p
    ang = state.angular

    if name == "V1" and system == "parabolic":
        xi, eta = point
        m1, m2 = spec.a1 / 2, spec.a2 / 2
        y1, y2 = (1 / a + lab.sep) / (2 * k), (1 / a - lab.sep) / (2 * k)
        amp = (_abs_gamma(0.5 + m1 + 1j * y1) * _abs_gamma(0.5 + m2 + 1j * y2)
               / (2 * math.pi * math.gamma(1 + spec.a1) * math.gamma(1 + spec.a2) * math.sqrt(xi * eta))
               * math.exp(math.pi / (2 * a * k)) / math.sqrt(k))
        return amp * _parabolic_factor(k, 1 / a + lab.sep, m1, xi) * _parabolic_factor(k, 1 / a - lab.sep, m2, eta)

    if name == "V1":
        rho, phi = point
        n, = ang
        lam = float(spectra.angular_constants(spec, n).lam)
        kap = 1j / (a * k)
        amp = (math.sqrt(c.mass / (4 * math.pi * c.hbar ** 2 * k)) * _abs_gamma(0.5 + lam - kap)
               / math.gamma(2 * lam + 1) * math.exp(math.pi / (2 * a * k)) / math.sqrt(rho))
        return amp * _coulomb_factor(k, a, lam, rho) * angular_fn(spec.a2, spec.a1, n, phi / 2)

    if name == "V2":
        xi, eta = point
        E = lab.energy(c)
        b2 = spec.beta1 ** 2 + spec.beta2 ** 2
        inv_at = c.mass * (c.alpha0 - c.mass * b2 / (c.hbar ** 2 * k * k)) / c.hbar ** 2
        z_scale = cmath.exp(-0.25j * math.pi) * math.sqrt(2 * k)
        s1, s2 = inv_at + lab.sep, inv_at - lab.sep
        e1 = _pcf_pair(-0.5 + 1j * s1 / k, z_scale * (xi - spec.beta1 / E))
        e2 = _pcf_pair(-0.5 + 1j * s2 / k, z_scale * (eta - spec.beta2 / E))
        g1 = (specfun.log_gamma(0.25 + 0.5j * s1 / k), specfun.log_gamma(0.75 + 0.5j * s1 / k))
        g2 = (specfun.log_gamma(0.25 + 0.5j * s2 / k), specfun.log_gamma(0.75 + 0.5j * s2 / k))
        pref = math.exp(math.pi * inv_at / (2 * k)) / (4 * math.pi * math.sqrt(2))
        # parity-matched sum of the two-component products
        return pref * sum(cmath.exp(g1[j] + g2[j]) * e1[j] * e2[j] for j in (0, 1))

    if system == "parabolic":
        xi, eta, phi = point
        y1, y2 = (1 / a + lab.sep) / (2 * k), (1 / a - lab.sep) / (2 * k)
        if name == "V3":
            n, = ang
            lm = lp = float(spectra.angular_constants(spec, n).lambda1)
            gam = _abs_gamma(0.5 + lm / 2 + 1j * y1) * _abs_gamma(0.5 + lm / 2 + 1j * y2) / math.gamma(lm + 1) ** 2
            angular = angular_fn(spec.a2, spec.a1, n, phi)
        else:
            nu, = ang
            sep = spectra.angular_constants(spec, nu)
            lm, lp = sep.lambda_minus, sep.lambda_plus
            gam = (_abs_gamma(0.5 * (1 + lp) + 1j * y1) * _abs_gamma(0.5 * (1 + lm) + 1j * y2)
                   / (math.gamma(1 + lp) * math.gamma(1 + lm)))
            angular = spec.azimuthal(nu, phi)
        amp = gam / (2 * math.pi * xi * eta) * math.exp(math.pi / (2 * a * k)) / math.sqrt(k)
        return (amp * _parabolic_factor(k, 1 / a + lab.sep, lm / 2, xi)
                * _parabolic_factor(k, 1 / a - lab.sep, lp / 2, eta) * angular)

    r, theta, phi = point
    kap = 1j / (a * k)
    if name == "V3":
        m, n = ang
        lam1 = float(spectra.angular_constants(spec, n).lambda1)
        index = m + lam1 + 0.5
        # angular constant carried as published (see notes on the bound-state Legendre factor)
        const = math.sqrt((m + lam1 + 0.5) * math.gamma(m + lam1 + 1) / math.factorial(m) / (2 * math.pi))
        angular = (const * specfun.legendre_p(m + lam1, -lam1, math.cos(theta))
                   * angular_fn(spec.a2, spec.a1, n, phi))
    else:
        n, nu = ang
        sep = spectra.angular_constants(spec, nu)
        index = n + (sep.lambda_plus + sep.lambda_minus + 1) / 2
        angular = (angular_fn(sep.lambda_plus, sep.lambda_minus, n, theta / 2) / math.sqrt(2 * math.sin(theta))
                   * spec.azimuthal(nu, phi))
    amp = _abs_gamma(0.5 + index - kap) / math.gamma(2 * index + 1) * math.exp(math.pi / (2 * a * k)) / r
    return amp * _coulomb_factor(k, a, index, r) * angular


# ---------------------------------------------------------------------------
# public evaluation
# ---------------------------------------------------------------------------

_DOMAINS = {
    # per coordinate: (lower, upper) of the open domain; None = unbounded
    ("V1", "parabolic"): ((0, None), (0, None)),
    ("V1", "polar"): ((0, None), (0, math.pi)),
    ("V2", "parabolic"): ((None, None), (None, None)),
    ("V3", "parabolic"): ((0, None), (0, None), (0, math.pi / 2)),
    ("V3", "spherical"): ((0, None), (0, math.pi), (0, math.pi / 2)),
    ("V4", "parabolic"): ((0, None), (0, None), (0, 2 * math.pi)),
    ("V4", "spherical"): ((0, None), (0, math.pi), (0, 2 * math.pi)),
}


def check_point(state: StateSpec, point) -> tuple:
    dom = _DOMAINS[(state.spec.name, state.system)]
    pt = tuple(float(v) for v in point)
    if len(pt) != len(dom):
        raise DomainError(f"{state.spec.name}/{state.system} points have {len(dom)} coordinates")
    for v, (lo, hi) in zip(pt, dom):
        if not math.isfinite(v) or (lo is not None and v <= lo) or (hi is not None and v >= hi):
            if state.spec.name == "V4" and hi == 2 * math.pi and v == 0.0:
                continue
            raise DomainError(f"point {pt} lies outside the open coordinate domain")
    return pt


def evaluate(state: StateSpec, coords) -> np.ndarray:
    """Vectorized wave function on broadcastable coordinate arrays."""
    coords = [np.asarray(x, dtype=float) for x in coords]
    if state.kind == "bound":
        return np.asarray(_bound_eval(state, coords), dtype=complex)
    shape = np.broadcast(*coords).shape
    flat = [np.broadcast_to(x, shape).ravel() for x in coords]
    out = np.array([_continuum_point(state, pt) for pt in zip(*flat)], dtype=complex)
    return out.reshape(shape)


def bound_wavefunction(state: StateSpec, point) -> complex:
    if state.kind != "bound":
        raise DomainError("state is not a bound state")
    pt = check_point(state, point)
    return complex(evaluate(state, [np.array(v) for v in pt]))


def continuum_wavefunction(state: StateSpec, point) -> complex:
    if state.kind != "continuum":
        raise DomainError("state is not a continuum state")
    return complex(_continuum_point(state, check_point(state, point)))


def wavefunction(state: StateSpec, point) -> complex:
    if state.kind == "bound":
        return bound_wavefunction(state, point)
    return continuum_wavefunction(state, point)


# ---------------------------------------------------------------------------
# Hamiltonian in each coordinate system
# ---------------------------------------------------------------------------

def potential(state: StateSpec, coords):
    """Potential energy on coordinate arrays, written in the separating coordinates."""
    spec, c = state.spec, state.c
    h2m = c.hbar ** 2 / (2 * c.mass)
    name, system = spec.name, state.system
    if name == "V2":
        xi, eta = coords
        return (2 * spec.beta1 * xi + 2 * spec.beta2 * eta - 2 * c.alpha0) / (xi * xi + eta * eta)
    if name == "V1":
        b1, b2 = spec.k1 ** 2 - 0.25, spec.k2 ** 2 - 0.25
        if system == "parabolic":
            xi, eta = coords
            return (-2 * c.alpha0 + h2m * (b1 / xi ** 2 + b2 / eta ** 2)) / (xi * xi + eta * eta)
        rho, phi = coords
        return -c.alpha0 / rho + h2m / (4 * rho * rho) * (b1 / np.cos(phi / 2) ** 2 + b2 / np.sin(phi / 2) ** 2)
    if system == "parabolic":
        xi, eta, phi = coords
        r = (xi * xi + eta * eta) / 2
        cyl2 = (xi * eta) ** 2
        cos_t = (xi * xi - eta * eta) / (xi * xi + eta * eta)
    else:
        r, theta, phi = coords
        cyl2 = (r * np.sin(theta)) ** 2
        cos_t = np.cos(theta)
    if name == "V3":
        b1, b2 = spec.k1 ** 2 - 0.25, spec.k2 ** 2 - 0.25
        return -c.alpha0 / r + h2m / cyl2 * (b1 / np.cos(phi) ** 2 + b2 / np.sin(phi) ** 2)
    f = spec.gamma ** 2 if spec.table is None else spec.table.f_at(phi)
    return -c.alpha0 / r + h2m / cyl2 * (spec.k1 ** 2 * cos_t + f)


def _fd(fun, coords, axis, h):
    """4th-order central first and second derivatives along one axis."""
    def shifted(m):
        pts = list(coords)
        pts[axis] = coords[axis] + m * h
        return fun(pts)
    fp2, fp1, f0, fm1, fm2 = (shifted(m) for m in (2, 1, 0, -1, -2))
    d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    return f0, d1, d2


def _laplacian(state, fun, coords, steps):
    name, system = state.spec.name, state.system
    parts = [_fd(fun, coords, i, h) for i, h in enumerate(steps)]
    f0 = parts[0][0]
    if name in ("V1", "V2") and system == "parabolic":
        xi, eta = coords
        return f0, (parts[0][2] + parts[1][2]) / (xi * xi + eta * eta)
    if system == "polar":
        rho, _ = coords
        return f0, parts[0][2] + parts[0][1] / rho + parts[1][2] / (rho * rho)
    if system == "parabolic":
        xi, eta, _ = coords
        radial = parts[0][2] + parts[0][1] / xi + parts[1][2] + parts[1][1] / eta
        return f0, radial / (xi * xi + eta * eta) + parts[2][2] / (xi * eta) ** 2
    r, theta, _ = coords
    s = np.sin(theta)
    return f0, (parts[0][2] + 2 * parts[0][1] / r
                + (parts[1][2] + np.cos(theta) / s * parts[1][1]) / (r * r)
                + parts[2][2] / (r * s) ** 2)


def natural_scales(state: StateSpec) -> tuple:
    """Characteristic size of each coordinate (lengths, sqrt-lengths or angles)."""
    c = state.c
    if state.kind == "bound":
        N = float(spectra.principal_number(state.spec, state.system, state.qn).N)
        L = c.bohr_radius * N
    else:
        L = 1 / state.labels.p
    if state.system == "parabolic":
        rest = (1.0,) if state.dim == 3 else ()
        return (math.sqrt(L), math.sqrt(L)) + rest
    return (L,) + (1.0,) * (state.dim - 1)


def _local_steps(state: StateSpec, coords, rel_step, edge_frac):
    """Per-point steps: a fraction of the natural scale, shrunk near the
    singular edges of each coordinate so that stencils stay inside."""
    dom = _DOMAINS[(state.spec.name, state.system)]
    steps = []
    for x, (lo, hi), s in zip(coords, dom, natural_scales(state)):
        step = np.full(np.shape(x), rel_step * s)
        if lo is not None and not (state.spec.name == "V4" and hi == 2 * math.pi):
            room = x - lo if hi is None else np.minimum(x - lo, hi - x)
            step = np.minimum(step, edge_frac * room)
        steps.append(step)
    return steps


def schrodinger_residual(state: StateSpec, coords, rel_step: float = 0.04, edge_frac: float = 0.1):
    """|(H - E) psi| and |psi| on coordinate arrays.

    The Laplacian uses 4th-order central differences at steps h, h/2, h/4,
    combined by two Richardson steps (error terms h^4 and h^6).
    """
    coords = [np.asarray(x, dtype=float) for x in np.broadcast_arrays(*coords)]
    steps = _local_steps(state, coords, rel_step, edge_frac)
    fun = lambda pts: evaluate(state, pts)
    psi, d0 = _laplacian(state, fun, coords, steps)
    d1 = _laplacian(state, fun, coords, [h / 2 for h in steps])[1]
    d2 = _laplacian(state, fun, coords, [h / 4 for h in steps])[1]
    r0, r1 = (16 * d1 - d0) / 15, (16 * d2 - d1) / 15
    lap = (64 * r1 - r0) / 63
    c = state.c
    h_psi = -c.hbar ** 2 / (2 * c.mass) * lap + potential(state, coords) * psi
    return np.abs(h_psi - state.energy * psi), np.abs(psi)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationGrid:
    """Interior sample points for residual checks.

    ``points`` per coordinate, each spread over ``spread`` natural scales
    (lengths) or over the open angular interval.  The default is a
    deterministic low-discrepancy set of ``count`` points.
    """

    count: int = 20
    spread: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.count < 1 or not self.spread > 0:
            raise DomainError("grid needs count >= 1 and a positive spread")

    def points(self, state: StateSpec) -> list[np.ndarray]:
        dom = _DOMAINS[(state.spec.name, state.system)]
        scales = natural_scales(state)
        gen = np.random.default_rng(self.seed)
        u = (np.arange(self.count)[:, None] + gen.random((1, len(dom)))) / self.count
        # decorrelate the axes with a fixed permutation per axis
        cols = []
        for j, ((lo, hi), s) in enumerate(zip(dom, scales)):
            t = u[gen.permutation(self.count), j]
            if hi is not None:
                cols.append(lo + (hi - lo) * (0.05 + 0.9 * t))
            elif lo is None:
                centre = 0.0
                if state.spec.name == "V2" and state.kind == "bound":
                    centre = (state.spec.beta1, state.spec.beta2)[j] / state.energy
                cols.append(centre + self.spread * s * (2 * t - 1))
            else:
                cols.append(self.spread * s * (0.05 + 0.95 * t))
        return cols


def residual_profile(state: StateSpec, grid: ValidationGrid | None = None):
    """Pointwise relative residual |(H - E) psi| / (|E| |psi| + eps) on the grid."""
    grid = grid or ValidationGrid()
    pts = grid.points(state)
    res, mag = schrodinger_residual(state, pts)
    return pts, res / (abs(state.energy) * mag + RESIDUAL_EPS)


@dataclass(frozen=True)
class Validation:
    residual: float
    norm: float


def validate_state(state: StateSpec, grid: ValidationGrid | None = None) -> Validation:
    _, rel = residual_profile(state, grid)
    residual = float(np.max(rel))
    norm = overlap(state, state).real if state.kind == "bound" else math.nan
    return Validation(residual, float(norm))


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------
# Every bound state is, coordinate by coordinate, a power times a Gaussian or
# exponential (or a trigonometric power) times a polynomial.  For a pair of
# states the powers and decay rates add, so a Gauss rule carrying the pair's
# weight integrates the remainder exactly once enough nodes are used.

def _rule_sq(power, rate, n):
    """Nodes/weights on (0, inf) for x^power e^(-rate x^2) poly(x^2) dx."""
    alpha = (power - 1) / 2
    t, w = special.roots_genlaguerre(n, alpha)
    x = np.sqrt(t / rate)
    return x, w * t ** (-alpha) * np.exp(t) / (2 * np.sqrt(t * rate))


def _rule_exp(power, rate, n):
    """Nodes/weights on (0, inf) for x^power e^(-rate x) poly(x) dx."""
    t, w = special.roots_genlaguerre(n, power)
    return t / rate, w * t ** (-power) * np.exp(t) / rate


def _rule_gauss(prec, centre, n):
    """Nodes/weights on R for exp(-prec (x - centre)^2 / 2) poly(x) dx."""
    t, w = special.roots_hermite(n)
    s = math.sqrt(prec / 2)
    return centre + t / s, w * np.exp(t * t) / s


def _rule_half_angle(a, b, n):
    """Nodes t in (0, pi/2) for sin^(1+a) cos^(1+b)(t) poly(cos 2t) dt."""
    x, w = special.roots_jacobi(n, a / 2, b / 2)
    t = np.arccos(x) / 2
    dt = 1 / (2 * np.sqrt(1 - x * x))
    return t, w * dt / ((1 - x) ** (a / 2) * (1 + x) ** (b / 2))


def _rule_polar_angle(lam, n):
    """Nodes on (0, pi) for sin^(1+lam)(theta) poly(cos theta) d theta."""
    x, w = special.roots_jacobi(n, lam / 2, lam / 2)
    return np.arccos(x), w / (1 - x * x) ** ((lam + 1) / 2)


def _rule_periodic(n):
    return 2 * math.pi * np.arange(n) / n, np.full(n, 2 * math.pi / n)


def _quanta(state) -> int:
    return sum(abs(int(v)) for v in vars(state.qn).values())


def _pair_rules(si: StateSpec, sj: StateSpec, n: int):
    """Per-coordinate (nodes, weights) integrating psi_i psi_j times the measure."""
    spec, system = si.spec, si.system
    name = spec.name
    seps = [spectra.principal_number(spec, system, s.qn) for s in (si, sj)]
    aN = [si.c.bohr_radius * float(sp.N) for sp in seps]
    if name == "V2":
        out = []
        for beta in (spec.beta1, spec.beta2):
            prec, moment = 0.0, 0.0
            for s in (si, sj):
                n_tot = s.qn.n1 + s.qn.n2 + 1
                w = spectra.v2_frequency(n_tot, s.c, spec.beta1, spec.beta2)
                s2 = s.c.mass * w / s.c.hbar
                prec += s2
                moment += s2 * beta / (-s.c.mass * w * w / 2)
            out.append(_rule_gauss(prec, moment / prec, n))
        return out
    if system == "parabolic":
        if name == "V1":
            rate = sum(1 / x for x in aN) / 2
            return [_rule_sq(1 + 2 * spec.a1, rate, n), _rule_sq(1 + 2 * spec.a2, rate, n)]
        if name == "V3":
            lm = [float(sp.lambda1) for sp in seps]
            lp = lm
            third = _rule_half_angle(2 * spec.a2, 2 * spec.a1, n)
        else:
            lm = [sp.lambda_minus for sp in seps]
            lp = [sp.lambda_plus for sp in seps]
            third = _rule_periodic(2 * n + 1)
        rate = sum(1 / x for x in aN) / 2
        return [_rule_sq(sum(lm) + 1, rate, n), _rule_sq(sum(lp) + 1, rate, n), third]
    rate = sum(1 / x for x in aN)
    if system == "polar":
        lam = [float(sp.lam) for sp in seps]
        t, w = _rule_half_angle(2 * spec.a2, 2 * spec.a1, n)
        return [_rule_exp(sum(lam) + 1, rate, n), (2 * t, 2 * w)]
    if name == "V3":
        index = [float(sp.lambda2) for sp in seps]
        lam1 = sum(float(sp.lambda1) for sp in seps)
        theta = _rule_polar_angle(lam1, n)
        third = _rule_half_angle(2 * spec.a2, 2 * spec.a1, n)
    else:
        index = [float(sp.lambda1) for sp in seps]
        t, w = _rule_half_angle(sum(sp.lambda_plus for sp in seps), sum(sp.lambda_minus for sp in seps), n)
        theta = (2 * t, 2 * w)
        third = _rule_periodic(2 * n + 1)
    return [_rule_exp(sum(index) + 1, rate, n), theta, third]


def measure(state: StateSpec, coords):
    """Volume element of the coordinate system."""
    system = state.system
    if system == "parabolic":
        xi, eta = coords[0], coords[1]
        base = xi * xi + eta * eta
        return base if state.dim == 2 else base * xi * eta
    if system == "polar":
        return coords[0]
    r, theta = coords[0], coords[1]
    return r * r * np.sin(theta)


def overlap(si: StateSpec, sj: StateSpec, extra_nodes: int = 8) -> complex:
    """<psi_i|psi_j> by pair-adapted Gauss quadrature (bound states, same spec/system)."""
    if si.kind != "bound" or sj.kind != "bound":
        raise DomainError("overlaps are defined for bound states only")
    if si.spec != sj.spec or si.system != sj.system or si.c != sj.c:
        raise DomainError("overlap needs states of one potential, system and unit set")
    n = _quanta(si) + _quanta(sj) + extra_nodes
    rules = _pair_rules(si, sj, n)
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    weights = np.ones_like(grids[0])
    for axis, (_, w) in enumerate(rules):
        shape = [1] * len(rules)
        shape[axis] = -1
        weights = weights * w.reshape(shape)
    vals = np.conj(evaluate(si, grids)) * evaluate(sj, grids) * measure(si, grids)
    return complex(np.sum(weights * vals))


def gram_matrix(states) -> np.ndarray:
    states = list(states)
    g = np.empty((len(states), len(states)), dtype=complex)
    for i, si in enumerate(states):
        for j in range(i, len(states)):
            g[i, j] = overlap(si, states[j])
            g[j, i] = np.conj(g[i, j])
    return g


def shipped_states(spec: PotentialSpec, system: str, c: Constants | None = None, count: int = 6) -> list[StateSpec]:
    """The lowest ``count`` bound states, ordered by energy then quantum numbers."""
    c = c or Constants()
    states = []
    for lvl in spectra.enumerate_levels(spec, system, c, count):
        for qn in lvl.members:
            states.append(StateSpec(spec, system, qn=qn, c=c))
    return states[:count]
