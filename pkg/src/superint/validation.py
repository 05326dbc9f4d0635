"""Named invariant checks grouped into suites.

Each check returns ``(value, tolerance)`` and passes when the value is finite
and no larger than the tolerance. Exact checks report 0 or 1 against a zero
tolerance. Reports are plain text with three significant digits, so repeated
runs on one machine give byte-identical output.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import greens, model, oracle, so21, specfun, spectra, wavefun

UNITS = model.Constants()
ODD_UNITS = model.Constants(hbar=1.3, mass=0.7, alpha0=1.1)

SUITE_NAMES = ("specfun", "so21", "spectra", "oracle", "wavefun", "greens")

_REGISTRY: dict[str, dict[str, Callable[[], tuple[float, float]]]] = {s: {} for s in SUITE_NAMES}


def check(suite: str, name: str):
    def deco(fn):
        if name in _REGISTRY[suite]:
            raise ValueError(f"duplicate check {suite}.{name}")
        _REGISTRY[suite][name] = fn
        return fn
    return deco


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.value <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.suite}.{self.name}  value={self.value:.3g}  tol={self.tolerance:.3g}"


def check_names(suite: str) -> list[str]:
    return list(_REGISTRY[suite])


def run_check(suite: str, name: str) -> CheckResult:
    value, tol = _REGISTRY[suite][name]()
    return CheckResult(suite, name, float(value), float(tol))


def run_suite(suite: str) -> list[CheckResult]:
    """Run one suite, or every suite for ``"all"``."""
    if suite == "all":
        return [r for s in SUITE_NAMES for r in run_suite(s)]
    if suite not in _REGISTRY:
        raise KeyError(suite)
    return [run_check(suite, name) for name in _REGISTRY[suite]]


def format_report(results: list[CheckResult]) -> str:
    passed = sum(r.passed for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


# -- specfun -----------------------------------------------------------------

def _identity_check(name):
    tol = 1e-6 if name in specfun.INTEGRAL_IDENTITIES else 1e-8
    return lambda: (specfun.verify_identity(name), tol)


for _name in sorted(specfun.IDENTITIES):
    check("specfun", f"identity_{_name}")(_identity_check(_name))


# -- so21 --------------------------------------------------------------------

@check("so21", "semigroup")
def _semigroup():
    worst = 0.0
    for x, xp, S1, S2, mu in [(1.0, 1.5, -0.4j, -0.7j, 2.0), (0.5, 2.0, -0.2j, -0.3j, 0.8),
                              (1.2, 0.9, -0.5j, -0.25j, 0.0)]:
        worst = max(worst, so21.semigroup_residual(x, xp, S1, S2, so21.KernelParams(mu=mu, omega=1.0)))
    return worst, 1e-6


@check("so21", "spectral_sum")
def _spectral_sum():
    worst = 0.0
    for mu, x, xp, S in [(2.0, 1.0, 1.0, -0.3j), (0.7, 0.6, 1.4, -0.5j)]:
        p = so21.KernelParams(mu=mu, omega=1.0)
        exact = so21.kernel(x, xp, S, p)
        worst = max(worst, abs(exact - so21.spectral_kernel(x, xp, S, p, n_max=60)))
    return worst, 1e-8


@check("so21", "bch_split")
def _bch_split():
    worst = 0.0
    grid = itertools.product([0.3, 0.7, 1.0, 1.6, 2.5], [0.1, 0.4, 0.9, 1.3, 2.2], [0.5, 0.8, 1.0, 1.5, 2.0])
    for omega, S, hbar in grid:
        if abs(math.cos(omega * S)) < 1e-3:
            continue
        worst = max(worst, so21.split_residual(omega, S, hbar))
    return worst, 1e-12


@check("so21", "bch_merge")
def _bch_merge():
    worst = 0.0
    grid = itertools.product([-1.4, -0.5, 0.0, 0.3, 1.1], [-0.8, -0.2, 0.0, 0.5, 1.1], [-1.0, -0.2, 0.0, 0.6, 1.5])
    for tr, ti, c in grid:
        tau = complex(tr, ti)
        if abs(1 - 0.5j * tau * c) < 1e-3:
            continue
        worst = max(worst, so21.merge_residual(tau, c))
    return worst, 1e-12


@check("so21", "commutators")
def _commutators():
    worst = 0.0
    for pair, mu, s, x in itertools.product(["T1T2", "T2T3", "T1T3"], [0.0, 0.5, 1.0, 2.0],
                                            [2, 3, 5], [0.5, 1.0, 2.0]):
        worst = max(worst, so21.commutator_residual(pair, mu, s, x))
    return worst, 1e-12


# -- spectra -----------------------------------------------------------------

MULTISET_CASES = {
    "V1": (model.V1(0.3, 0.6), "parabolic", "polar"),
    "V3": (model.V3(0.3, 0.6), "parabolic", "spherical"),
    "V4": (model.V4(0.0, gamma=1.0), "parabolic", "spherical"),
}


def _multiset_check(spec, a, b):
    return lambda: (float(spectra.level_multiset(spec, a, 6) != spectra.level_multiset(spec, b, 6)), 0.0)


for _name, (_spec, _a, _b) in MULTISET_CASES.items():
    check("spectra", f"multiset_{_name}")(_multiset_check(_spec, _a, _b))

_CUBIC_UNITS = [UNITS, ODD_UNITS, model.Constants(hbar=0.6, mass=2.0, alpha0=0.4)]
_CUBIC_BETAS = [(0.1, 0.1), (0.0, 0.7), (1.5, -0.4), (3.0, 2.0), (1e-4, 0.0)]


@check("spectra", "v2_cubic_residual")
def _cubic():
    # relative to the size of the leading term, which sets the rounding floor
    worst = 0.0
    for N, c, (b1, b2) in itertools.product(range(1, 12), _CUBIC_UNITS, _CUBIC_BETAS):
        w = spectra.v2_frequency(N, c, b1, b2)
        worst = max(worst, abs(spectra.cubic_residual(w, N, c, b1, b2)) / max(1.0, w ** 3))
    return worst, 1e-12


@check("spectra", "v2_beta_zero_limit")
def _beta_zero():
    bad = any(spectra.v2_frequency(N, c, 0.0, 0.0) != 2 * c.alpha0 / (N * c.hbar)
              for N, c in itertools.product(range(1, 12), _CUBIC_UNITS))
    return float(bad), 0.0


@check("spectra", "v2_closed_form")
def _closed_form():
    worst = 0.0
    for N, c, (b1, b2) in itertools.product(range(1, 12), _CUBIC_UNITS, _CUBIC_BETAS):
        closed = spectra.v2_frequency_closed_form(N, c, b1, b2)
        if closed is None:
            continue
        w = spectra.v2_frequency(N, c, b1, b2)
        worst = max(worst, abs(closed - w) / w)
    return worst, 1e-10


# -- oracle ------------------------------------------------------------------

ORACLE_CASES = {
    "V1_parabolic": (model.V1(0.3, 0.6), "parabolic", 5, 1e-5),
    "V1_polar": (model.V1(0.3, 0.6), "polar", 5, 1e-5),
    "V3_parabolic": (model.V3(0.3, 0.6), "parabolic", 5, 1e-5),
    "V3_spherical": (model.V3(0.3, 0.6), "spherical", 5, 1e-5),
    "V4_parabolic": (model.V4(0.0, gamma=1.0), "parabolic", 5, 1e-5),
    "V4_spherical": (model.V4(0.0, gamma=1.0), "spherical", 5, 1e-5),
    "V2_parabolic": (model.V2(0.1, 0.1), "parabolic", 3, 1e-4),
}


def _oracle_check(spec, system, count, tol):
    def run():
        closed = np.array([lvl.energy for lvl in spectra.enumerate_levels(spec, system, UNITS, count)])
        numeric = oracle.oracle_spectrum(spec, system, UNITS, count)
        return float(np.max(np.abs(numeric - closed) / np.abs(closed))), tol
    return run


for _name, _case in ORACLE_CASES.items():
    check("oracle", f"spectrum_{_name}")(_oracle_check(*_case))


# -- wavefun -----------------------------------------------------------------

BOUND_CASES = {
    "V1_parabolic": (model.V1(0.3, 0.6), "parabolic"),
    "V1_polar": (model.V1(0.3, 0.6), "polar"),
    "V1_minus_polar": (model.V1(0.7, 0.2, "minus", "plus"), "polar"),
    "V2_parabolic": (model.V2(0.1, 0.1), "parabolic"),
    "V3_parabolic": (model.V3(0.3, 0.6), "parabolic"),
    "V3_spherical": (model.V3(0.3, 0.6), "spherical"),
    "V4_parabolic": (model.V4(0.0, gamma=1.0), "parabolic"),
    "V4_spherical": (model.V4(0.0, gamma=1.0), "spherical"),
    "V4_k1_spherical": (model.V4(0.5, gamma=1.0), "spherical"),
}

CONTINUUM_CASES = {
    "V1_parabolic": (model.V1(0.3, 0.6), "parabolic", ()),
    "V1_polar": (model.V1(0.3, 0.6), "polar", (1,)),
    "V2_parabolic": (model.V2(0.1, 0.1), "parabolic", ()),
    "V3_parabolic": (model.V3(0.3, 0.6), "parabolic", (1,)),
    "V3_spherical": (model.V3(0.3, 0.6), "spherical", (1, 0)),
    "V4_parabolic": (model.V4(0.0, gamma=1.0), "parabolic", (1,)),
    "V4_spherical": (model.V4(0.0, gamma=1.0), "spherical", (0, 1)),
}


def _bound_residual(spec, system):
    def run():
        states = wavefun.shipped_states(spec, system, count=6)
        if len(states) < 6:
            return math.inf, 1e-8
        return max(wavefun.validate_state(s).residual for s in states), 1e-8
    return run


def _bound_norm(spec, system):
    def run():
        states = wavefun.shipped_states(spec, system, count=6)
        return max(abs(wavefun.validate_state(s).norm - 1) for s in states), 1e-8
    return run


def _gram(spec, system):
    def run():
        g = wavefun.gram_matrix(wavefun.shipped_states(spec, system, count=4))
        return float(np.max(np.abs(g - np.eye(4)))), 1e-8
    return run


def _continuum(spec, system, ang):
    def run():
        worst = 0.0
        for p in (0.5, 1.0, 2.0):
            state = wavefun.continuum_state(spec, system, model.ContinuumLabels(p, 0.3), ang)
            worst = max(worst, wavefun.validate_state(state).residual)
        return worst, 1e-6
    return run


for _name, _case in BOUND_CASES.items():
    check("wavefun", f"bound_residual_{_name}")(_bound_residual(*_case))
    check("wavefun", f"bound_norm_{_name}")(_bound_norm(*_case))
    check("wavefun", f"gram_{_name}")(_gram(*_case))
for _name, _case in CONTINUUM_CASES.items():
    check("wavefun", f"continuum_{_name}")(_continuum(*_case))


# -- greens ------------------------------------------------------------------

GREENS_CHANNELS = {
    "V1_m0": (model.V1(0.3, 0.6), "polar", 0),
    "V1_m2": (model.V1(0.3, 0.6), "polar", 2),
    "V1_minus_m1": (model.V1(0.7, 0.2, "minus", "plus"), "polar", 1),
    "V3_10": (model.V3(0.3, 0.6), "spherical", (1, 0)),
    "V3_01": (model.V3(0.5, 0.5), "spherical", (0, 1)),
    "V4_01": (model.V4(0.0, gamma=1.0), "spherical", (0, 1)),
    "V4_k1_1m1": (model.V4(0.5, gamma=1.0), "spherical", (1, -1)),
}


def _poles(spec, system, ch):
    def run():
        poles = greens.pole_energies(spec, ch, 5, UNITS)
        levels = [spectra.bound_energy(spec, system, greens._bound_qn(spec, ch, n), UNITS).energy
                  for n in range(5)]
        return float(poles != levels), 0.0
    return run


def _residues(spec, system, ch):
    def run():
        worst = 0.0
        for c in (UNITS, ODD_UNITS):
            for level in range(3):
                worst = max(worst, greens.pole_residue(spec, system, ch, level, c).residue_match)
        return worst, 1e-6
    return run


for _name, _case in GREENS_CHANNELS.items():
    check("greens", f"poles_{_name}")(_poles(*_case))
    check("greens", f"residue_{_name}")(_residues(*_case))


def _spectral(spec, system, x, xp, n_max, **quad):
    def run():
        E = 0.9 * spectra.enumerate_levels(spec, system, UNITS, 1)[0].energy
        closed = greens.green_assemble(spec, system, E, x, xp, n_max)
        summed = greens.green_assemble(spec, system, E, x, xp, n_max, mode="spectral", **quad)
        return abs(closed.value - summed.value) / abs(closed.value), 1e-3
    return run


check("greens", "spectral_V1_polar")(_spectral(model.V1(0.3, 0.6), "polar", (1.0, 0.7), (1.5, 0.9), 12))
check("greens", "spectral_V4_spherical")(
    _spectral(model.V4(0.0, gamma=1.0), "spherical", (1.0, 0.8, 0.4), (1.5, 1.1, 0.6), 1, k_max=200, n_k=1200))
