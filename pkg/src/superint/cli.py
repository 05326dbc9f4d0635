"""Command-line front end.

Exit status: 0 on success, 1 when a validation or identity check fails,
2 on usage or config errors. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import greens, io, model, specfun, spectra, validation, wavefun
from .errors import SuperintError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_DEFAULT_POINTS = {2: ((1.0, 0.7), (1.5, 0.9)), 3: ((1.0, 0.8, 0.4), (1.5, 1.1, 0.6))}


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",")) if text else ()
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _grid(text: str) -> list[np.ndarray]:
    """``lo:hi:n`` per coordinate, comma-separated; a bare number is a single point."""
    axes = []
    for part in text.split(","):
        bits = part.split(":")
        try:
            if len(bits) == 1:
                axes.append(np.array([float(bits[0])]))
            elif len(bits) == 3:
                n = int(bits[2])
                if n < 1:
                    raise ValueError
                axes.append(np.linspace(float(bits[0]), float(bits[1]), n))
            else:
                raise ValueError
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid axis {part!r}; use lo:hi:n or a number") from None
    return axes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--format", choices=("csv", "json"), help="output format")
    out.add_argument("--out", help="write results here instead of standard output")

    pot = argparse.ArgumentParser(add_help=False)
    pot.add_argument("--potential", required=True, help="JSON config of the potential")
    pot.add_argument("--system", choices=("parabolic", "polar", "spherical"),
                     help="separating coordinates (default: first one the potential supports)")

    p = sub.add_parser("spectrum", parents=[pot, out], help="lowest bound energy levels")
    p.add_argument("--count", type=_positive_int, default=5, help="number of distinct levels")

    p = sub.add_parser("wavefunction", parents=[pot, out], help="wave function on a coordinate grid")
    p.add_argument("--grid", type=_grid, required=True, help="lo:hi:n per separating coordinate")
    p.add_argument("--state", type=_ints, help="bound quantum numbers, or angular indices with --momentum")
    p.add_argument("--momentum", type=float, help="continuum momentum p (selects a scattering state)")
    p.add_argument("--sep", type=float, default=0.0, help="continuum separation parameter")

    p = sub.add_parser("greens", parents=[pot, out], help="Green's function by shell summation")
    p.add_argument("--energy", type=_floats, required=True, help="negative energies, comma-separated")
    p.add_argument("--nmax", type=int, default=10, help="highest shell of total angular order")
    p.add_argument("--x", type=_floats, help="first point in separating coordinates")
    p.add_argument("--xp", type=_floats, help="second point in separating coordinates")
    p.add_argument("--mode", choices=("partial", "spectral"), default="partial",
                   help="closed-form radial channels, or their bound plus continuum sums")

    p = sub.add_parser("validate", parents=[out], help="run the invariant check suites")
    p.add_argument("--suite", choices=(*validation.SUITE_NAMES, "all"), default="all")

    sub.add_parser("identities", parents=[out], help="residuals of the special-function identities")
    return parser


# -- commands ----------------------------------------------------------------

def _system(args, spec) -> str:
    system = args.system or spec.systems[0]
    spec.check_system(system)
    return system


def _qn_text(qn) -> str:
    return " ".join(str(getattr(qn, f)) for f in qn.__dataclass_fields__)


def cmd_spectrum(args, spec, c):
    system = _system(args, spec)
    header = ["index", "N", "energy", "degeneracy", "qn"]
    rows = [(i, float(lvl.N), lvl.energy, lvl.degeneracy, _qn_text(lvl.qn))
            for i, lvl in enumerate(spectra.enumerate_levels(spec, system, c, args.count))]
    return header, rows, EXIT_OK


def cmd_wavefunction(args, spec, c):
    system = _system(args, spec)
    if args.momentum is not None:
        state = wavefun.continuum_state(spec, system, model.ContinuumLabels(args.momentum, args.sep),
                                        args.state or (), c)
    else:
        cls = model.qn_type(spec, system)
        qn = cls(*args.state) if args.state else spectra.enumerate_levels(spec, system, c, 1)[0].qn
        state = wavefun.bound_state(spec, system, qn, c)
    dim = 2 if spec.name in ("V1", "V2") else 3
    if len(args.grid) != dim:
        raise UsageError(f"--grid needs {dim} axes for {spec.name} in {system} coordinates")
    mesh = [m.ravel() for m in np.meshgrid(*args.grid, indexing="ij")]
    for pt in zip(*mesh):
        wavefun.check_point(state, pt)
    psi = wavefun.evaluate(state, mesh)
    header = [f"x{i + 1}" for i in range(dim)] + ["re_psi", "im_psi"]
    rows = [(*(float(m[i]) for m in mesh), float(v.real), float(v.imag)) for i, v in enumerate(psi)]
    return header, rows, EXIT_OK


def cmd_greens(args, spec, c):
    system = args.system or {"V1": "polar"}.get(spec.name, "spherical")
    greens._radial_system(spec, system)
    dim = 2 if spec.name == "V1" else 3
    x, xp = args.x or _DEFAULT_POINTS[dim][0], args.xp or _DEFAULT_POINTS[dim][1]
    if len(x) != dim or len(xp) != dim:
        raise UsageError(f"--x and --xp need {dim} coordinates for {spec.name}")
    if args.nmax < 0:
        raise UsageError("--nmax must be non-negative")
    header = (["re_E", "im_E"] + [f"x{i + 1}" for i in range(dim)] + [f"xp{i + 1}" for i in range(dim)]
              + ["re_G", "im_G", "n_max", "truncation_estimate"])
    rows = []
    for E in args.energy:
        g = greens.green_assemble(spec, system, E, x, xp, args.nmax, c, mode=args.mode)
        rows.append((float(E), 0.0, *map(float, x), *map(float, xp), float(g.value.real), float(g.value.imag),
                     g.n_max, float(g.truncation_estimate)))
    return header, rows, EXIT_OK


def cmd_validate(args):
    results = validation.run_suite(args.suite)
    status = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    if args.format is None:
        return validation.format_report(results), status
    header = ["suite", "check", "value", "tolerance", "passed"]
    rows = [(r.suite, r.name, r.value, r.tolerance, r.passed) for r in results]
    return io.render(header, rows, args.format), status


def cmd_identities(args):
    header = ["identity", "residual", "tolerance", "passed"]
    rows = []
    for name in sorted(specfun.IDENTITIES):
        tol = 1e-6 if name in specfun.INTEGRAL_IDENTITIES else 1e-8
        res = specfun.verify_identity(name)
        rows.append((name, res, tol, res <= tol))
    status = EXIT_OK if all(r[3] for r in rows) else EXIT_FAIL
    return io.render(header, rows, args.format or "csv"), status


# -- entry points ------------------------------------------------------------

def _check_threads():
    raw = os.environ.get("SUPERINT_THREADS")
    if raw is None:
        return
    try:
        ok = int(raw) >= 1
    except ValueError:
        ok = False
    if not ok:
        raise UsageError(f"SUPERINT_THREADS must be a positive integer, got {raw!r}")


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _check_threads()
        if args.command == "validate":
            text, status = cmd_validate(args)
        elif args.command == "identities":
            text, status = cmd_identities(args)
        else:
            spec, c = io.load_config(args.potential)
            handler = {"spectrum": cmd_spectrum, "wavefunction": cmd_wavefunction, "greens": cmd_greens}
            header, rows, status = handler[args.command](args, spec, c)
            text = io.render(header, rows, args.format or "csv")
        _emit(text, args.out)
    except (UsageError, SuperintError) as exc:
        print(f"superint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"superint: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    if status == EXIT_FAIL:
        print(f"superint: {args.command}: checks failed", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run())
