"""One test per acceptance criterion, each at its stated tolerance.

Every test records a single pass/fail line, printed in the terminal summary
under "acceptance criteria".
"""

import subprocess
import sys
import time

import pytest

from superint import validation


def _run(suite, prefixes=("",)):
    names = [n for n in validation.check_names(suite) if n.startswith(prefixes)]
    return [validation.run_check(suite, n) for n in names]


def _judge(results):
    failed = [f"{r.suite}.{r.name}" for r in results if not r.passed]
    worst = max(results, key=lambda r: r.value / r.tolerance if r.tolerance else r.value)
    detail = f"{len(results)} checks, worst {worst.suite}.{worst.name}={worst.value:.3g} (tol {worst.tolerance:.3g})"
    if failed:
        detail += "; failed: " + ", ".join(failed)
    return not failed, detail


def _criterion(report, number, title, results, extra_ok=True, extra=""):
    ok, detail = _judge(results)
    ok = ok and extra_ok
    report(number, title, ok, detail + extra)
    assert ok, detail + extra


def test_criterion_1_spectrum_oracle(report_criterion):
    t0 = time.perf_counter()
    results = _run("oracle")
    elapsed = time.perf_counter() - t0
    _criterion(report_criterion, 1, "spectrum vs oracle", results, elapsed <= 120, f"; {elapsed:.1f} s (limit 120 s)")


def test_criterion_2_cross_coordinate(report_criterion):
    _criterion(report_criterion, 2, "cross-coordinate level multisets", _run("spectra", ("multiset_",)))


def test_criterion_3_v2_cubic(report_criterion):
    _criterion(report_criterion, 3, "V2 cubic frequency", _run("spectra", ("v2_",)))


def test_criterion_4_bound_states(report_criterion):
    results = _run("wavefun", ("bound_", "gram_"))
    _criterion(report_criterion, 4, "bound wave functions", results)


def test_criterion_5_continuum(report_criterion):
    _criterion(report_criterion, 5, "continuum wave functions", _run("wavefun", ("continuum_",)))


def test_criterion_6_kernels(report_criterion):
    _criterion(report_criterion, 6, "propagator kernel and algebra", _run("so21"))


def test_criterion_7_identities(report_criterion):
    _criterion(report_criterion, 7, "special-function identities", _run("specfun"))


def test_criterion_8_greens(report_criterion):
    _criterion(report_criterion, 8, "Green's function", _run("greens"))


@pytest.mark.slow
def test_criterion_9_determinism(report_criterion):
    outputs, times, codes = [], [], []
    for _ in range(2):
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "superint", "validate", "--suite", "all"],
                              capture_output=True, timeout=900)
        times.append(time.perf_counter() - t0)
        outputs.append(proc.stdout)
        codes.append(proc.returncode)
    same = outputs[0] == outputs[1]
    ok = same and codes == [0, 0] and max(times) <= 600
    detail = (f"reports {'identical' if same else 'differ'}, exit codes {codes}, "
              f"slowest run {max(times):.1f} s (limit 600 s)")
    report_criterion(9, "validate determinism", ok, detail)
    assert ok, detail
