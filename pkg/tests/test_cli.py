import csv
import io as stdio
import json

import pytest

from superint import cli, io, model
from superint.io import ConfigError

V1_DOC = '{\n  "name": "V1",\n  "k1": 0.3,\n  "k2": 0.6\n}\n'


@pytest.fixture
def v1(tmp_path):
    path = tmp_path / "v1.json"
    path.write_text(V1_DOC)
    return str(path)


def _csv(text):
    return list(csv.DictReader(stdio.StringIO(text)))


# -- config ------------------------------------------------------------------

def test_parse_each_potential():
    spec, c = io.parse_config('{"name": "V1", "k1": 0.7, "k2": 0.2, "s1": "minus"}')
    assert spec == model.V1(0.7, 0.2, "minus") and c == model.Constants()
    spec, _ = io.parse_config('{"name": "V2", "beta1": 0.1, "beta2": -0.3}')
    assert spec == model.V2(0.1, -0.3)
    spec, _ = io.parse_config('{"name": "V3", "k1": 0.5, "k2": 0.5}')
    assert spec == model.V3(0.5, 0.5)
    spec, c = io.parse_config('{"name": "V4", "k1": 0, "gamma": 1, "constants": {"hbar": 2, "alpha0": 0.5}}')
    assert spec == model.V4(0.0, gamma=1.0)
    assert c == model.Constants(hbar=2.0, alpha0=0.5)


def test_angular_table_config():
    doc = {"name": "V4", "k1": 0.1, "gamma": None,
           "table": {"lambda_phi": [0.5, 1.5], "phi": [i * 0.7 for i in range(9)],
                     "values": [[0.1] * 9, [0.2] * 9]}}
    spec, _ = io.parse_config(json.dumps(doc))
    assert spec.table.lambda_phi == (0.5, 1.5)


@pytest.mark.parametrize("text,line,field", [
    ('{"name": "V1",\n "k1": 0.3,\n "k2": 0.6,\n "k3": 1}', 4, "k3"),
    ('{"name": "V1",\n "k1": 0.3,\n "k2": "big"}', 3, "k2"),
    ('{"name": "V9"}', 1, "name"),
    ('{"name": "V1", "k1": 0.3}', 1, "k2"),
    ('{"name": "V1", "k1": 0.3, "k2": 0.6,\n "constants": {"planck": 1}}', 2, "planck"),
    ('{"name": "V1", "k1": true, "k2": 0.6}', 1, "k1"),
    ('{"name": "V1", "k1": 0.3, "k2": 0.6, "s2": "up"}', 1, "s2"),
])
def test_config_diagnostics(text, line, field):
    with pytest.raises(ConfigError) as err:
        io.parse_config(text, "c.json")
    assert (err.value.line, err.value.field) == (line, field)
    assert f"c.json:{line}" in str(err.value)


def test_malformed_json_line():
    with pytest.raises(ConfigError) as err:
        io.parse_config('{"name": "V1",\n\n "k1": 0.3,,\n}')
    assert err.value.line == 3


def test_domain_errors_become_config_errors():
    with pytest.raises(ConfigError):
        io.parse_config('{"name": "V1", "k1": -0.3, "k2": 0.6}')
    with pytest.raises(ConfigError):
        io.parse_config('{"name": "V1", "k1": 0.3, "k2": 0.6, "constants": {"mass": 0}}')


@pytest.mark.parametrize("x", [0.1, 1 / 3, -2.5e-300, 1e22, 123456789.12345678])
def test_number_format_round_trips(x):
    text = io.format_number(x)
    assert float(text) == x
    digits = text.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
    assert len(digits) <= 17


# -- commands ----------------------------------------------------------------

def test_spectrum_csv(v1, capsys):
    assert cli.run(["spectrum", "--potential", v1, "--count", "5", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert len(rows) == 5
    assert float(rows[0]["energy"]) == pytest.approx(-1 / (2 * 1.45 ** 2), rel=1e-15)
    assert [int(r["degeneracy"]) for r in rows] == [1, 2, 3, 4, 5]


def test_spectrum_json_to_file(v1, tmp_path):
    out = tmp_path / "s.json"
    assert cli.run(["spectrum", "--potential", v1, "--system", "polar", "--count", "2",
                    "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [d["N"] for d in data] == [1.45, 2.45]


def test_byte_identical_outputs(v1, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.run(["greens", "--potential", v1, "--energy=-0.2,-0.1", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_wavefunction_grid(v1, capsys):
    assert cli.run(["wavefunction", "--potential", v1, "--grid", "0.5:2:3,0.3:1:2", "--state", "1,0"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert len(rows) == 6
    assert list(rows[0]) == ["x1", "x2", "re_psi", "im_psi"]


def test_wavefunction_continuum(v1, capsys):
    args = ["wavefunction", "--potential", v1, "--system", "polar", "--grid", "1,0.5", "--momentum", "1",
            "--state", "1"]
    assert cli.run(args) == 0
    row = _csv(capsys.readouterr().out)[0]
    assert float(row["im_psi"]) != 0


def test_greens_columns(v1, capsys):
    assert cli.run(["greens", "--potential", v1, "--energy", "-0.2", "--nmax", "4"]) == 0
    row = _csv(capsys.readouterr().out)[0]
    assert list(row) == ["re_E", "im_E", "x1", "x2", "xp1", "xp2", "re_G", "im_G", "n_max", "truncation_estimate"]
    assert row["n_max"] == "4"


def test_validate_single_suite(capsys):
    assert cli.run(["validate", "--suite", "spectra"]) == 0
    out = capsys.readouterr().out
    assert "PASS  spectra.v2_cubic_residual" in out
    assert out.strip().endswith("6/6 checks passed")


def test_validate_failure_exit(monkeypatch, capsys):
    from superint import validation
    fake = [validation.CheckResult("so21", "demo", 1.0, 0.5)]
    monkeypatch.setattr(validation, "run_suite", lambda suite: fake)
    assert cli.run(["validate", "--suite", "so21"]) == 1
    assert "FAIL  so21.demo" in capsys.readouterr().out


def test_identities(capsys):
    assert cli.run(["identities", "--format", "json"]) == 0
    assert all(d["passed"] for d in json.loads(capsys.readouterr().out))


@pytest.mark.parametrize("argv", [
    ["spectrum", "--bogus"],
    [],
    ["spectrum", "--potential", "missing.json"],
    ["validate", "--suite", "nope"],
    ["spectrum", "--potential", "x.json", "--count", "0"],
])
def test_usage_errors(argv, capsys):
    assert cli.run(argv) == 2
    assert capsys.readouterr().err


def test_config_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "V1",\n "k1": 0.3,\n "kk": 0.6}')
    assert cli.run(["spectrum", "--potential", str(path)]) == 2
    assert "bad.json:3: field 'kk'" in capsys.readouterr().err


def test_library_errors_exit_two(v1, capsys):
    assert cli.run(["greens", "--potential", v1, "--energy", "0.2"]) == 2
    assert cli.run(["spectrum", "--potential", v1, "--system", "spherical"]) == 2
    assert cli.run(["wavefunction", "--potential", v1, "--grid", "1,2,3"]) == 2


def test_threads_env(monkeypatch, v1):
    monkeypatch.setenv("SUPERINT_THREADS", "0")
    assert cli.run(["spectrum", "--potential", v1]) == 2
    monkeypatch.setenv("SUPERINT_THREADS", "2")
    assert cli.run(["spectrum", "--potential", v1, "--out", "/dev/null"]) == 0


def test_help_exits_zero(capsys):
    assert cli.run(["--help"]) == 0
