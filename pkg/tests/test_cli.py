import json
import subprocess
import sys

import pytest

from bergman_lab.cli import main

Z = '{"kind": "taylor", "coeffs": [[0, 0], [1, 0]]}'


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "z": Z,
        "bad": "{oops",
        "op": '{"type": "volterra", "n": 1, "g": [{"kind": "taylor", "coeffs": [1]}]}',
        "cs": '{"type": "compsum", "n": 0, "u": [{"kind": "taylor", "coeffs": [1]}], '
              '"phi": {"kind": "taylor", "coeffs": [0, 0.5]}}',
        "ode": '{"n": 1, "g": [{"kind": "taylor", "coeffs": [-1]}], '
               '"F": {"kind": "taylor", "coeffs": [0]}, "initial": [1]}',
    }.items():
        path = tmp_path / f"{name}.json"
        path.write_text(text)
        paths[name] = str(path)
    mu = tmp_path / "mu.csv"
    mu.write_text("z_re,z_im,weight\n0.1,0,1\n")
    paths["mu"] = str(mu)
    return paths


def _run(capsys, argv):
    status = main(argv)
    out, err = capsys.readouterr()
    return status, out, err


def test_norm_of_z(capsys, files):
    status, out, _ = _run(capsys, ["norm", "--p", "2", "--fn", files["z"]])
    doc = json.loads(out)
    assert status == 0 and doc["schema_version"] == "1.0"
    assert doc["result"]["norm"] == pytest.approx(2 ** -0.5, rel=1e-10)


def _error(err):
    return json.loads(err)["error"]


@pytest.mark.parametrize("argv, status, code", [
    (["norm", "--p", "2", "--fn", "{bad}"], 3, "INPUT"),
    (["norm", "--p", "2", "--fn", "{missing}"], 3, "INPUT"),
    (["carleson", "geometric", "--p", "4", "--q", "2", "--measure", "{mu}"], 5, "REGIME"),
    (["carleson", "integral", "--p", "2", "--q", "2", "--measure", "{mu}"], 5, "REGIME"),
    (["volterra", "empirical", "--op", "{op}", "--p", "2", "--q", "2"], 7, "CONFIG"),
    (["norm", "--p", "-1", "--fn", "{z}"], 6, "CONTRACT"),
    (["volterra", "criteria", "--op", "{cs}", "--p", "2", "--q", "2"], 3, "INPUT"),
])
def test_error_exit_codes(capsys, files, argv, status, code):
    files = {**files, "missing": files["z"] + ".nope"}
    argv = [a.format(**files) for a in argv]
    got, _, err = _run(capsys, argv)
    assert got == status and _error(err)["code"] == code


def test_usage_errors_are_json(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert _error(capsys.readouterr().err)["code"] == "USAGE"


def test_kernelcheck_bj(capsys):
    status, out, _ = _run(capsys, ["kernelcheck", "bj", "--n", "4"])
    assert status == 0 and json.loads(out)["result"]["max_relative"] <= 1e-10


def test_csv_output(tmp_path, capsys, files):
    table = tmp_path / "coeffs.csv"
    status, out, _ = _run(capsys, ["ode", "solve", "--problem", files["ode"], "--csv",
                                   str(table)])
    doc = json.loads(out)["result"]
    assert status == 0 and doc["status"] == "CONVERGED"
    assert doc["oracle_agreement"]["max_difference"] < 1e-12
    assert table.read_text().splitlines()[1] == "k,re,im"


def test_config_echoed(capsys, files):
    _, out, _ = _run(capsys, ["compsum", "hs", "--op", files["cs"], "--seed", "1",
                              "--basis-size", "30", "--samples", "2"])
    doc = json.loads(out)
    assert doc["config"]["seed"] == 1 and doc["result"]["verdict"] == "HS"


def test_lattice_command(tmp_path, capsys):
    table = tmp_path / "lat.csv"
    status, out, _ = _run(capsys, ["lattice", "--r", "1", "--r-max", "0.9", "--csv",
                                   str(table)])
    assert status == 0 and json.loads(out)["result"]["certificate"]["covering_fraction"] == 1
    assert table.read_text().startswith("# r=1.0\n")


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "bergman_lab", "norm", "--p", "1", "--fn",
                           files["z"]], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["norm"] > 0
