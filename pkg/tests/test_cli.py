import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdl import cli, jsonio
from qdl.errors import InvalidInput

EXTREMAL = {"alpha": 1, "atoms": [{"zeta": [1, 0], "t": 1}]}
TWO_ATOM = {"alpha": 1.5, "atoms": [{"zeta": [1, 0], "t": 0.5}, {"zeta": [-1, 0], "t": 0.5}]}
HM = {"analytic": EXTREMAL, "dilatation": {"kind": "moebius", "a": [0.5, 0]}}


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def spec(obj):
    return json.dumps(obj)


# ------------------------------------------------------------------ examples


def test_norm_schwarzian_extremal(capsys):
    code, out, _ = run(capsys, "norm", "--kind", "schwarzian", "--spec", spec(EXTREMAL))
    rep = json.loads(out)
    assert code == 0
    assert rep["norm"] == pytest.approx(2.0, abs=1e-4)
    assert rep["bound"] == 2.0
    assert abs(rep["slack"]) < 1e-4
    assert set(rep) >= {"norm", "argmax", "bound", "slack", "evaluations"}


def test_membership_extremal(capsys):
    code, out, _ = run(capsys, "membership", "--spec", spec(EXTREMAL))
    assert code == 0
    assert json.loads(out)["margin"] >= -1e-9


def test_construct_identity_blaschke(capsys):
    code, out, _ = run(capsys, "construct", "--blaschke", '{"zeros":[[0,0]]}', "--alpha", "2")
    atoms = json.loads(out)["atoms"]
    assert code == 0
    got = sorted((round(a["zeta"][0]), a["t"]) for a in atoms)
    assert got[0][0] == -1 and got[1][0] == 1
    assert got[0][1] == pytest.approx(0.5) and got[1][1] == pytest.approx(0.5)


def test_construct_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--blaschke", '{"zeros":[[0.3,0.2],[-0.5,0]]}', "--alpha", "1.2")
    path = tmp_path / "f.json"
    path.write_text(out)
    assert run(capsys, "membership", "--spec", path)[0] == 0
    code, out, _ = run(capsys, "norm", "--kind", "pre", "--spec", path)
    assert code == 0 and json.loads(out)["slack"] >= -1e-6


def test_boundary_writes_csv_and_svg(capsys, tmp_path):
    csv, svg = tmp_path / "c.csv", tmp_path / "c.svg"
    code, out, _ = run(
        capsys, "boundary", "--spec", spec({"alpha": 2, "atoms": [{"zeta": [1, 0], "t": 1}]}),
        "--r", "0.5", "--n", "128", "--out", csv, "--svg", svg,
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["closure_drift"] < 1e-8 and rep["simple"]
    assert csv.read_text().startswith("theta,re,im\n")
    assert len(csv.read_text().splitlines()) == 129
    assert svg.read_text().rstrip().endswith("</svg>")


def test_quasi(capsys):
    code, out, _ = run(capsys, "quasi", "--spec", spec(EXTREMAL), "--radii", "0.9,0.99", "--n", "256")
    rep = json.loads(out)
    assert code == 0 and rep["radii"] == [0.9, 0.99] and len(rep["turning"]) == 2


def test_harmonic_norm(capsys):
    code, out, _ = run(capsys, "harmonic-norm", "--spec", spec(HM))
    rep = json.loads(out)
    assert code == 0 and rep["bound"] == 3.0 and rep["slack"] >= -1e-6


def test_harmonic_norm_bare_analytic_uses_coupled_dilatation(capsys):
    code, out, _ = run(capsys, "harmonic-norm", "--spec", spec(EXTREMAL))
    assert code == 0
    assert json.loads(out)["map"]["dilatation"]["kind"] == "moebius"


def test_bloch(capsys):
    hm = {"analytic": {"alpha": 1, "identity": True}, "dilatation": {"kind": "moebius", "a": [0, 0]}}
    code, out, _ = run(capsys, "bloch", "--spec", spec(hm), "--bound-alpha", "0.5")
    rep = json.loads(out)
    assert code == 0
    assert rep["bloch"] == pytest.approx(32 / 27, abs=1e-6)
    assert rep["bound_t71"]["alpha"] == 0.5


def test_report_bundle(capsys):
    code, out, _ = run(capsys, "report", "--spec", spec(TWO_ATOM), "--radii", "0.9,0.99", "--n", "256")
    rep = json.loads(out)
    for key in ("membership", "sharp_residual", "subordination", "pre_schwarzian", "schwarzian", "quasidisk"):
        assert key in rep
    assert code == (0 if all(rep["checks"].values()) else 2)


def test_report_exit_two_on_failed_bound(capsys):
    alpha, t = 1.9, 1 / 1.9
    bad = {"alpha": alpha, "atoms": [{"zeta": [1, 0], "t": t}, {"zeta": [-1, 0], "t": 1 - t}]}
    code, out, _ = run(capsys, "norm", "--spec", spec(bad))
    assert code == 2
    assert json.loads(out)["slack"] < 0


# ------------------------------------------------------------------ errors


@pytest.mark.parametrize(
    "argv, field",
    [
        (["norm", "--spec", '{"alpha": 1, "atoms": [{"zeta": [1, 0]}]}'], "atoms[0]"),
        (["norm", "--spec", '{"alpha": 1, "atoms": [{"zeta": [1, 0], "t": 1}'], "spec"),
        (["membership", "--spec", "/nonexistent/f.json"], "spec"),
        (["membership"], "spec"),
        (["norm", "--spec", spec(EXTREMAL), "--budget", "100"], "budget"),
        (["construct", "--blaschke", '{"zeros": [[2, 0]]}', "--alpha", "1"], "disk"),
        (["membership", "--spec", spec({"alpha": 7, "atoms": [{"zeta": [1, 0], "t": 1}]})], "alpha"),
        (["boundary", "--spec", spec(EXTREMAL), "--r", "0.5"], "out"),
        (["membership", "--spec", spec(EXTREMAL), "--grid-radial", "1"], "n_radial"),
    ],
)
def test_errors_exit_one_and_name_field(capsys, argv, field):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert field in err


def test_unknown_command_exit_one(capsys):
    assert run(capsys, "frobnicate")[0] == 1


def test_output_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "membership", "--spec", spec(EXTREMAL), "--out", tmp_path / "no" / "r.json")
    assert code == 1 and "no" in err


valid_specs = st.sampled_from([EXTREMAL, TWO_ATOM, {"alpha": 0.4, "identity": True}])
broken = st.sampled_from(
    [
        "{",
        "[]",
        '{"alpha": 1}',
        '{"alpha": -1, "atoms": [{"zeta": [1, 0], "t": 1}]}',
        '{"alpha": 1, "atoms": [{"zeta": [1, 0], "t": 0.3}]}',
        '{"alpha": 1, "atoms": [{"zeta": [2, 0], "t": 1}]}',
        '{"alpha": 1, "blaschke": {"zeros": "x"}}',
    ]
)


@settings(max_examples=15)
@given(valid_specs, st.sampled_from(["membership", "quasi"]))
def test_exit_contract_valid(s, command):
    argv = [command, "--spec", spec(s), "--radii", "0.5,0.9", "--n", "64", "--grid-radial", "8", "--grid-angular", "16"]
    assert cli.main(argv) in (0, 2)


@settings(max_examples=15)
@given(broken, st.sampled_from(["membership", "norm", "quasi", "report", "harmonic-norm", "bloch"]))
def test_exit_contract_invalid(s, command):
    assert cli.main([command, "--spec", s]) == 1


# ------------------------------------------------------------------ determinism


def test_report_byte_identical(tmp_path):
    args = ["report", "--spec", spec(TWO_ATOM), "--radii", "0.9,0.99", "--n", "256"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(args + ["--out", str(a)])
    cli.main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qdl.cli", "membership", "--spec", spec(EXTREMAL)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["margin"] >= -1e-9


# ------------------------------------------------------------------ JSON writer


def test_json_17_digits_round_trip():
    rng = np.random.default_rng(1)
    xs = list(rng.normal(size=200) * 10.0 ** rng.integers(-300, 300, size=200))
    back = json.loads(jsonio.dumps({"x": xs}))["x"]
    assert back == xs


def test_json_specials():
    text = jsonio.dumps({"a": float("inf"), "b": complex(1, -2), "c": np.float64(0.1), "d": (1, 2), "e": True})
    data = json.loads(text)
    assert data == {"a": None, "b": [1.0, -2.0], "c": 0.1, "d": [1, 2], "e": True}
    assert "0.10000000000000001" in text


def test_json_rejects_unknown_types():
    with pytest.raises(TypeError):
        jsonio.dumps({"x": object()})


def test_run_config_budget_gate():
    with pytest.raises(InvalidInput):
        cli.RunConfig("norm", budget=10)
    cli.RunConfig("membership", budget=10)
