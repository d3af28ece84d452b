import json

import numpy as np
import pytest

from hopfevo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def test_models_list(capsys):
    code, doc, _ = run_json(capsys, "models", "list")
    assert code == 0
    assert doc["schema_version"] == 1
    assert "uq-su2" in doc["results"]["models"]
    assert doc["results"]["demo_generators"] == ["damping-demo", "redfield-demo"]


def test_analyze_quarter_is_von_neumann(capsys):
    code, doc, _ = run_json(capsys, "analyze", "--model", "uq-su2", "--ham", "hx", "--coeffs", "0.25,-0.25,-0.25,0.25", "--z", "0.1")
    assert code == 0
    assert doc["results"]["generator"]["verdict"] == "VON_NEUMANN"


def test_analyze_half_finds_negative_witness(capsys):
    code, doc, _ = run_json(capsys, "analyze", "--model", "uq-su2", "--ham", "hx", "--coeffs", "0.5,-0.5,0,0", "--z", "0.1")
    assert code == 0
    assert doc["results"]["witness_search"]["value"] == pytest.approx(-0.05, abs=1e-3)
    # the first-order trace defect is reported before any GKSL verdict
    assert doc["results"]["generator"]["verdict"] == "NOT_TRACE_PRESERVING"


def test_analyze_mapped_kappa(capsys):
    code, doc, _ = run_json(capsys, "analyze", "--model", "kappa-galilei-mapped", "--preset", "half", "--inv-kappa", "0.1")
    assert code == 0
    assert doc["results"]["generator"]["verdict"] == "GKSL"
    assert doc["results"]["audit_flags"]["coproduct_hermiticity"] == "FAIL"


def test_analyze_demo_generator(capsys):
    code, doc, _ = run_json(capsys, "analyze", "--model", "damping-demo", "--samples", "200")
    assert code == 0
    assert doc["results"]["generator"]["verdict"] == "GKSL"


@pytest.mark.parametrize(
    "argv, code",
    [
        (("audit", "uq-su2", "--z", "0.3"), 0),
        (("audit", "uq-su2", "--z", "0.3i"), 1),
        (("audit", "kappa-galilei", "--inv-kappa", "0.1"), 0),
    ],
)
def test_audit_exit_codes(capsys, argv, code):
    got, doc, _ = run_json(capsys, *argv)
    assert got == code
    assert doc["pass"] is (code == 0)


def test_audit_imaginary_z_flags_hermiticity(capsys):
    _, doc, _ = run_json(capsys, "audit", "uq-su2", "--z", "0.3i")
    assert doc["results"]["verdicts"]["coproduct_hermiticity"] == "FAIL"


@pytest.mark.parametrize(
    "argv, code",
    [
        (("analyze", "--model", "nope", "--preset", "half"), 2),
        (("analyze", "--model", "uq-su2", "--preset", "third"), 2),
        (("analyze", "--model", "uq-su2", "--ham", "hw", "--preset", "half"), 2),
        (("analyze", "--model", "uq-su2", "--coeffs", "1,2"), 3),
        (("analyze", "--model", "uq-su2", "--coeffs", "1,2,3,x"), 3),
        (("analyze", "--model", "uq-su2"), 3),
        (("analyze", "--model", "uq-su2", "--preset", "half", "--h", "1i"), 3),
        (("evolve", "uq-su2", "--preset", "half", "--rho0", "w+"), 3),
        (("evolve", "uq-su2", "--preset", "half", "--rho0", "[[[2,0],[0,0]],[[0,0],[-1,0]]]"), 3),
        (("evolve", "uq-su2", "--preset", "half", "--dt", "1"), 3),
        (("audit", "nope"), 2),
        (("audit", "--file", "/nonexistent/model.json"), 4),
        (("reproduce", "--item", "nope"), 2),
        (("frobnicate",), 3),
        ((), 3),
    ],
)
def test_error_paths(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("hopfevo: error: ")


def test_bad_model_file(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"schema_version": 1}')
    code, _, err = run(capsys, "audit", "--file", str(p))
    assert code == 4 and "bad_file" in err


def test_evolve_writes_csv(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, doc, _ = run_json(capsys, "evolve", "trivial-su2", "--coeffs", "0.25,-0.25,-0.25,0.25", "--rho0", "z+", "--t", "1", "--dt", "1e-3", "--out", str(out))
    assert code == 0
    purity = np.loadtxt(out, delimiter=",", skiprows=1)[:, 4]
    assert np.abs(purity - 1).max() < 1e-9
    assert doc["results"]["trajectory"]["steps"] == 1000


def test_evolve_damping_purifies(capsys, tmp_path):
    out = tmp_path / "d.csv"
    code, doc, _ = run_json(capsys, "evolve", "damping-demo", "--rho0", "z-", "--t", "8", "--dt", "1e-2", "--out", str(out))
    assert code == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data[-1, 4] > 0.999
    assert data[-1, 5] > 0.999  # rho_00: ground-state population


def test_evolve_csv_to_stdout_and_inline_state(capsys):
    code, out, _ = run(capsys, "evolve", "trivial-su2", "--preset", "quarter", "--rho0", "[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]", "--t", "0.01", "--dt", "1e-3")
    assert code == 0
    assert out.splitlines()[0].startswith("t,trace_defect")


def test_solve_coeffs(capsys):
    code, doc, _ = run_json(capsys, "solve-coeffs", "uq-su2", "--ham", "hx", "--z", "0.1", "--real", "--lindblad")
    assert code == 0
    sol = doc["results"]["solution"]
    assert sol["kind"] == "unique"
    assert sol["basepoint"]["alpha0"] == pytest.approx(0.25)
    assert doc["results"]["lindblad_feasibility"]["feasible"] is False


def test_byte_identical_output(capsys, tmp_path):
    argv = ("analyze", "uq-su2", "--preset", "half", "--seed", "4", "--samples", "500")
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b


def test_reproduce_single_item(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "reproduce", "--item", "rank19", "--out", str(out))
    assert code == 0
    assert text.startswith("PASS rank19: rank=19, nullity=8")
    assert json.loads(out.read_text())["pass"] is True


def test_reproduce_failure_exit_code(capsys):
    code, text, _ = run(capsys, "reproduce", "--item", "positivity-witness")
    assert code == 1
    assert text.startswith("FAIL positivity-witness")
