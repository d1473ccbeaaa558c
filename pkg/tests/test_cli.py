import csv
import io
import json

import pytest

from stator_gates.cli import COMMANDS, CURVE_HEADER, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_curves_csv(capsys):
    code, out, _ = run(capsys, "curves", "--points", "50")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert tuple(rows[0]) == tuple(CURVE_HEADER) == ("n", "xi", "E0", "E0_exact", "EFPT", "F")
    assert len(rows) == 51
    assert all(len(r[1].split(".")[1]) == 6 for r in rows[1:])


def test_curves_json(capsys):
    code, out, _ = run(capsys, "curves", "--points", "10", "--format", "json")
    body = json.loads(out)
    assert code == 0 and len(body["points"]) == 10


def test_plan(capsys):
    code, out, _ = run(capsys, "plan", "--xi", "0.17")
    body = json.loads(out)
    assert code == 0 and body["method"] == "improved"
    assert body["F"] == pytest.approx(0.856, abs=0.002)
    assert body["E0"] == pytest.approx(0.897, abs=0.002)


def test_plan_csv(capsys):
    code, out, _ = run(capsys, "plan", "--xi", "0.6", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1][0] == "fpt" and rows[1][2] == ""


def test_fpt_full(capsys):
    code, out, _ = run(capsys, "fpt", "--xi", "0.3", "--F", "1.0")
    body = json.loads(out)
    assert code == 0
    assert body["F"] == pytest.approx(1) and body["E"] == pytest.approx(1)
    assert body["classical_bits"] == 2
    op = body["branches"][0]["operator"]
    # row-major [re, im] pairs
    assert len(op) == 16 and all(len(z) == 2 for z in op)


def test_branches_csv(capsys):
    code, out, _ = run(capsys, "deterministic", "--xi", "0.2", "--format", "csv", "--target", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 8
    assert sum(float(r["probability"]) for r in rows) == pytest.approx(1, abs=1e-5)
    assert rows[0]["path"].startswith("sx:a=")


@pytest.mark.parametrize("argv", [
    ("smallxi", "--xi", "0.3"),
    ("improved", "--xi", "0.17"),
    ("multiparty", "--xi", "0.3", "--N", "3"),
    ("multiparty", "--xi", "0.17", "--N", "2", "--mode", "improved", "--charlie"),
    ("multiparty", "--xi", "0.3", "--N", "2", "--mode", "fpt", "--F", "0.8", "--axes", "1,0,0;0,0,1"),
])
def test_protocol_commands(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert 0 < json.loads(out)["F"] <= 1 + 1e-12


def test_deterministic_output(capsys):
    a = run(capsys, "improved", "--xi", "0.2", "--n", "2.5", "--seed", "7")[1]
    b = run(capsys, "improved", "--xi", "0.2", "--n", "2.5", "--seed", "7")[1]
    assert a == b


def test_output_file(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, out, _ = run(capsys, "curves", "--points", "5", "-o", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("n,xi,")


@pytest.mark.parametrize("argv", [
    ("deterministic",),
    ("fpt", "--xi", "0.3"),
    ("fpt", "--xi", "0.3", "--F", "1.5"),
    ("deterministic", "--xi", "2.0"),
    ("improved", "--xi", "0.6"),
    ("multiparty", "--xi", "0.3", "--N", "1"),
    ("multiparty", "--xi", "0.3", "--N", "9"),
    ("deterministic", "--xi", "0.3", "--axis-a", "0,0,0"),
    ("deterministic", "--xi", "0.3", "--axis-a", "1,1"),
    ("deterministic", "--xi", "0.3", "--target", "7"),
    ("bogus",),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "plan", "--xi", "0.2", "-o", str(tmp_path / "missing" / "x.json"))
    assert code == 2 and "cannot write" in err


def test_all_commands_registered():
    assert set(COMMANDS) >= {"deterministic", "fpt", "smallxi", "improved", "curves", "plan", "multiparty", "verify-all"}


def test_axis_is_normalized(capsys):
    code, out, _ = run(capsys, "deterministic", "--xi", "0.3", "--axis-a", "1,1,1")
    assert code == 0
    assert json.loads(out)["params"]["axis_a"] == pytest.approx([3 ** -0.5] * 3)


def test_csv_round_trip(capsys):
    from stator_gates.analysis import default_grid, generate_curve

    _, out, _ = run(capsys, "curves", "--points", "40")
    curve = generate_curve(n_grid=default_grid(points=40))
    rows = list(csv.DictReader(io.StringIO(out)))
    for r, p in zip(rows, curve):
        assert float(r["n"]) == pytest.approx(p.n, abs=5e-7)
        assert float(r["F"]) == pytest.approx(p.F, abs=5e-7)
        assert float(r["EFPT"]) == pytest.approx(p.E_FPT, abs=5e-7)


def test_byte_identical_files(tmp_path):
    paths = [tmp_path / f"r{i}.json" for i in range(2)]
    for p in paths:
        assert main(["multiparty", "--xi", "0.2", "--N", "3", "--seed", "11", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"\r\n" not in paths[0].read_bytes()


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify-all")
    assert code == 0
    assert "n0 provenance: sextic_root=1.214" in out
    assert out.rstrip().endswith("ALL PASS")
    assert "[FAIL]" not in out
