import json
import subprocess
import sys
from fractions import Fraction

import pytest

from crgjms.cli import main
from crgjms.opalgebra import NcNormal, OpPoly, gjms_product, obstruction_closed_form


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gjms_text_and_latex(capsys):
    assert run(capsys, "gjms", "--n", "2", "--k", "1")[1] == "Δ_b\n"
    assert run(capsys, "gjms", "--n", "2", "--k", "2", "--format", "latex")[1] == "\\Delta_b^2+T^2\n"
    out = run(capsys, "gjms", "--n", "2", "--k", "2", "--format", "latex", "--factored")[1]
    assert out == "(\\Delta_b+iT)(\\Delta_b-iT)\n"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gjms_json_reparses(capsys, n):
    for k in range(1, n + 2):
        code, out, _ = run(capsys, "gjms", "--n", str(n), "--k", str(k), "--format", "json")
        assert code == 0
        assert OpPoly.from_json(json.loads(out)["operator"]) == gjms_product(n, k)


@pytest.mark.parametrize("n", [2, 3])
def test_obstruction_json_reparses(capsys, n):
    code, out, _ = run(capsys, "obstruction", "--n", str(n), "--format", "json")
    assert code == 0
    assert NcNormal.from_json(json.loads(out)) == obstruction_closed_form(n)


def test_obstruction_latex(capsys):
    code, out, _ = run(capsys, "obstruction", "--n", "2", "--format", "latex", "--factored")
    assert code == 0 and out.startswith("-\\frac{1}{4}")


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "gjms", "--n", "2", "--k", "4")[0] == 2
    assert run(capsys, "obstruction", "--n", "1")[0] == 2
    code, _, err = run(capsys, "dirichlet", "--n", "1", "--k", "1", "--boundary", "z1 +")
    assert code == 2 and "at byte 4" in err
    assert run(capsys, "verify", "--n", "3..1")[0] == 2
    assert run(capsys, "logq", "--profile", "/nonexistent/profile.json")[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2


def test_dirichlet_example(capsys):
    code, out, _ = run(capsys, "dirichlet", "--n", "1", "--k", "1", "--boundary", "z1*zb1")
    assert code == 0 and "G|_M = -4" in out
    code, out, _ = run(capsys, "dirichlet", "--n", "2", "--k", "3", "--boundary", "1", "--format", "json")
    data = json.loads(out)
    assert data["G_boundary"] == "0" and data["residual_zero"]


def test_logq_and_volume(capsys, tmp_path):
    a = Fraction(3, 7)
    prof = tmp_path / "p.json"
    prof.write_text(json.dumps({"n": 2, "b": [[6, str(a)]], "c": []}))
    code, out, _ = run(capsys, "logq", "--profile", str(prof), "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert Fraction(data["Q"]) == Fraction(-18, 7)
    assert data["B_boundary"] == "-3/14"
    code, out, _ = run(capsys, "logq", "--profile", str(prof), "--ambiguity", "5/2")
    assert code == 0 and "Q = -18/7" in out
    code, out, _ = run(capsys, "volume", "--profile", str(prof), "--format", "json")
    assert code == 0 and json.loads(out)["volume"]["L"] == "3/7"


def test_bad_profile_exit_2(capsys, tmp_path):
    prof = tmp_path / "bad.json"
    prof.write_text(json.dumps({"n": 2, "b": [[0, "5"]]}))
    assert run(capsys, "volume", "--profile", str(prof))[0] == 2


def test_qtransform(capsys):
    assert run(capsys, "qtransform", "--n", "1", "--upsilon", "z1*zb1")[1] == "0\n"
    assert run(capsys, "qtransform", "--n", "2", "--upsilon", "1")[1] == "0\n"


def test_dump_curvature(capsys):
    code, out, _ = run(capsys, "dump-curvature", "--n", "1")
    data = json.loads(out)
    assert code == 0 and data["rank"] == 4
    assert data["components"]["t,bt,t,bt"]["terms"][0]["a"]["terms"]


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "op.txt"
    code, out, _ = run(capsys, "gjms", "--n", "1", "--k", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "Δ_b^2 + T^2\n"


def test_verify_is_deterministic(capsys):
    runs = [json.loads(run(capsys, "verify", "--suite", "all", "--n", "2", "--seed", "0", "--format", "json")[1]) for _ in range(2)]
    assert runs[0]["canonical"] == runs[1]["canonical"]
    assert runs[0]["canonical_sha256"] == runs[1]["canonical_sha256"]
    assert runs[0]["canonical"]["passed"]


def test_verify_parallel_matches_serial(capsys):
    args = ("verify", "--suite", "frame", "--n", "1..2", "--format", "json")
    serial = json.loads(run(capsys, *args)[1])
    parallel = json.loads(run(capsys, *args, "--jobs", "2")[1])
    assert serial["canonical_sha256"] == parallel["canonical_sha256"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "crgjms", "gjms", "--n", "1", "--k", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "Δ_b\n"
