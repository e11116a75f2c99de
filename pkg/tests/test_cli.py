import json
import subprocess
import sys

import pytest

from recollada import cli
from recollada.specfile import example_path


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_build_golden(capsys):
    code, rep = run(capsys, "build", example_path("golden"))
    assert code == 0
    assert rep["dim"] == 10 and rep["idempotents"] == 3
    assert rep["gorenstein"] == {"right": 2, "left": 2}
    assert rep["global_dimension"]["finite"] is False
    t = rep["triangular"]
    assert t["M"]["proj_dim_over_B"] == 1 and t["M"]["proj_dim_over_C"] == 0
    assert t["B"]["gorenstein"] and t["C"]["gorenstein"] == {"right": 0, "left": 0}
    assert rep["tool"] == "recollada" and rep["prime"] == 101


def test_build_dual_numbers(capsys):
    code, rep = run(capsys, "build", example_path("dual_numbers"))
    assert code == 0 and rep["dim"] == 2 and rep["gorenstein"] == {"right": 0, "left": 0}
    assert "triangular" not in rep


def test_build_lt2_has_finite_global_dimension(capsys):
    _, rep = run(capsys, "build", example_path("lt2"))
    assert rep["global_dimension"] == {"finite": True, "value": 1, "witness": "simple 2"}


def test_build_non_gorenstein_reports_null(capsys):
    code, rep = run(capsys, "build", example_path("nongorenstein"))
    assert code == 0 and rep["gorenstein"] is None


def test_malformed_relation_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"quiver": {"vertices": ["1"], "arrows": [["x","1","1"]],\n "relations": [[[1, ["x","y"]]]]}}')
    assert cli.main(["build", str(p)]) == 2
    err = capsys.readouterr().err
    assert "bad.json:2:" in err and "unknown arrow" in err


def test_syntax_error_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{\"quiver\": ")
    assert cli.main(["verify", str(p)]) == 2
    assert "bad.json:1:" in capsys.readouterr().err


def test_non_triangular_spec_exit_2(capsys):
    assert cli.main(["verify", str(example_path("dual_numbers"))]) == 2


def test_window_must_be_positive(capsys):
    assert cli.main(["verify", str(example_path("golden")), "--mode", "ladder", "--window", "0"]) == 2


def test_verify_recollement(capsys):
    code, rep = run(capsys, "verify", example_path("golden"), "--mode", "recollement", "--seed", 7)
    assert code == 0 and rep["summary"]["fail"] == 0 and rep["seed"] == 7 and rep["samples"] == 12


def test_verify_ladder(capsys):
    code, rep = run(capsys, "verify", example_path("golden"), "--mode", "ladder", "--window", 2)
    assert code == 0 and rep["window"] == 2 and not rep["hypothesis_violation"]


def test_verify_ladder_non_gorenstein_exit_3(capsys):
    code, rep = run(capsys, "verify", example_path("nongorenstein"), "--mode", "ladder")
    assert code == 3 and rep["hypothesis_violation"]


def test_verify_splitting(capsys):
    code, rep = run(capsys, "verify", example_path("lt2"), "--mode", "splitting")
    assert code == 0 and rep["verdict"] == "not splitting" and rep["witness"]
    code, rep = run(capsys, "verify", example_path("product"), "--mode", "splitting")
    assert code == 0 and rep["verdict"] == "consistent with splitting"


def test_verify_cy(capsys):
    _, rep = run(capsys, "verify", example_path("dual_numbers"), "--mode", "cy")
    assert rep["calabi_yau_dimension"] == 0
    _, rep = run(capsys, "verify", example_path("lt2"), "--mode", "cy")
    assert rep["calabi_yau_dimension"] is None


def test_verify_period_and_stable_report_failures(capsys):
    code, rep = run(capsys, "verify", example_path("golden"), "--mode", "period")
    assert code == 1 and rep["image_form"] and not rep["strict_commutation"]
    code, rep = run(capsys, "verify", example_path("golden"), "--mode", "stable")
    assert code == 1 and rep["summary"]["fail"] == 1 and rep["assumes_compatible_M"]
    code, rep = run(capsys, "verify", example_path("product"), "--mode", "period")
    assert code == 0


def test_gp_command(capsys):
    code, rep = run(capsys, "gp", example_path("golden"), "--depth", 6)
    assert code == 0 and rep["all_agree"] and rep["pool_size"] == 14 and rep["gp_count"] == 7
    code, rep = run(capsys, "gp", example_path("dual_numbers"), "--depth", 3)
    assert code == 0 and rep["pool_size"] == 3 and rep["gp_count"] == 3
    code, rep = run(capsys, "gp", example_path("lt2"))
    assert code == 0
    # GP = projectives: zero and the two indecomposable projectives
    assert [row["dim"] for row in rep["table"] if row["is_gp"]] == [0, 1, 2]
    assert sum(not row["is_gp"] for row in rep["table"]) == 1


def test_gp_non_gorenstein_exit_3(capsys):
    code, rep = run(capsys, "gp", example_path("nongorenstein"))
    assert code == 3 and rep["hypothesis_violation"]


@pytest.mark.parametrize("mode", ["recollement", "ladder", "splitting", "stable"])
def test_reports_are_byte_identical(tmp_path, capsys, mode):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        cli.main(["verify", str(example_path("lt2")), "--mode", mode, "--json", str(p)])
        outs.append(p.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1] and outs[0]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "recollada.cli", "build", str(example_path("field"))],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["dim"] == 1


def test_prime_from_environment():
    env = {"RECOLLADA_PRIME": "7", "PATH": ""}
    code = "from recollada import exactlin as el; print(el.prime())"
    r = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert r.stdout.strip() == "7"
