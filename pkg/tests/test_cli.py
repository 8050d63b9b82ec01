import json
import subprocess
import sys

import pytest

from cremona.cli import main
from cremona.planemap import IDENTITY, PlaneMap, parse_map
from cremona.registry import PSI_TEXT, psi, sigma


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_map_inverse_sigma(capsys):
    code, out, _ = run(capsys, "map", "inverse", "--map", "sigma")
    assert code == 0 and parse_map(out.strip()) == sigma()


def test_map_eval_base_point(capsys):
    code, out, _ = run(capsys, "map", "eval", "--map", "psi", "--point", "0:1:0")
    assert code == 0 and out.strip() == "indeterminate (base point)"
    code, out, _ = run(capsys, "map", "eval", "--map", "psi", "--point", "0:0:1")
    assert out.strip() == "(1:0:0)"


def test_map_compose_identity(capsys):
    code, out, _ = run(capsys, "map", "compose", "--map", "identity", "--map", "psi")
    assert code == 0 and parse_map(out.strip()) == psi()


def test_map_json_twins(capsys):
    code, out, _ = run(capsys, "--format", "json", "map", "show", "--map", PSI_TEXT)
    assert PlaneMap.from_json(json.loads(out)) == psi()
    code, out, _ = run(capsys, "map", "contracted", "--map", "psi", "--format", "json")
    data = json.loads(out)
    assert sorted(c["image"] for c in data) == ["(1:0:0)", "(1:0:0)"]
    code, out, _ = run(capsys, "map", "jacobian", "--map", "sigma", "--format", "json")
    assert json.loads(out)["jacobian"] == "2*x*y*z"


def test_basepoints_table(capsys):
    code, out, _ = run(capsys, "basepoints", "--map", "psi", "--format", "table")
    rows = [l for l in out.splitlines() if l.startswith("p_")]
    assert code == 0 and len(rows) == 9
    assert "m=4" in rows[0] and all("m=1 " in r for r in rows[1:])
    assert "proximate to p_1, p_2" in rows[2]


def test_basepoints_other_formats(capsys):
    _, out, _ = run(capsys, "basepoints", "--map", "psi", "--format", "dot")
    assert out.startswith("digraph") and "style=dashed" in out
    _, out, _ = run(capsys, "basepoints", "--map", "psi", "--format", "csv")
    assert out.splitlines()[0] == "label,multiplicity,point,proximate_to"
    assert len(out.strip().splitlines()) == 10
    _, out, _ = run(capsys, "basepoints", "--map", "psi", "--format", "json")
    assert len(json.loads(out)["nodes"]) == 9


def test_basepoints_small_maps(capsys):
    _, out, _ = run(capsys, "basepoints", "--map", "identity")
    assert out.strip() == "no base points"
    _, out, _ = run(capsys, "basepoints", "--map", "(y*z:x*z:x*y)")
    assert sum(l.startswith("p_") for l in out.splitlines()) == 3


def test_mu_psi(capsys):
    code, out, _ = run(capsys, "mu", "--map", "psi", "--horizon", "6")
    assert code == 0
    assert "verdict: not-regularizable-evidence" in out
    data_code, data, _ = run(capsys, "--format", "json", "mu", "--map", "psi", "--horizon", "6")
    rep = json.loads(data)
    assert rep["mu_lower_bound"] >= 1 and rep["oracle_mismatches"] == []


def test_mu_sigma(capsys):
    code, out, _ = run(capsys, "mu", "--map", "sigma")
    assert code == 0 and "mu = 0" in out and "regularizable-evidence" in out


def test_mu_chi_family(capsys):
    code, out, _ = run(capsys, "--format", "json", "mu", "--map", "chi_np", "--n", "2",
                       "--p", "3", "--horizon", "4")
    assert code == 0 and json.loads(out)["mu_lower_bound"] >= 1


def test_mu_inconclusive_exit_code(capsys):
    code, out, _ = run(capsys, "mu", "--map", "psi", "--horizon", "1")
    assert code == 2 and "inconclusive" in out


def test_degrees(capsys):
    _, out, _ = run(capsys, "degrees", "--map", "psi", "--horizon", "2", "--format", "csv")
    assert out.split() == ["k,degree", "1,5", "2,25"]
    _, out, _ = run(capsys, "degrees", "--map", "psi", "--horizon", "3", "--degree-cap", "30")
    assert "deg f^2 = 25" in out and "stopped" in out


def test_usage_errors(capsys):
    code, _, err = run(capsys, "map", "show", "--map", "(x + * y : y : z)")
    assert code == 1 and "error" in err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    code, _, _ = run(capsys, "map", "eval", "--map", "psi")
    assert code == 1


def test_verify_seed_stability(capsys):
    patterns = []
    for seed in ("42", "43"):
        code, out, _ = run(capsys, "--format", "json", "verify-paper", "--seed", seed,
                           "--only", "15", "--only", "17")
        patterns.append([c["status"] for c in json.loads(out)["checks"]])
        assert code == 0
    assert patterns[0] == patterns[1]


def test_verify_short_horizon_skips(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify-paper", "--horizon", "1",
                       "--only", "10", "--only", "12", "--only", "14", "--only", "16",
                       "--only", "1")
    checks = {c["index"]: c for c in json.loads(out)["checks"]}
    for i in (10, 12, 14, 16):
        assert checks[i]["status"] == "skipped" and "horizon too small" in checks[i]["detail"]
    assert checks[1]["status"] == "pass" and code == 0


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "cremona.cli", "map", "show", "--map", "sigma"],
                          capture_output=True, text=True, check=True)
    assert parse_map(proc.stdout.strip()) == sigma()
