import json
import math

import numpy as np
import pytest

from alphasphere import load_profile
from alphasphere.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    import csv
    import io
    rows = list(csv.reader(io.StringIO(text)))
    header = rows[0]
    return [dict(zip(header, row)) for row in rows[1:]]


def test_dilation_table_alpha_one(capsys):
    code, out, _ = run_cli(capsys, "dilation-table", "--alpha", "1",
                           "--lambda", "2,10,100")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 3
    for row in rows:
        assert float(row["e_alpha"]) == pytest.approx(8 * math.pi, rel=1e-12)
        assert float(row["xi"]) == 0.0


def test_dilation_table_bound_columns(capsys):
    code, out, _ = run_cli(capsys, "dilation-table", "--alpha", "1.5",
                           "--lambda", "2,100")
    assert code == 0
    rows = parse_csv(out)
    assert rows[0]["xi_sigma_small"] == "pass"
    assert rows[1]["xi_sigma_large"] == "pass"


def test_energy_identity(capsys):
    code, out, _ = run_cli(capsys, "energy", "--map", "identity",
                           "--alpha", "1.5", "--grid", "200,16")
    assert code == 0
    row = parse_csv(out)[0]
    assert float(row["e_alpha"]) == pytest.approx(16 * math.pi, rel=1e-9)
    assert row["degree_int"] == "1"
    assert row["passes_floor"] == "true"


def test_energy_mobius_map(capsys):
    code, out, _ = run_cli(capsys, "energy", "--map", "mobius:2,0,0,0.5",
                           "--alpha", "1.2", "--grid", "300,16")
    assert code == 0
    row = parse_csv(out)[0]
    assert row["degree_int"] == "1"
    assert float(row["e_alpha"]) > 2 ** 3.4 * math.pi


def test_energy_conjugation_map(capsys):
    code, out, _ = run_cli(capsys, "energy", "--map", "conjugation",
                           "--alpha", "1.5", "--grid", "200,16")
    assert code == 0
    row = parse_csv(out)[0]
    assert row["degree_int"] == "-1"
    assert row["passes_floor"] == "true"  # floor only binds degree one


def test_radial_solve_and_profile_roundtrip(capsys, tmp_path):
    prof = tmp_path / "prof.txt"
    code, out, _ = run_cli(capsys, "radial-solve", "--alpha", "1.4", "--n", "1",
                           "--N", "300", "--profile-out", str(prof))
    assert code == 0
    row = parse_csv(out)[0]
    assert row["converged"] == "true"
    p = load_profile(prof)
    assert p.n == 1
    assert np.max(np.abs(p.fs - p.rs)) < 1e-6

    code, out, _ = run_cli(capsys, "energy", "--map", f"radial:{prof}",
                           "--alpha", "1.4", "--grid", "200,8")
    assert code == 0
    assert parse_csv(out)[0]["degree_int"] == "1"


def test_radial_solve_continuation(capsys):
    code, out, _ = run_cli(capsys, "radial-solve", "--alpha", "1.3", "--n", "3",
                           "--N", "300", "--continuation", "1.5,1.4")
    assert code == 0
    row = parse_csv(out)[0]
    assert row["converged"] == "true"
    assert float(row["alpha"]) == 1.3


def test_verify_subset_and_determinism(capsys, tmp_path):
    args = ("verify", "--level", "quick", "--criteria", "c02,c04,c08",
            "--seed", "11")
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    code1, _, err1 = run_cli(capsys, *args, "-o", str(f1))
    code2, _, _ = run_cli(capsys, *args, "-o", str(f2))
    assert code1 == code2 == 0
    assert f1.read_bytes() == f2.read_bytes()
    assert "checks passed" in err1


def test_json_mirrors_csv(capsys):
    code, out, _ = run_cli(capsys, "dilation-table", "--alpha", "1.2",
                           "--lambda", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"][0] == "alpha"
    assert doc["rows"][0]["e_alpha"] == pytest.approx(
        2 ** 3.4 * math.pi, rel=0.2)


def test_sweep_dilation(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--alpha", "1.2,1.5",
                           "--lambda", "2,4")
    assert code == 0
    assert len(parse_csv(out)) == 4


def test_sweep_radial(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--alpha", "1.3", "--n", "1,2",
                           "--N", "200")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 2
    assert all(r["converged"] == "true" for r in rows)


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpha = 1.5\nlambda = 2,4\n# comment\nformat = csv\n")
    code, out, _ = run_cli(capsys, "dilation-table", "--config", str(cfg),
                           "--lambda", "3")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 1  # flag overrides the file's lambda list
    assert float(rows[0]["lambda"]) == 3.0


def test_outdir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ALPHASPHERE_OUTDIR", str(tmp_path / "reports"))
    code, _, _ = run_cli(capsys, "dilation-table", "--alpha", "1.1",
                         "--lambda", "2", "-o", "table.csv")
    assert code == 0
    assert (tmp_path / "reports" / "table.csv").exists()


@pytest.mark.parametrize("argv", [
    ("dilation-table", "--alpha", "oops", "--lambda", "2"),
    ("dilation-table", "--lambda", "2"),
    ("verify", "--criteria", "c99"),
    ("energy", "--map", "wat", "--alpha", "1.2"),
    ("radial-solve", "--alpha", "1.2", "--n", "3"),
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert "config error" in err


def test_bad_config_file_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    code, _, err = run_cli(capsys, "dilation-table", "--config", str(cfg),
                           "--alpha", "1.2", "--lambda", "2")
    assert code == 2
    assert "unknown key" in err


def test_unconverged_solve_exits_1(capsys):
    # a threefold solve on a very coarse grid leaves the residual above the
    # convergence gate; the row is reported and the exit status flags it
    code, out, _ = run_cli(capsys, "radial-solve", "--alpha", "1.2", "--n", "3",
                           "--N", "150")
    assert code == 1
    assert parse_csv(out)[0]["converged"] == "false"
