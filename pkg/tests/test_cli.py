import json
import textwrap

import pytest

from uavmeta import cli, experiment

BASE = textwrap.dedent("""\
    # small baseline run
    h = 100
    eta_l_db = 0
    eta_n_db = -20
    sweep = gamma
    grid = 0.1, 0.5, 0.9
    theta_db = 0, 20
    eps_scale = 1
    methods = analytic_beta, gil_pelaez, semi_analytic, full_fading
    seed = 3
    n_realizations = 60
    n_fading = 40
    """)


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_validate_ok(tmp_path, capsys):
    assert cli.main(["validate", str(write(tmp_path, BASE))]) == 0
    assert "ok" in capsys.readouterr().out


@pytest.mark.parametrize("line, message", [
    ("grid =", "grid is empty"),
    ("frobnicate = 1", "unknown key"),
    ("eps_scale = 1.5", "eps_scale"),
    ("grid = 0.5, 0.1", "increasing"),
    ("methods = magic", "methods"),
    ("n_fading = 0", "n_fading"),
])
def test_validate_errors(tmp_path, capsys, line, message):
    key = line.split("=")[0].strip()
    text = "\n".join(l for l in BASE.splitlines() if not l.startswith(key + " ")) + "\n" + line + "\n"
    assert cli.main(["validate", str(write(tmp_path, text))]) == 2
    assert message in capsys.readouterr().err


def test_run_writes_csv_and_manifest(tmp_path):
    cfg = write(tmp_path, BASE)
    out = tmp_path / "out" / "a.csv"
    assert cli.main(["run", str(cfg), "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",") == experiment.COLUMNS
    assert len(lines) == 1 + 2 * 3
    row = dict(zip(experiment.COLUMNS, lines[1].split(",")))
    assert all(row[c] != "" for c in experiment.COLUMNS)
    manifest = json.loads(out.with_suffix(".json").read_text())
    assert manifest["controls"]["seed"] == 3
    assert manifest["config"]["theta_db"] == "0, 20"
    assert "wall_time_s" in manifest and len(manifest["diagnostics"]) == 2


def test_absent_methods_leave_empty_cells(tmp_path):
    text = BASE.replace("methods = analytic_beta, gil_pelaez, semi_analytic, full_fading",
                        "methods = analytic_beta")
    out = tmp_path / "b.csv"
    assert cli.main(["run", str(write(tmp_path, text)), "-o", str(out)]) == 0
    row = dict(zip(experiment.COLUMNS, out.read_text().splitlines()[1].split(",")))
    assert row["meta_beta"] != "" and row["meta_semi_analytic"] == "" and row["M1_empirical"] == ""


def test_runs_are_bit_identical_across_workers(tmp_path):
    cfg = write(tmp_path, BASE)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["run", str(cfg), "-o", str(a)])
    cfg2 = write(tmp_path, BASE + "workers = 2\n", "run2.cfg")
    cli.main(["run", str(cfg2), "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_h_and_eps_sweeps(tmp_path):
    text = BASE.replace("sweep = gamma\ngrid = 0.1, 0.5, 0.9", "sweep = h\ngrid = 50, 100\ngamma = 0.9")
    out = tmp_path / "h.csv"
    assert cli.main(["run", str(write(tmp_path, text)), "-o", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    assert sorted({float(r.split(",")[2]) for r in rows}) == [50.0, 100.0]
    text = BASE.replace("sweep = gamma\ngrid = 0.1, 0.5, 0.9", "sweep = eps_scale\ngrid = 0, 1\ngamma = 0.9")
    text = text.replace("eps_scale = 1\n", "")
    out = tmp_path / "e.csv"
    assert cli.main(["run", str(write(tmp_path, text)), "-o", str(out)]) == 0
    eps_l = sorted({float(r.split(",")[3]) for r in out.read_text().splitlines()[1:]})
    assert eps_l[0] == 0.0 and eps_l[1] == pytest.approx(0.5095, abs=1e-4)


def test_compare(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["run", str(cfg), "-o", str(a)])
    cli.main(["run", str(cfg), "-o", str(b)])
    assert cli.main(["compare", str(a), str(b), "--tol", "0"]) == 0
    assert "max|diff| = 0" in capsys.readouterr().out
    assert experiment.compare(a, b)["meta_semi_analytic"] == 0.0

    other = write(tmp_path, BASE.replace("seed = 3", "seed = 4"), "seed4.cfg")
    c = tmp_path / "c.csv"
    cli.main(["run", str(other), "-o", str(c)])
    assert cli.main(["compare", str(a), str(c), "--tol", "0"]) == 1

    broken = tmp_path / "broken.csv"
    broken.write_text("theta_db,gamma\n0,0.5\n")
    assert cli.main(["compare", str(a), str(broken), "--tol", "1"]) == 2


@pytest.mark.slow
def test_seed_to_seed_spread_is_statistical(tmp_path):
    text = BASE.replace("n_realizations = 60", "n_realizations = 2000").replace(
        "methods = analytic_beta, gil_pelaez, semi_analytic, full_fading", "methods = semi_analytic")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["run", str(write(tmp_path, text)), "-o", str(a)])
    cli.main(["run", str(write(tmp_path, text.replace("seed = 3", "seed = 9"), "b.cfg")), "-o", str(b)])
    diffs = experiment.compare(a, b)
    assert 0 < diffs["meta_semi_analytic"] < 0.04
    assert cli.main(["compare", str(a), str(b), "--tol", "0.04"]) == 0
