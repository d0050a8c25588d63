import subprocess
import sys

import pytest

from splaylab.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_deterministic(capsys):
    code, out, _ = run_cli(["gen", "--kind", "random", "--n", "6", "--seed", "4"], capsys)
    assert code == 0
    again, out2, _ = run_cli(["gen", "--kind", "random", "--n", "6", "--seed", "4"], capsys)
    assert out == out2
    assert sorted(map(int, out.split())) == [1, 2, 3, 4, 5, 6]


def test_gen_sequential(capsys):
    code, out, _ = run_cli(["gen", "--kind", "sequential", "--n", "4"], capsys)
    assert code == 0 and out.strip() == "1 2 3 4"


def test_gen_k_increasing_requires_k(capsys):
    code, _, err = run_cli(["gen", "--kind", "k-increasing", "--n", "8"], capsys)
    assert code == 2 and "k" in err


def test_seed_env_var(capsys, monkeypatch):
    monkeypatch.setenv("SPLAYLAB_SEED", "11")
    _, from_env, _ = run_cli(["gen", "--kind", "random", "--n", "6"], capsys)
    _, explicit, _ = run_cli(["gen", "--kind", "random", "--n", "6", "--seed", "11"], capsys)
    assert from_env == explicit
    # flag beats env
    _, other, _ = run_cli(["gen", "--kind", "random", "--n", "6", "--seed", "12"], capsys)
    assert other != from_env
    monkeypatch.setenv("SPLAYLAB_SEED", "pony")
    code, _, err = run_cli(["gen", "--kind", "random", "--n", "6"], capsys)
    assert code == 2 and "SPLAYLAB_SEED" in err


def test_run_writes_csv(tmp_path, capsys):
    out_csv = tmp_path / "rows.csv"
    code, _, _ = run_cli(
        ["run", "--kind", "preorder", "--n", "64", "--seed", "2",
         "--trials", "3", "--csv", str(out_csv)],
        capsys,
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0].startswith("kind,n,seed,trial,")
    assert len(lines) == 4


def test_run_byte_identical(tmp_path, capsys):
    args = ["run", "--kind", "preorder", "--n", "128", "--seed", "9", "--trials", "4"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--csv", str(a)], capsys)[0] == 0
    assert run_cli(args + ["--csv", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_stdout(capsys):
    code, out, _ = run_cli(
        ["run", "--kind", "sequential", "--n", "50", "--csv", "-"], capsys
    )
    assert code == 0
    assert ",99," in out.splitlines()[1]


def test_run_bad_config(capsys):
    code, _, err = run_cli(
        ["run", "--kind", "balanced", "--n", "100", "--csv", "-"], capsys
    )
    assert code == 2 and "2**k - 1" in err


def test_run_figures(tmp_path, capsys):
    out_csv = tmp_path / "rows.csv"
    code, out, _ = run_cli(
        ["run", "--kind", "balanced", "--n", "63", "--trials", "2",
         "--csv", str(out_csv), "--figures"],
        capsys,
    )
    assert code == 0
    pngs = list(tmp_path.glob("*.png"))
    assert pngs and all(p.stat().st_size > 0 for p in pngs)


def test_report_outdir(tmp_path, capsys):
    out_csv = tmp_path / "rows.csv"
    run_cli(
        ["run", "--kind", "preorder", "--n", "64", "--trials", "2",
         "--csv", str(out_csv)],
        capsys,
    )
    figdir = tmp_path / "figs"
    code, out, _ = run_cli(
        ["report", "--csv", str(out_csv), "--outdir", str(figdir)], capsys
    )
    assert code == 0
    assert list(figdir.glob("*.png"))


def test_report_missing_csv(tmp_path, capsys):
    code, _, err = run_cli(["report", "--csv", str(tmp_path / "nope.csv")], capsys)
    assert code == 2


def test_check_classes(tmp_path, capsys):
    f = tmp_path / "perm.txt"
    f.write_text("5 3 2 1 4 7 6\n")
    assert run_cli(["check", "--file", str(f), "--class", "preorder"], capsys)[0] == 0
    assert run_cli(["check", "--file", str(f), "--class", "postorder"], capsys)[0] == 1
    f.write_text("1, 3, 2\n")  # commas allowed
    assert run_cli(["check", "--file", str(f), "--class", "postorder"], capsys)[0] == 0
    assert (
        run_cli(
            ["check", "--file", str(f), "--class", "k-increasing", "--k", "3"], capsys
        )[0]
        == 0
    )


def test_check_bad_inputs(tmp_path, capsys):
    f = tmp_path / "perm.txt"
    f.write_text("1 1 2\n")
    assert run_cli(["check", "--file", str(f), "--class", "preorder"], capsys)[0] == 2
    f.write_text("1 2 x\n")
    assert run_cli(["check", "--file", str(f), "--class", "preorder"], capsys)[0] == 2
    code, _, _ = run_cli(
        ["check", "--file", str(tmp_path / "missing.txt"), "--class", "preorder"],
        capsys,
    )
    assert code == 2
    f.write_text("2 1\n")
    code, _, _ = run_cli(["check", "--file", str(f), "--class", "k-increasing"], capsys)
    assert code == 2  # --k missing


def test_fuzz_reports_known_violations(capsys):
    # the literal k >= 4 insertion-order clause fails, so fuzz exits 1
    code, out, _ = run_cli(
        ["fuzz", "--max-exhaustive", "4", "--trials", "1", "--n", "32", "--seed", "0"],
        capsys,
    )
    assert code == 1
    assert "k_avoiding_shape_k4" in out
    assert "[2, 4, 3, 1]" in out
    assert "ancestor_precedence: " in out and "ok" in out


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "splaylab.cli", "gen", "--kind", "sequential", "--n", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1 2 3"
