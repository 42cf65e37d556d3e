import subprocess
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def run(name, *args, cwd):
    return subprocess.run([sys.executable, str(SCRIPTS / name), *args], cwd=cwd,
                          capture_output=True, text=True, check=False)


def test_margin_table(tmp_path):
    res = run("margin_table.py", "--p-max", "4", "--scan-points", "20", "--out-dir", "out",
              cwd=tmp_path)
    assert res.returncode == 0 and "lambda0=0.762714" in res.stdout
    assert (tmp_path / "out" / "margin_table.csv").read_text().count("\n") == 3


def test_riesz_scan(tmp_path):
    res = run("riesz_scan.py", "--grid", "4", "--out-dir", "out", "example33:p=3", cwd=tmp_path)
    assert res.returncode == 0 and "riesz-consistent" in res.stdout
    assert (tmp_path / "out" / "riesz_example33_p3.csv").exists()


def test_oblique_dual(tmp_path):
    res = run("oblique_dual.py", "--trials", "2", cwd=tmp_path)
    assert res.returncode == 0 and "93/2" in res.stdout
