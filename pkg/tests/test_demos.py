import os
import runpy
import shutil
import subprocess

import pytest

DEMOS = os.path.join(os.path.dirname(__file__), os.pardir, "demos")
SCRIPTS = sorted(f for f in os.listdir(DEMOS) if f.endswith(".py"))


@pytest.mark.parametrize("script", SCRIPTS)
def test_demo_runs(script, capsys):
    runpy.run_path(os.path.join(DEMOS, script), run_name="__main__")
    assert capsys.readouterr().out.strip()


@pytest.mark.skipif(shutil.which("toricres") is None, reason="console script not installed")
def test_cli_walkthrough(tmp_path):
    res = subprocess.run(
        ["sh", os.path.abspath(os.path.join(DEMOS, "cli_walkthrough.sh"))],
        cwd=tmp_path, capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "out" / "D.svg").exists()
    assert (tmp_path / "out" / "truncate" / "homology.json").exists()
