import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize("script, expect", [
    ("two_provider_walkthrough.py", "PoA = 1.4375"),
    ("auction_vs_market.py", "0 beat the truthful bid"),
    ("rationality_sweep.py", "43.7500%"),
])
def test_demo_runs(script, expect):
    res = subprocess.run([sys.executable, str(DEMOS / script)], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0, res.stderr
    assert expect in res.stdout
