"""Run the acceptance suite and show one verdict line per criterion."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    cmd = [sys.executable, "-m", "pytest", "-q", "-s", str(ROOT / "tests" / "test_acceptance.py"),
           *sys.argv[1:]]
    sys.exit(subprocess.call(cmd, cwd=ROOT))
