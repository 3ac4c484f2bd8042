"""Regenerate tests/snapshots/*.out from tests/snapshots/cases.json.

Run only after an intended change of CLI output; review the diff.
"""

import io
import json
import os
import shlex
from pathlib import Path

from lefkit import cli

ROOT = Path(__file__).resolve().parents[1]
SNAP = ROOT / "tests" / "snapshots"


def main():
    os.environ.pop("LEFKIT_FIXTURES", None)
    os.chdir(SNAP)  # so bare fixture names resolve through the package
    cases = json.loads((SNAP / "cases.json").read_text())
    for name, line in cases:
        buf = io.StringIO()
        code = cli.run(shlex.split(line), buf)
        (SNAP / f"{name}.out").write_text(f"exit {code}\n" + buf.getvalue(), encoding="utf-8")
    print(f"wrote {len(cases)} snapshots")


if __name__ == "__main__":
    main()
