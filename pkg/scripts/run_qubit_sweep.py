#!/usr/bin/env python3
"""Sweep the Bloch ball and verify the qubit closed form on every grid point.

Writes the CSV via the CLI code path, then reports the worst deviation of
the computed value from sqrt(r1^2 + r2^2), which should be at solver noise.
"""
from __future__ import annotations

import csv
import math
import pathlib
import sys
import tempfile

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from cohrob.cli import main as cli_main  # noqa: E402


def run(steps: int = 15) -> None:
    out = pathlib.Path(tempfile.mkdtemp()) / "sweep.csv"
    code = cli_main(["sweep-qubit", "--steps", str(steps), "--out", str(out)])
    if code != 0:
        raise SystemExit(code)
    worst = 0.0
    rows = 0
    with open(out, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows += 1
            expected = math.hypot(float(row["r1"]), float(row["r2"]))
            worst = max(worst, abs(float(row["roc"]) - expected),
                        abs(float(row["l1"]) - expected))
    print(f"{rows} grid points, worst deviation from closed form: {worst:.3e}")
    print(f"csv: {out}")


if __name__ == "__main__":
    run(int(sys.argv[1]) if len(sys.argv) > 1 else 15)
