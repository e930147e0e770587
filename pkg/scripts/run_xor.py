#!/usr/bin/env python3
"""Standard XOR convergence benchmark: minimal product network, 100 seeds.

Writes per-run results and a summary next to this script under results/.
"""

import pathlib
import sys

from quasinet.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    argv = [
        "xor",
        "--out-csv", str(OUT / "xor.csv"),
        "--out-json", str(OUT / "xor.json"),
    ] + sys.argv[1:]
    raise SystemExit(main(argv))
