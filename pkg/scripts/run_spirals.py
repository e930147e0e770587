#!/usr/bin/env python3
"""2-spirals benchmark: deep product network (tanh:10,prod:80,tanh:5,prod:1),
10 seeds, 10000 epochs, accuracy sampled every 10 epochs.

Also exports the generated dataset so the spiral geometry can be plotted.
"""

import pathlib
import sys

from quasinet.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    argv = [
        "spirals",
        "--out-csv", str(OUT / "spirals.csv"),
        "--out-json", str(OUT / "spirals.json"),
        "--out-data-csv", str(OUT / "spirals_data.csv"),
    ] + sys.argv[1:]
    raise SystemExit(main(argv))
