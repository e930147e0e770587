#!/usr/bin/env python3
"""Hidden-size sweeps for 4-parity and 6-parity product networks.

The question the sweep answers: how far can the hidden layer shrink before
convergence suffers, and where is the sweet spot relative to the input count.
"""

import pathlib
import sys

from quasinet.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    extra = sys.argv[1:]
    rc = 0
    for n in (4, 6):
        rc |= main([
            "sweep", "--n", str(n),
            "--out-json", str(OUT / f"sweep_parity{n}.json"),
        ] + extra)
    raise SystemExit(rc)
