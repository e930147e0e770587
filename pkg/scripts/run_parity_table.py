#!/usr/bin/env python3
"""n-parity convergence table: product network rows for n = 2..7 at their
best hidden sizes, plus the tanh-tanh MLP contrast at parity 5 with h = 50.

Each row is 100 seeds with a 10000-epoch cap. Results land in results/.
"""

import pathlib
import sys

from quasinet.cli import main
from quasinet.experiments import PARITY_HIDDEN

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    extra = sys.argv[1:]
    rc = 0
    for n in sorted(PARITY_HIDDEN):
        rc |= main([
            "parity", "--n", str(n),
            "--out-csv", str(OUT / f"parity{n}.csv"),
            "--out-json", str(OUT / f"parity{n}.json"),
        ] + extra)
    rc |= main([
        "parity", "--n", "5", "--baseline", "--arch", "tanh:50,tanh:1",
        "--out-csv", str(OUT / "parity5_mlp.csv"),
        "--out-json", str(OUT / "parity5_mlp.json"),
    ] + extra)
    raise SystemExit(rc)
