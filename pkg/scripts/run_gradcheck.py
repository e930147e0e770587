#!/usr/bin/env python3
"""Finite-difference verification of every analytic gradient on the deep
spirals architecture (the hardest case: two product layers in the chain)."""

import pathlib
import sys

from quasinet.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    argv = ["gradcheck", "--out-json", str(OUT / "gradcheck.json")] + sys.argv[1:]
    raise SystemExit(main(argv))
