#!/usr/bin/env python3
"""Certify every built-in theory and print a verdict table.

Usage: python3 scripts/certify_builtins.py [--restarts N] [--seed S]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from copekit import (  # noqa: E402
    NmfOptions,
    boxworld,
    certify,
    discrete_qubit,
    extended_boxworld,
    generic_directions,
    rank,
    spekkens,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--restarts", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    opts = NmfOptions(inner_dim=1, max_restarts=args.restarts, seed=args.seed)
    theories = [
        ("spekkens toy bit", spekkens()),
        ("boxworld", boxworld()),
        ("extended boxworld", extended_boxworld()),
        ("discrete qubit (5 antipodal pairs)", discrete_qubit(generic_directions(5, seed=11))),
    ]

    print(f"{'theory':36s} {'shape':>9s} {'rank':>4s} {'verdict':>14s} {'evidence':>18s} {'time':>8s}")
    for name, c in theories:
        start = time.monotonic()
        cert = certify(c, opts)
        elapsed = time.monotonic() - start
        shape = f"{c.n_rows}x{c.n_preparations}"
        evidence = type(cert.evidence).__name__ if cert.evidence else "-"
        print(
            f"{name:36s} {shape:>9s} {rank(c):>4d} {cert.verdict:>14s} "
            f"{evidence:>18s} {elapsed:>7.2f}s"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
