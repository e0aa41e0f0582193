#!/usr/bin/env python3
"""Regenerate the b-file fixtures in data/oeis.

OEIS itself is not reachable from the build machines, so every file here is
recomputed with plain Python (trial division, exact integers) and numpy (a
flat enumeration of all residue-class tuples for A083544). None of it shares
code with the C++ library.

    python3 tools/gen_fixtures.py [--out data/oeis]
"""

import argparse
import itertools
import math
from pathlib import Path

import numpy as np

SF_TERMS = 1000
A083544_MAX = 120  # 11^2 = 121 is the first square of a prime past 7
POW2_MAX = 100
FACT_MAX = 60


def squarefree(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def admissible_max_table(x_max):
    """A(x) for x <= x_max by trying every tuple of removed classes."""
    primes = [p for p in range(2, math.isqrt(x_max) + 1) if all(p % q for q in range(2, p))]
    a = np.arange(1, x_max + 1)
    best = np.zeros(x_max, dtype=np.int64)
    moduli = [p * p for p in primes]
    # residues[i][b] marks a = b mod p_i^2
    residues = [np.stack([(a % m) == b for b in range(m)]) for m in moduli]
    head, tail = residues[:-1], residues[-1]
    for choice in itertools.product(*(range(m) for m in moduli[:-1])):
        removed = np.zeros(x_max, dtype=bool)
        for mask, b in zip(head, choice):
            removed |= mask[b]
        alive = ~(removed[None, :] | tail)  # every class of the last prime at once
        counts = np.cumsum(alive, axis=1).max(axis=0)
        np.maximum(best, counts, out=best)
    return [int(v) for v in best]


def write(out, seq_id, note, pairs):
    lines = [f"# {seq_id}: {note}",
             "# Recomputed locally by tools/gen_fixtures.py, not downloaded from OEIS."]
    lines += [f"{i} {v}" for i, v in pairs]
    (out / f"b{seq_id[1:]}.txt").write_text("\n".join(lines) + "\n")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=Path(__file__).resolve().parent.parent / "data" / "oeis",
                        type=Path)
    args = parser.parse_args()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    sf = [n for n in range(1, 3 * SF_TERMS) if squarefree(n)][:SF_TERMS]
    write(out, "A005117", "squarefree numbers", enumerate(sf, start=1))

    below, count = [], 0
    for n in range(1, SF_TERMS + 2):
        below.append((n, count))
        count += squarefree(n)
    write(out, "A013928", "number of squarefree numbers < n", below)

    write(out, "A083544", "largest admissible subset of [x]",
          enumerate(admissible_max_table(A083544_MAX), start=1))

    write(out, "A000051", "2^n + 1", ((n, 2**n + 1) for n in range(POW2_MAX + 1)))
    write(out, "A000225", "2^n - 1", ((n, 2**n - 1) for n in range(POW2_MAX + 1)))
    write(out, "A038507", "n! + 1", ((n, math.factorial(n) + 1) for n in range(FACT_MAX + 1)))
    write(out, "A033312", "n! - 1", ((n, math.factorial(n) - 1) for n in range(FACT_MAX + 1)))

    (out / "manifest.txt").write_text(
        "# OEIS index n -> artifact argument n + shift, used for n >= first\n"
        "A005117 sf_nth shift=0 first=1\n"
        "A013928 sf_count shift=-1 first=1\n"
        "A083544 a_of_x shift=0 first=1\n"
        "A000051 named_term tag=A1 shift=0 first=1\n"
        "A000225 named_term tag=A2 shift=0 first=1\n"
        "A038507 named_term tag=A3 shift=0 first=1\n"
        "A033312 named_term tag=A4 shift=0 first=2\n")


if __name__ == "__main__":
    main()
