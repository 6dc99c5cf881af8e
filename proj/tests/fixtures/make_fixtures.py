#!/usr/bin/env python3
"""Regenerate the OEIS b-file fixtures from each sequence's definition.

oeis.org was not reachable when these fixtures were created, so every file is
rebuilt here from the sequence's OEIS definition using only Python's
math.isqrt and brute-force enumeration. With network access, replace them with
real downloads:

    nestrec oeis fetch --id A028391 --out tests/fixtures/b028391.txt
"""

import math
import pathlib

COUNT = 10_000
HERE = pathlib.Path(__file__).resolve().parent


def polygonal(m, limit):
    """Set of m*k*(k-1)/2 + k for k >= 1 up to limit."""
    out, k = set(), 1
    while True:
        v = m * k * (k - 1) // 2 + k
        if v > limit:
            return out
        out.add(v)
        k += 1


def count_at_most(members, x):
    return sum(1 for v in members if v <= x)


def n_appears(step):
    """0, then each n >= 1 appears step*n + 1 times."""
    out, n = [], 0
    while len(out) < COUNT:
        out.extend([n] * (step * n + 1))
        n += 1
    return out[:COUNT]


def a122797():
    tri = polygonal(1, COUNT + 1)
    vals = [1]
    for k in range(1, COUNT):
        vals.append(vals[-1] + (0 if k in tri else 1))
    return 1, vals


def a003056():
    return 0, n_appears(1)


def a028391():
    return 0, [n - math.isqrt(n) for n in range(COUNT)]


def a000196():
    return 0, [math.isqrt(n) for n in range(COUNT)]


def a180446():
    pent = sorted(polygonal(3, COUNT))
    vals, c = [], 0
    for n in range(COUNT):
        while c < len(pent) and pent[c] <= n:
            c += 1
        vals.append(n - c)
    return 0, vals


def a180447():
    return 0, n_appears(3)


def a351846():
    hexa = sorted(polygonal(4, COUNT))
    vals, c = [], 0
    for n in range(COUNT):
        while c < len(hexa) and hexa[c] <= n:
            c += 1
        vals.append(c)
    return 0, vals


def a196126():
    vals, total = [], 0
    for x in range(1, COUNT + 1):
        s = math.isqrt(x)
        y_min = s if s * s == x else s + 1  # least y with y*y >= x
        total += x - y_min + 1
        vals.append(total)
    return 1, vals


SEQUENCES = {
    "A122797": a122797,
    "A003056": a003056,
    "A028391": a028391,
    "A000196": a000196,
    "A180446": a180446,
    "A180447": a180447,
    "A351846": a351846,
    "A196126": a196126,
}


def main():
    for seq_id, build in SEQUENCES.items():
        offset, values = build()
        assert len(values) == COUNT
        path = HERE / f"b{seq_id[1:]}.txt"
        with path.open("w") as f:
            f.write(f"# {seq_id}: first {COUNT} terms, regenerated offline from the sequence definition\n")
            f.write("# (make_fixtures.py); not downloaded from oeis.org\n")
            for i, v in enumerate(values):
                f.write(f"{offset + i} {v}\n")


if __name__ == "__main__":
    main()
