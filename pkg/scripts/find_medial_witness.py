#!/usr/bin/env python3
"""Brute-force search for a small commutative algebra violating the medial
law (x.y).(z.w) = (x.z).(y.w).

The derived-identity checker needs a negative control: a table where the
medial check actually fires.  This sweeps all 2-dimensional commutative
tables with structure constants in {-1, 0, 1} and prints the violating
tables, smallest support first.  The one frozen into the tests
(e1.e1 = e2, e1.e2 = e1) shows up with support 2: its defect is
(e1.e1).(e2.e2) = 0 against (e1.e2).(e1.e2) = e2.

No cpalib imports; plain integer arithmetic.
"""
from __future__ import annotations

import itertools

N = 2


def dotv(tab, u, v):
    out = [0] * N
    for p in range(N):
        if u[p]:
            for q in range(N):
                if v[q]:
                    for k in range(N):
                        out[k] += u[p] * v[q] * tab[(p, q)][k]
    return out


def medial_violations(tab):
    basis = [[int(i == k) for k in range(N)] for i in range(N)]
    bad = []
    for i, j, k, l in itertools.product(range(N), repeat=4):
        left = dotv(tab, dotv(tab, basis[i], basis[j]), dotv(tab, basis[k], basis[l]))
        right = dotv(tab, dotv(tab, basis[i], basis[k]), dotv(tab, basis[j], basis[l]))
        if left != right:
            bad.append((i + 1, j + 1, k + 1, l + 1))
    return bad


def tables():
    # commutative: free entries e1.e1, e1.e2, e2.e2, each a vector in {-1,0,1}^2
    cells = list(itertools.product((-1, 0, 1), repeat=N))
    for c11, c12, c22 in itertools.product(cells, repeat=3):
        tab = {(0, 0): list(c11), (0, 1): list(c12), (1, 0): list(c12),
               (1, 1): list(c22)}
        yield tab


def support(tab):
    return sum(1 for (i, j), v in tab.items() if i <= j and any(v))


def main():
    found = []
    for tab in tables():
        bad = medial_violations(tab)
        if bad:
            found.append((support(tab), tab, bad))
    found.sort(key=lambda x: x[0])
    print(f"{len(found)} violating tables among all 2-dim commutative "
          f"tables over {{-1,0,1}}")
    smallest = [f for f in found if f[0] == found[0][0]]
    print(f"minimal support: {found[0][0]} ({len(smallest)} tables)")
    target = {(0, 0): [0, 1], (0, 1): [1, 0], (1, 0): [1, 0], (1, 1): [0, 0]}
    hit = next((f for f in found if f[1] == target), None)
    if hit:
        print("frozen witness e1.e1=e2, e1.e2=e1 found; violations at", hit[2])
    else:
        print("frozen witness NOT in the violating set -- investigate")
        raise SystemExit(1)


if __name__ == "__main__":
    main()
