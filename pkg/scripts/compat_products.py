#!/usr/bin/env python3
"""Independent check that two fixed products admit no nonzero partner.

Case A: bracket fixed to the sl2 table ([e1,e2]=e3, [e1,e3]=-2e1,
[e2,e3]=2e2), unknown commutative dot.  The identity
x.{y,z} = {x.y,z} + {y,x.z} is linear in the dot; solve it by hand-rolled
rational Gaussian elimination, then check the remaining (quadratic)
identity {x,y}.z = x.(y.z) - y.(x.z) on a parametrization of the solution
space.

Case B: dot fixed to the diagonal idempotent table (ei.ei = ei), unknown
anticommutative bracket.  Both mixed identities are linear in the bracket;
solve the joint system.

No cpalib imports: this is the oracle the test suite freezes its expected
values against.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

N = 3

SL2 = {}  # bracket[i][j] -> coord vector, 0-based
for (i, j), v in {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]}.items():
    SL2[(i, j)] = [Fraction(x) for x in v]
    SL2[(j, i)] = [-Fraction(x) for x in v]
for i in range(N):
    SL2[(i, i)] = [Fraction(0)] * N

TDOT = {}
for i in range(N):
    for j in range(N):
        TDOT[(i, j)] = [Fraction(1) if (i == j and k == i) else Fraction(0)
                        for k in range(N)]


def rref(rows):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    rows = [r[:] for r in rows if any(r)]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(rows, nvars):
    rr, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * nvars
        v[f] = Fraction(1)
        for r, c in zip(rr, pivots):
            v[c] = -r[f]
        basis.append(v)
    return basis


# --- case A: unknown symmetric dot against the sl2 bracket ----------------
# unknowns d[(i,j,k)] with i <= j: coordinates of ei.ej

DOT_IDX = {}
for i in range(N):
    for j in range(i, N):
        for k in range(N):
            DOT_IDX[(i, j, k)] = len(DOT_IDX)


def dot_var(i, j, k):
    return DOT_IDX[(min(i, j), max(i, j), k)]


def linear_rows_dot():
    """x.{y,z} - {x.y,z} - {y,x.z} = 0 at basis triples, linear in dot."""
    rows = []
    for x, y, z in itertools.product(range(N), repeat=3):
        for k in range(N):
            row = [Fraction(0)] * len(DOT_IDX)
            # x.{y,z} with {y,z} constant
            for p in range(N):
                c = SL2[(y, z)][p]
                if c:
                    row[dot_var(x, p, k)] += c
            # -{x.y, z}: (x.y) = sum_p d_{xy}^p e_p, {e_p, e_z} constant
            for p in range(N):
                c = SL2[(p, z)][k]
                if c:
                    row[dot_var(x, y, p)] -= c
            # -{y, x.z}
            for p in range(N):
                c = SL2[(y, p)][k]
                if c:
                    row[dot_var(x, z, p)] -= c
            if any(row):
                rows.append(row)
    return rows


def dot_table(vec):
    tab = {}
    for i in range(N):
        for j in range(N):
            tab[(i, j)] = [vec[dot_var(i, j, k)] for k in range(N)]
    return tab


def quadratic_holds(vec):
    """{x,y}.z = x.(y.z) - y.(x.z) on all basis triples."""
    tab = dot_table(vec)

    def dotv(u, v):
        out = [Fraction(0)] * N
        for p in range(N):
            if u[p]:
                for q in range(N):
                    if v[q]:
                        for k in range(N):
                            out[k] += u[p] * v[q] * tab[(p, q)][k]
        return out

    basis = [[Fraction(int(i == k)) for k in range(N)] for i in range(N)]
    for x, y, z in itertools.product(range(N), repeat=3):
        lhs = dotv(SL2[(x, y)], basis[z])
        yz = dotv(basis[y], basis[z])
        xz = dotv(basis[x], basis[z])
        rhs = [a - b for a, b in zip(dotv(basis[x], yz), dotv(basis[y], xz))]
        if lhs != rhs:
            return False
    return True


def case_a():
    sols = nullspace(linear_rows_dot(), len(DOT_IDX))
    print(f"case A: linear solution space dim = {len(sols)}")
    if not sols:
        print("case A: compatible dots = {0} (linear system already forces it)")
        return 0
    # brute force the quadratic identity over a grid of coefficients on the
    # linear solution space; every nonzero combination must fail
    grid = [Fraction(c) for c in (-2, -1, 0, 1, 2, 3)]
    surviving = 0
    for coeffs in itertools.product(grid, repeat=len(sols)):
        if all(c == 0 for c in coeffs):
            continue
        vec = [sum(c * s[m] for c, s in zip(coeffs, sols)) for m in range(len(DOT_IDX))]
        if quadratic_holds(vec):
            surviving += 1
            print("  SURVIVOR:", coeffs)
    print(f"case A: nonzero grid points satisfying the quadratic identity: {surviving}")
    return surviving


# --- case B: unknown anticommutative bracket against the diagonal dot -----
# unknowns b[(i,j,k)] with i < j

BR_IDX = {}
for i in range(N):
    for j in range(i + 1, N):
        for k in range(N):
            BR_IDX[(i, j, k)] = len(BR_IDX)


def br_coeff(row, i, j, k, c):
    if i == j:
        return
    if i < j:
        row[BR_IDX[(i, j, k)]] += c
    else:
        row[BR_IDX[(j, i, k)]] -= c


def linear_rows_bracket():
    rows = []
    basis = [[Fraction(int(i == k)) for k in range(N)] for i in range(N)]

    def dotv(u, v):
        out = [Fraction(0)] * N
        for p in range(N):
            if u[p]:
                for q in range(N):
                    if v[q]:
                        for k in range(N):
                            out[k] += u[p] * v[q] * TDOT[(p, q)][k]
        return out

    for x, y, z in itertools.product(range(N), repeat=3):
        # identity I: {ex,ey}.ez = ex.(ey.ez) - ey.(ex.ez)
        # lhs linear in bracket, rhs constant
        yz = dotv(basis[y], basis[z])
        xz = dotv(basis[x], basis[z])
        rhs = [a - b for a, b in zip(dotv(basis[x], yz), dotv(basis[y], xz))]
        for k in range(N):
            row = [Fraction(0)] * (len(BR_IDX) + 1)
            for p in range(N):
                c = TDOT[(p, z)][k]
                if c:
                    br_coeff(row, x, y, p, c)
            row[-1] = rhs[k]
            rows.append(row)
        # identity II: ex.{ey,ez} = {ex.ey, ez} + {ey, ex.ez}
        # all three terms linear in bracket (dot is fixed)
        for k in range(N):
            row = [Fraction(0)] * (len(BR_IDX) + 1)
            for p in range(N):
                c = TDOT[(x, p)][k]
                if c:
                    br_coeff(row, y, z, p, c)
            xy = dotv(basis[x], basis[y])
            for p in range(N):
                if xy[p]:
                    br_coeff(row, p, z, k, -xy[p])
            for p in range(N):
                if xz[p]:
                    br_coeff(row, y, p, k, -xz[p])
            rows.append(row)
    return rows


def case_b():
    rows = linear_rows_bracket()
    # homogeneous system: rhs column must be zero throughout
    assert all(r[-1] == 0 for r in rows), "identity I rhs is not bracket-free"
    sols = nullspace([r[:-1] for r in rows], len(BR_IDX))
    print(f"case B: linear solution space dim = {len(sols)}")
    if not sols:
        print("case B: compatible brackets = {0}")
    return len(sols)


if __name__ == "__main__":
    a = case_a()
    b = case_b()
    ok = (a == 0) and (b == 0)
    print("RESULT:", "both spaces are zero" if ok else "NONZERO SPACE FOUND")
    raise SystemExit(0 if ok else 1)
