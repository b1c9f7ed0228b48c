"""Structure-constant core: algebras carrying a commutative product x.y and a
Lie bracket {x,y} tied together by

    {x,y}.z = x.(y.z) - y.(x.z)          (mixed identity I)
    x.{y,z} = {x.y,z} + {y,x.z}          (mixed identity II)

plus the single-product (depolarized) view and the identity checkers.
Constants live in Q(i)(a,t); symbolic checks are generic in the parameter.
"""
from __future__ import annotations

from dataclasses import dataclass

from .field import Matrix, RatFun, rf, vec_is_zero

Vec = list[RatFun]


def _zeros(n: int) -> Vec:
    return [RatFun.zero()] * n


def _vadd(u: Vec, v: Vec) -> Vec:
    return [x + y for x, y in zip(u, v)]


def _vsub(u: Vec, v: Vec) -> Vec:
    return [x - y for x, y in zip(u, v)]


def _vscale(u: Vec, c: RatFun) -> Vec:
    if c.is_zero:
        return _zeros(len(u))
    return [c * x for x in u]


@dataclass
class Violation:
    identity: str
    indices: tuple[int, ...]
    residual: Vec

    def __str__(self):
        idx = ",".join(f"e{i+1}" for i in self.indices)
        res = ", ".join(str(x) for x in self.residual)
        return f"{self.identity}({idx}) -> [{res}]"


@dataclass
class IdentityReport:
    checked: list[str]
    violations: list[Violation]

    @property
    def passed(self) -> bool:
        return not self.violations

    def failed_identities(self) -> list[str]:
        seen = []
        for v in self.violations:
            if v.identity not in seen:
                seen.append(v.identity)
        return seen

    def summary(self) -> str:
        if self.passed:
            return "PASS (" + ", ".join(self.checked) + ")"
        return "FAIL: " + "; ".join(str(v) for v in self.violations[:4]) + (
            f" ... {len(self.violations)} violations" if len(self.violations) > 4 else ""
        )


class AlgebraPair:
    """Finite-dimensional pair (commutative product, antisymmetric bracket)
    given by structure constants: dot[i][j] and bracket[i][j] are the
    coordinate vectors of e_i.e_j and {e_i,e_j}."""

    __slots__ = ("n", "dot", "bracket", "label")

    def __init__(self, n: int, dot, bracket, label: str = ""):
        self.n = n
        self.dot = [[[rf(x) for x in dot[i][j]] for j in range(n)] for i in range(n)]
        self.bracket = [
            [[rf(x) for x in bracket[i][j]] for j in range(n)] for i in range(n)
        ]
        self.label = label
        # symmetry of the tables is not enforced here: check_cpa reports it,
        # and tests need to build broken tables on purpose

    # ------------------------------------------------------------------
    @staticmethod
    def from_tables(n: int, dot_entries: dict | None = None,
                    bracket_entries: dict | None = None, label: str = "") -> "AlgebraPair":
        """Build from sparse {(i,j): vector} tables, 1-based indices; the dot
        table is completed by symmetry, the bracket one by antisymmetry."""
        dot = [[_zeros(n) for _ in range(n)] for _ in range(n)]
        br = [[_zeros(n) for _ in range(n)] for _ in range(n)]
        for (i, j), v in (dot_entries or {}).items():
            vv = [rf(x) for x in v]
            dot[i - 1][j - 1] = vv
            dot[j - 1][i - 1] = vv
        for (i, j), v in (bracket_entries or {}).items():
            if i == j:
                raise ValueError("bracket of a basis vector with itself")
            vv = [rf(x) for x in v]
            br[i - 1][j - 1] = vv
            br[j - 1][i - 1] = [-x for x in vv]
        return AlgebraPair(n, dot, br, label=label)

    @staticmethod
    def abelian(n: int, label: str = "") -> "AlgebraPair":
        return AlgebraPair.from_tables(n, {}, {}, label=label or f"abelian{n}")

    def subs_a(self, value) -> "AlgebraPair":
        v = rf(value)
        return AlgebraPair(
            self.n,
            [[[x.subs(a=v) for x in self.dot[i][j]] for j in range(self.n)]
             for i in range(self.n)],
            [[[x.subs(a=v) for x in self.bracket[i][j]] for j in range(self.n)]
             for i in range(self.n)],
            label=self.label,
        )

    def uses_parameter(self) -> bool:
        cells = [x for tab in (self.dot, self.bracket)
                 for row in tab for cell in row for x in cell]
        return any(x.num.uses_a() or x.den.uses_a() for x in cells)

    # ------------------------------------------------------------------
    def product(self, x: Vec, y: Vec) -> Vec:
        out = _zeros(self.n)
        for i, xi in enumerate(x):
            if xi.is_zero:
                continue
            for j, yj in enumerate(y):
                if yj.is_zero:
                    continue
                out = _vadd(out, _vscale(self.dot[i][j], xi * yj))
        return out

    def bracket_of(self, x: Vec, y: Vec) -> Vec:
        out = _zeros(self.n)
        for i, xi in enumerate(x):
            if xi.is_zero:
                continue
            for j, yj in enumerate(y):
                if yj.is_zero:
                    continue
                out = _vadd(out, _vscale(self.bracket[i][j], xi * yj))
        return out

    def basis_vector(self, i: int) -> Vec:
        v = _zeros(self.n)
        v[i] = RatFun.one()
        return v

    # table-level helpers used by the identity checkers (basis arguments)
    def _dot_vec(self, v: Vec, k: int) -> Vec:
        """v . e_k for a coordinate vector v."""
        out = _zeros(self.n)
        for m, c in enumerate(v):
            if not c.is_zero:
                out = _vadd(out, _vscale(self.dot[m][k], c))
        return out

    def _bracket_vec(self, v: Vec, k: int) -> Vec:
        out = _zeros(self.n)
        for m, c in enumerate(v):
            if not c.is_zero:
                out = _vadd(out, _vscale(self.bracket[m][k], c))
        return out


# ---------------------------------------------------------------------------
# identity checks


def check_cpa(P: AlgebraPair) -> IdentityReport:
    """Commutativity, anticommutativity, Jacobi, and the two mixed identities,
    verified exactly on all basis triples."""
    n = P.n
    out: list[Violation] = []
    for i in range(n):
        for j in range(n):
            r = _vsub(P.dot[i][j], P.dot[j][i])
            if not vec_is_zero(r):
                out.append(Violation("commutativity", (i, j), r))
            r = _vadd(P.bracket[i][j], P.bracket[j][i])
            if not vec_is_zero(r):
                out.append(Violation("anticommutativity", (i, j), r))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # Jacobi
                r = _vadd(
                    _vadd(
                        P._bracket_vec(P.bracket[i][j], k),
                        P._bracket_vec(P.bracket[j][k], i),
                    ),
                    P._bracket_vec(P.bracket[k][i], j),
                )
                if not vec_is_zero(r):
                    out.append(Violation("jacobi", (i, j, k), r))
                # {e_i,e_j}.e_k = e_i.(e_j.e_k) - e_j.(e_i.e_k)
                lhs = P._dot_vec(P.bracket[i][j], k)
                rhs = _vsub(
                    P.product(P.basis_vector(i), P.dot[j][k]),
                    P.product(P.basis_vector(j), P.dot[i][k]),
                )
                r = _vsub(lhs, rhs)
                if not vec_is_zero(r):
                    out.append(Violation("mixed-identity-I", (i, j, k), r))
                # e_i.{e_j,e_k} = {e_i.e_j, e_k} + {e_j, e_i.e_k}
                lhs = P.product(P.basis_vector(i), P.bracket[j][k])
                rhs = _vadd(
                    P._bracket_vec(P.dot[i][j], k),
                    [-x for x in P._bracket_vec(P.dot[i][k], j)],
                )
                r = _vsub(lhs, rhs)
                if not vec_is_zero(r):
                    out.append(Violation("mixed-identity-II", (i, j, k), r))
    return IdentityReport(
        ["commutativity", "anticommutativity", "jacobi",
         "mixed-identity-I", "mixed-identity-II"],
        out,
    )


def check_derived_identities(P: AlgebraPair) -> IdentityReport:
    """Consequences of the axioms, checked on all basis tuples:
    medial law, exchange of the last two factors, squares killing brackets,
    and the depth-three bracket collapse.  Requires a verified pair."""
    base = check_cpa(P)
    assert base.passed, "derived identities are only meaningful on a verified pair"
    return derived_identity_violations(P)


def derived_identity_violations(P: AlgebraPair) -> IdentityReport:
    """Same checks as check_derived_identities but with no precondition, so a
    deliberately broken table can demonstrate that the checks bite."""
    n = P.n
    out: list[Violation] = []
    e = [P.basis_vector(i) for i in range(n)]
    dot = P.product
    br = P.bracket_of
    for i in range(n):
        for j in range(n):
            dij = P.dot[i][j]
            for k in range(n):
                for l in range(n):
                    # (x.y).(z.w) = (x.z).(y.w)
                    r = _vsub(dot(dij, P.dot[k][l]), dot(P.dot[i][k], P.dot[j][l]))
                    if not vec_is_zero(r):
                        out.append(Violation("medial", (i, j, k, l), r))
                    # ((x.y).z).w = ((x.y).w).z
                    r = _vsub(dot(dot(dij, e[k]), e[l]), dot(dot(dij, e[l]), e[k]))
                    if not vec_is_zero(r):
                        out.append(Violation("exchange", (i, j, k, l), r))
                    # (x.y).{z,w} = 0
                    r = dot(dij, P.bracket[k][l])
                    if not vec_is_zero(r):
                        out.append(Violation("square-kills-bracket", (i, j, k, l), r))
                    # {x.y, {z, {w, v}}} = 0
                    for m in range(n):
                        r = br(dij, br(e[k], P.bracket[l][m]))
                        if not vec_is_zero(r):
                            out.append(
                                Violation("bracket-depth-three", (i, j, k, l, m), r)
                            )
    return IdentityReport(
        ["medial", "exchange", "square-kills-bracket", "bracket-depth-three"], out
    )


# ---------------------------------------------------------------------------
# single-product view


class SingleAlgebra:
    """One bilinear product with no symmetry assumed: table[i][j] = e_i e_j."""

    __slots__ = ("n", "table", "label")

    def __init__(self, n: int, table, label: str = ""):
        self.n = n
        self.table = [[[rf(x) for x in table[i][j]] for j in range(n)] for i in range(n)]
        self.label = label

    @staticmethod
    def from_entries(n: int, entries: dict, label: str = "") -> "SingleAlgebra":
        table = [[_zeros(n) for _ in range(n)] for _ in range(n)]
        for (i, j), v in entries.items():
            table[i - 1][j - 1] = [rf(x) for x in v]
        return SingleAlgebra(n, table, label=label)

    def product(self, x: Vec, y: Vec) -> Vec:
        out = _zeros(self.n)
        for i, xi in enumerate(x):
            if xi.is_zero:
                continue
            for j, yj in enumerate(y):
                if yj.is_zero:
                    continue
                out = _vadd(out, _vscale(self.table[i][j], xi * yj))
        return out

    def basis_vector(self, i: int) -> Vec:
        v = _zeros(self.n)
        v[i] = RatFun.one()
        return v


def depolarize(S: SingleAlgebra, label: str = "") -> AlgebraPair:
    """Split xy into its symmetric half x.y = (xy+yx)/2 and antisymmetric
    half {x,y} = (xy-yx)/2."""
    n = S.n
    half = rf(1) / 2
    dot = [
        [[half * (S.table[i][j][k] + S.table[j][i][k]) for k in range(n)]
         for j in range(n)]
        for i in range(n)
    ]
    br = [
        [[half * (S.table[i][j][k] - S.table[j][i][k]) for k in range(n)]
         for j in range(n)]
        for i in range(n)
    ]
    return AlgebraPair(n, dot, br, label=label or (S.label and S.label + ".split"))


def polarize(P: AlgebraPair, label: str = "") -> SingleAlgebra:
    """Recombine: xy = x.y + {x,y}."""
    n = P.n
    table = [
        [[P.dot[i][j][k] + P.bracket[i][j][k] for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    return SingleAlgebra(n, table, label=label or (P.label and P.label + ".joined"))


def check_AB(S: SingleAlgebra) -> IdentityReport:
    """The two cubic identities that characterize the recombined product:

      A: (xy)z - x(zy) + z(xy) - (zy)x = 0
      B: (yz)x - 2 y(zx) + 2 z(yx) - (zy)x = 0

    reported separately so one can pass while the other fails."""
    n = S.n
    e = [S.basis_vector(i) for i in range(n)]
    p = S.product
    out: list[Violation] = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x, y, z = e[i], e[j], e[k]
                ra = _vsub(
                    _vadd(p(p(x, y), z), p(z, p(x, y))),
                    _vadd(p(x, p(z, y)), p(p(z, y), x)),
                )
                if not vec_is_zero(ra):
                    out.append(Violation("identity-A", (i, j, k), ra))
                two = rf(2)
                rb = _vsub(
                    _vadd(p(p(y, z), x), _vscale(p(z, p(y, x)), two)),
                    _vadd(_vscale(p(y, p(z, x)), two), p(p(z, y), x)),
                )
                if not vec_is_zero(rb):
                    out.append(Violation("identity-B", (i, j, k), rb))
    return IdentityReport(["identity-A", "identity-B"], out)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Row space with a canonical reduced-echelon basis; equality is
    representation equality."""

    __slots__ = ("n", "matrix")

    def __init__(self, n: int, vectors: list[Vec] | None = None):
        self.n = n
        rows = [v for v in (vectors or []) if not vec_is_zero(v)]
        if rows:
            R, rank, _ = Matrix(rows).rref()
            self.matrix = Matrix(R.rows[:rank])
        else:
            self.matrix = Matrix.zero(0, n)

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    def basis(self) -> list[Vec]:
        return [list(r) for r in self.matrix.rows]

    def contains(self, v: Vec) -> bool:
        if vec_is_zero(v):
            return True
        stacked = Subspace(self.n, self.basis() + [list(v)])
        return stacked.dim == self.dim

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis())

    def __eq__(self, o):
        return isinstance(o, Subspace) and self.n == o.n and self.matrix == o.matrix

    def sum_with(self, other: "Subspace") -> "Subspace":
        return Subspace(self.n, self.basis() + other.basis())

    def intersect(self, other: "Subspace") -> "Subspace":
        """Row-space intersection via the kernel of the stacked transpose."""
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.n)
        A = self.matrix
        B = other.matrix
        stacked = Matrix(
            [
                [A.rows[i][c] for i in range(A.nrows)]
                + [-B.rows[j][c] for j in range(B.nrows)]
                for c in range(self.n)
            ]
        )
        K = stacked.kernel()
        vecs = []
        for row in K.rows:
            coeffs = row[: A.nrows]
            v = _zeros(self.n)
            for i, c in enumerate(coeffs):
                if not c.is_zero:
                    v = _vadd(v, _vscale(list(A.rows[i]), c))
            vecs.append(v)
        return Subspace(self.n, vecs)

    def __str__(self):
        return f"<subspace dim {self.dim} of C^{self.n}>"

    __repr__ = __str__


def full_space(n: int) -> Subspace:
    return Subspace(n, [[rf(1) if j == i else rf(0) for j in range(n)] for i in range(n)])


# ---------------------------------------------------------------------------
# canonical subspaces of a pair


def annihilator(P: AlgebraPair) -> Subspace:
    """Vectors killed by both products: v.x = 0 and {v,x} = 0 for all x."""
    rows = []
    for j in range(P.n):
        for k in range(P.n):
            rows.append([P.dot[i][j][k] for i in range(P.n)])
            rows.append([P.bracket[i][j][k] for i in range(P.n)])
    K = Matrix(rows).kernel()
    return Subspace(P.n, [list(r) for r in K.rows])


def square_dot(P: AlgebraPair) -> Subspace:
    return Subspace(P.n, [P.dot[i][j] for i in range(P.n) for j in range(i, P.n)])


def square_bracket(P: AlgebraPair) -> Subspace:
    return Subspace(
        P.n, [P.bracket[i][j] for i in range(P.n) for j in range(i + 1, P.n)]
    )


def derived_space(P: AlgebraPair) -> Subspace:
    """P.P + {P,P}: everything hit by either product."""
    return square_dot(P).sum_with(square_bracket(P))


def _space_product(P: AlgebraPair, U: Subspace, W: Subspace) -> Subspace:
    vecs = []
    for u in U.basis():
        for w in W.basis():
            vecs.append(P.product(u, w))
            vecs.append(P.bracket_of(u, w))
    return Subspace(P.n, vecs)


def nilpotency(P: AlgebraPair) -> tuple[bool, int | None]:
    """Lower central series with both products:
    S_1 = P, S_{k+1} = sum_{i+j=k+1} (S_i.S_j + {S_i,S_j}).
    Returns (nilpotent?, class), class = largest k with S_k != 0."""
    chain = [full_space(P.n)]
    while True:
        k2 = len(chain) + 1  # computing S_{k2}
        acc = Subspace(P.n)
        for i in range(1, k2):
            j = k2 - i
            if j < 1 or j > len(chain):
                continue
            acc = acc.sum_with(_space_product(P, chain[i - 1], chain[j - 1]))
        if acc.dim == 0:
            return True, len(chain)
        if acc.dim == chain[-1].dim and acc == chain[-1]:
            return False, None
        chain.append(acc)
        if len(chain) > P.n + 2:
            return False, None


def dot_nilpotency(P: AlgebraPair) -> tuple[bool, int | None]:
    """Nilpotency of the commutative product alone."""
    zero_br = AlgebraPair(
        P.n,
        P.dot,
        [[_zeros(P.n) for _ in range(P.n)] for _ in range(P.n)],
        label=P.label and P.label + ".dot",
    )
    return nilpotency(zero_br)


def bracket_nilpotency(P: AlgebraPair) -> tuple[bool, int | None]:
    zero_dot = AlgebraPair(
        P.n,
        [[_zeros(P.n) for _ in range(P.n)] for _ in range(P.n)],
        P.bracket,
        label=P.label and P.label + ".br",
    )
    return nilpotency(zero_dot)


@dataclass
class PerfectnessReport:
    dot_perfect: bool
    bracket_perfect: bool
    dot_perfect_forces_zero_bracket: bool | None
    bracket_perfect_forces_zero_dot: bool | None

    @property
    def consistent(self) -> bool:
        ok = True
        if self.dot_perfect:
            ok = ok and bool(self.dot_perfect_forces_zero_bracket)
        if self.bracket_perfect:
            ok = ok and bool(self.bracket_perfect_forces_zero_dot)
        return ok


def perfectness_checks(P: AlgebraPair) -> PerfectnessReport:
    """Is P.P = P?  Is {P,P} = P?  On this instance, a perfect product of one
    kind must force the other product to vanish; verify that too."""
    dp = square_dot(P).dim == P.n
    bp = square_bracket(P).dim == P.n
    dot_zero = all(
        vec_is_zero(P.dot[i][j]) for i in range(P.n) for j in range(P.n)
    )
    br_zero = all(
        vec_is_zero(P.bracket[i][j]) for i in range(P.n) for j in range(P.n)
    )
    return PerfectnessReport(
        dot_perfect=dp,
        bracket_perfect=bp,
        dot_perfect_forces_zero_bracket=(br_zero if dp else None),
        bracket_perfect_forces_zero_dot=(dot_zero if bp else None),
    )
