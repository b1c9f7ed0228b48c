"""Two classification engines built on exact linear algebra.

Fixed-dot route: given a commutative product, the compatible brackets are
the antisymmetric algebra-valued forms satisfying two linear conditions
(one of them inhomogeneous when the dot is non-associative) plus a
quadratic Jacobi condition checked pointwise.

Annihilator-extension route: scalar cocycle pairs (theta, vartheta) on a
base pair, their coboundaries, the quotient dimension, and the extension
construction that adjoins a new annihilator summand per cocycle.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraPair, Subspace, annihilator
from .field import Matrix, RatFun, rf, solve_particular, vec_is_zero

Vec = list[RatFun]


class CohomologyError(Exception):
    pass


class NotACocycle(CohomologyError):
    def __init__(self, msg: str, location: tuple | None = None):
        super().__init__(msg)
        self.location = location


class NotAnAutomorphism(CohomologyError):
    pass


# ---------------------------------------------------------------------------
# scalar bilinear forms


@dataclass(frozen=True, eq=False)
class BiFormScalar:
    """Scalar-valued bilinear form on basis vectors, tagged by symmetry."""

    n: int
    mat: Matrix
    tag: str

    def __post_init__(self):
        if self.tag not in ("symmetric", "antisymmetric"):
            raise ValueError(f"unknown tag {self.tag!r}")
        if self.mat.nrows != self.n or self.mat.ncols != self.n:
            raise ValueError("form matrix shape mismatch")
        sign = rf(1) if self.tag == "symmetric" else rf(-1)
        for i in range(self.n):
            for j in range(i, self.n):
                if self.mat.rows[i][j] != sign * self.mat.rows[j][i]:
                    raise ValueError(f"matrix is not {self.tag}")

    @staticmethod
    def zero(n: int, tag: str) -> "BiFormScalar":
        return BiFormScalar(n, Matrix.zero(n, n), tag)

    def apply(self, x: Vec, y: Vec) -> RatFun:
        acc = RatFun.zero()
        for i, xi in enumerate(x):
            if xi.is_zero:
                continue
            for j, yj in enumerate(y):
                if not yj.is_zero:
                    acc = acc + xi * yj * self.mat.rows[i][j]
        return acc

    @property
    def is_zero(self) -> bool:
        return all(x.is_zero for r in self.mat.rows for x in r)

    def scaled(self, c) -> "BiFormScalar":
        cc = rf(c)
        return BiFormScalar(
            self.n, Matrix([[cc * x for x in r] for r in self.mat.rows]), self.tag
        )

    def plus(self, other: "BiFormScalar") -> "BiFormScalar":
        if other.tag != self.tag or other.n != self.n:
            raise ValueError("form mismatch")
        return BiFormScalar(
            self.n,
            Matrix(
                [
                    [a + b for a, b in zip(ra, rb)]
                    for ra, rb in zip(self.mat.rows, other.mat.rows)
                ]
            ),
            self.tag,
        )

    def __str__(self):
        names = []
        for i in range(self.n):
            jstart = i if self.tag == "symmetric" else i + 1
            for j in range(jstart, self.n):
                c = self.mat.rows[i][j]
                if not c.is_zero:
                    head = "n" if self.tag == "symmetric" else "D"
                    names.append(f"({c})*{head}{i + 1}{j + 1}")
        return " + ".join(names) if names else "0"


def nabla(n: int, i: int, j: int, coeff=1) -> BiFormScalar:
    """Elementary symmetric form: value 1 on (e_i, e_j) and (e_j, e_i)."""
    m = Matrix.zero(n, n)
    m.rows[i - 1][j - 1] = m.rows[j - 1][i - 1] = rf(coeff)
    return BiFormScalar(n, m, "symmetric")


def delta(n: int, i: int, j: int, coeff=1) -> BiFormScalar:
    """Elementary antisymmetric form: value 1 on (e_i, e_j), -1 swapped."""
    if i == j:
        raise ValueError("antisymmetric form vanishes on the diagonal")
    m = Matrix.zero(n, n)
    m.rows[i - 1][j - 1] = rf(coeff)
    m.rows[j - 1][i - 1] = -rf(coeff)
    return BiFormScalar(n, m, "antisymmetric")


# ---------------------------------------------------------------------------
# cocycle pairs on a base pair


@dataclass(frozen=True, eq=False)
class CocyclePair:
    theta: BiFormScalar
    vartheta: BiFormScalar
    base: AlgebraPair

    def __post_init__(self):
        if self.theta.tag != "symmetric" or self.vartheta.tag != "antisymmetric":
            raise ValueError("cocycle pair needs (symmetric, antisymmetric) forms")
        if not (self.theta.n == self.vartheta.n == self.base.n):
            raise ValueError("dimension mismatch")

    def violations(self) -> list[tuple[str, tuple[int, int, int]]]:
        """Failing instances of the three linear cocycle conditions."""
        P, th, vt = self.base, self.theta, self.vartheta
        n = P.n
        bad = []
        for i in range(n):
            ei = P.basis_vector(i)
            for j in range(i + 1, n):
                ej = P.basis_vector(j)
                for k in range(n):
                    ek = P.basis_vector(k)
                    lhs = th.apply(P.bracket[i][j], ek)
                    rhs = th.apply(ei, P.dot[j][k]) - th.apply(ej, P.dot[i][k])
                    if lhs != rhs:
                        bad.append(("bracket-into-theta", (i, j, k)))
        for i in range(n):
            ei = P.basis_vector(i)
            for j in range(n):
                ej = P.basis_vector(j)
                for k in range(j + 1, n):
                    ek = P.basis_vector(k)
                    lhs = th.apply(ei, P.bracket[j][k])
                    rhs = vt.apply(P.dot[i][j], ek) + vt.apply(ej, P.dot[i][k])
                    if lhs != rhs:
                        bad.append(("theta-vartheta-link", (i, j, k)))
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    ei, ej, ek = (P.basis_vector(m) for m in (i, j, k))
                    s = (
                        vt.apply(P.bracket[i][j], ek)
                        + vt.apply(P.bracket[j][k], ei)
                        + vt.apply(P.bracket[k][i], ej)
                    )
                    if not s.is_zero:
                        bad.append(("vartheta-jacobi-sum", (i, j, k)))
        return bad

    def is_cocycle(self) -> bool:
        return not self.violations()

    def __str__(self):
        return f"({self.theta}, {self.vartheta})"


# unknown order: theta slots (i<=j) lexicographic, then vartheta slots (i<j)


def _sym_slots(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def _skew_slots(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def cocycle_to_vector(c: CocyclePair) -> Vec:
    n = c.base.n
    out = [c.theta.mat.rows[i][j] for (i, j) in _sym_slots(n)]
    out += [c.vartheta.mat.rows[i][j] for (i, j) in _skew_slots(n)]
    return out


def cocycle_from_vector(P: AlgebraPair, v: Vec) -> CocyclePair:
    n = P.n
    sym, skew = _sym_slots(n), _skew_slots(n)
    tm = Matrix.zero(n, n)
    vm = Matrix.zero(n, n)
    for s, (i, j) in enumerate(sym):
        tm.rows[i][j] = tm.rows[j][i] = rf(v[s])
    for s, (i, j) in enumerate(skew):
        c = rf(v[len(sym) + s])
        vm.rows[i][j] = c
        vm.rows[j][i] = -c
    return CocyclePair(
        BiFormScalar(n, tm, "symmetric"), BiFormScalar(n, vm, "antisymmetric"), P
    )


def _cocycle_rows(P: AlgebraPair) -> list[Vec]:
    """Coefficient rows of the three linear cocycle conditions."""
    n = P.n
    sym = {slot: s for s, slot in enumerate(_sym_slots(n))}
    skew = {slot: s for s, slot in enumerate(_skew_slots(n))}
    nsym = len(sym)
    width = nsym + len(skew)
    zero = RatFun.zero()

    def th(row, i, j, c):
        if not c.is_zero:
            s = sym[(i, j) if i <= j else (j, i)]
            row[s] = row[s] + c

    def vt(row, i, j, c):
        if i == j or c.is_zero:
            return
        if i < j:
            s = skew[(i, j)]
            row[s + nsym] = row[s + nsym] + c
        else:
            s = skew[(j, i)]
            row[s + nsym] = row[s + nsym] - c

    rows = []
    # theta({ei,ej}, ek) - theta(ei, ej.ek) + theta(ej, ei.ek) = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = [zero] * width
                for m in range(n):
                    th(row, m, k, P.bracket[i][j][m])
                    th(row, i, m, -P.dot[j][k][m])
                    th(row, j, m, P.dot[i][k][m])
                if any(not x.is_zero for x in row):
                    rows.append(row)
    # theta(ei, {ej,ek}) - vartheta(ei.ej, ek) - vartheta(ej, ei.ek) = 0
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                row = [zero] * width
                for m in range(n):
                    th(row, i, m, P.bracket[j][k][m])
                    vt(row, m, k, -P.dot[i][j][m])
                    vt(row, j, m, -P.dot[i][k][m])
                if any(not x.is_zero for x in row):
                    rows.append(row)
    # cyclic sum vartheta({ei,ej}, ek) = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                row = [zero] * width
                for m in range(n):
                    vt(row, m, k, P.bracket[i][j][m])
                    vt(row, m, i, P.bracket[j][k][m])
                    vt(row, m, j, P.bracket[k][i][m])
                if any(not x.is_zero for x in row):
                    rows.append(row)
    return rows


def z22_basis(P: AlgebraPair) -> list[CocyclePair]:
    """Basis of the cocycle-pair space, deterministic slot order."""
    n = P.n
    width = len(_sym_slots(n)) + len(_skew_slots(n))
    rows = _cocycle_rows(P)
    if not rows:
        basis_vecs = [
            [rf(1) if c == s else rf(0) for c in range(width)] for s in range(width)
        ]
    else:
        basis_vecs = [list(r) for r in Matrix(rows).kernel().rows]
    return [cocycle_from_vector(P, v) for v in basis_vecs]


def b22_basis(P: AlgebraPair) -> list[CocyclePair]:
    """Coboundaries: pairs (f(x.y), f({x,y})) for the coordinate functionals,
    reduced to an echelon basis in the same slot order."""
    n = P.n
    raw = []
    for k in range(n):
        f_theta = Matrix([[P.dot[i][j][k] for j in range(n)] for i in range(n)])
        f_vt = Matrix([[P.bracket[i][j][k] for j in range(n)] for i in range(n)])
        c = CocyclePair(
            BiFormScalar(n, f_theta, "symmetric"),
            BiFormScalar(n, f_vt, "antisymmetric"),
            P,
        )
        raw.append(cocycle_to_vector(c))
    width = len(raw[0])
    space = Subspace(width, raw)
    return [cocycle_from_vector(P, list(r)) for r in space.matrix.rows]


def h22_dim(P: AlgebraPair) -> int:
    z = z22_basis(P)
    b = b22_basis(P)
    width = len(_sym_slots(P.n)) + len(_skew_slots(P.n))
    zspace = Subspace(width, [cocycle_to_vector(c) for c in z])
    for c in b:
        assert zspace.contains(cocycle_to_vector(c)), "coboundary outside Z"
    return len(z) - len(b)


def rad(cs: CocyclePair | list[CocyclePair]) -> Subspace:
    """Common radical: vectors x with theta(x, .) = 0 and vartheta(x, .) = 0."""
    if isinstance(cs, CocyclePair):
        cs = [cs]
    if not cs:
        raise ValueError("empty cocycle list")
    n = cs[0].base.n
    rows = []
    for c in cs:
        rows.extend(
            [c.theta.mat.rows[i][j] for i in range(n)] for j in range(n)
        )
        rows.extend(
            [c.vartheta.mat.rows[i][j] for i in range(n)] for j in range(n)
        )
    K = Matrix(rows).kernel()
    return Subspace(n, [list(r) for r in K.rows])


class ExtensionError(CohomologyError):
    pass


def extend(P: AlgebraPair, cocycles: list[CocyclePair], label: str = "") -> AlgebraPair:
    """Adjoin one annihilator direction per cocycle; the new vectors come
    after the base ones."""
    s = len(cocycles)
    n = P.n
    for idx, c in enumerate(cocycles):
        if c.base.n != n:
            raise ValueError("cocycle on a different base dimension")
        if c.base is not P and (c.base.dot != P.dot or c.base.bracket != P.bracket):
            raise ValueError(f"entry {idx + 1}: cocycle attached to a different base algebra")
        bad = c.violations()
        if bad:
            name, loc = bad[0]
            raise NotACocycle(
                f"entry {idx + 1}: condition {name} fails at basis triple "
                f"{tuple(x + 1 for x in loc)}",
                location=loc,
            )
    N = n + s
    dot = [[[rf(0)] * N for _ in range(N)] for _ in range(N)]
    br = [[[rf(0)] * N for _ in range(N)] for _ in range(N)]
    for i in range(n):
        for j in range(n):
            for m in range(n):
                dot[i][j][m] = P.dot[i][j][m]
                br[i][j][m] = P.bracket[i][j][m]
            for k, c in enumerate(cocycles):
                dot[i][j][n + k] = c.theta.mat.rows[i][j]
                br[i][j][n + k] = c.vartheta.mat.rows[i][j]
    out = AlgebraPair(N, dot, br, label=label or f"{P.label}^({s})")

    # the new directions annihilate, and nothing else joins them beyond
    # the base annihilator vectors killed by every cocycle
    expected = Subspace(
        N,
        [list(v) + [rf(0)] * s for v in rad(cocycles).intersect(annihilator(P)).basis()]
        + [[rf(1) if c == n + k else rf(0) for c in range(N)] for k in range(s)],
    )
    if annihilator(out) != expected:
        raise ExtensionError("annihilator decomposition failed")
    return out


def cocycle_from_spec(P: AlgebraPair, text: str, allow_param: bool = False) -> CocyclePair:
    """Parse a linear combination of elementary forms into a cocycle
    candidate on P: atoms s<ij> (symmetric entry, i <= j) and k<ij>
    (antisymmetric entry, i < j), 1-based single-digit indices.  The pair
    is NOT checked against the cocycle conditions here; extend() does that."""
    from . import expr

    pairs = expr.parse_lincomb(text, prefixes=("s", "k"))
    theta = BiFormScalar.zero(P.n, "symmetric")
    vartheta = BiFormScalar.zero(P.n, "antisymmetric")
    for atom, coef_ast in pairs:
        digits = atom[1:]
        if len(digits) != 2 or not digits.isdigit():
            raise ValueError(f"bad form atom {atom!r}: expected two index digits")
        i, j = int(digits[0]), int(digits[1])
        if not (1 <= i <= P.n and 1 <= j <= P.n):
            raise ValueError(f"form atom {atom!r}: index out of range for dim {P.n}")
        coef = expr.lower(coef_ast)
        if isinstance(coef, expr.NotRational):
            raise ValueError(f"non-rational coefficient on {atom}")
        if coef.num.uses_t() or coef.den.uses_t():
            raise ValueError("cocycle coefficients cannot use t")
        if (coef.num.uses_a() or coef.den.uses_a()) and not allow_param:
            raise ValueError("parameter a used without being declared")
        if atom[0] == "s":
            if i > j:
                raise ValueError(f"form atom {atom!r}: indices must be nondecreasing")
            theta = theta.plus(nabla(P.n, i, j, coeff=coef))
        else:
            if i >= j:
                raise ValueError(f"form atom {atom!r}: indices must be increasing")
            vartheta = vartheta.plus(delta(P.n, i, j, coeff=coef))
    return CocyclePair(theta, vartheta, P)


def cocycle_matrix_action(
    cs: CocyclePair | list[CocyclePair], phi: Matrix, mix: Matrix | None = None
):
    """Pull back cocycles along an automorphism of the base, optionally
    mixing the list by an invertible matrix: theta'_k = phi^T (sum_i
    mix[i][k] theta_i) phi."""
    single = isinstance(cs, CocyclePair)
    if single:
        cs = [cs]
    if not cs:
        raise ValueError("empty cocycle list")
    P = cs[0].base
    _require_automorphism(P, phi)
    s = len(cs)
    if mix is None:
        mix = Matrix.identity(s)
    elif mix.nrows != s or mix.ncols != s:
        raise ValueError("mix shape mismatch")
    pt = phi.transpose()
    out = []
    for k in range(s):
        th = Matrix.zero(P.n, P.n)
        vt = Matrix.zero(P.n, P.n)
        for i in range(s):
            coef = mix.rows[i][k]
            if coef.is_zero:
                continue
            for p in range(P.n):
                for q in range(P.n):
                    th.rows[p][q] = th.rows[p][q] + coef * cs[i].theta.mat.rows[p][q]
                    vt.rows[p][q] = vt.rows[p][q] + coef * cs[i].vartheta.mat.rows[p][q]
        out.append(
            CocyclePair(
                BiFormScalar(P.n, pt @ th @ phi, "symmetric"),
                BiFormScalar(P.n, pt @ vt @ phi, "antisymmetric"),
                P,
            )
        )
    return out[0] if single else out


def _require_automorphism(P: AlgebraPair, phi: Matrix):
    from .field import SingularMatrix

    if phi.nrows != P.n or phi.ncols != P.n:
        raise NotAnAutomorphism("shape mismatch")
    try:
        phi.invert()
    except SingularMatrix:
        raise NotAnAutomorphism("singular matrix") from None
    cols = [[phi.rows[p][i] for p in range(P.n)] for i in range(P.n)]
    for i in range(P.n):
        for j in range(P.n):
            if phi.apply(P.dot[i][j]) != P.product(cols[i], cols[j]):
                raise NotAnAutomorphism(f"dot not preserved at ({i + 1},{j + 1})")
            if phi.apply(P.bracket[i][j]) != P.bracket_of(cols[i], cols[j]):
                raise NotAnAutomorphism(f"bracket not preserved at ({i + 1},{j + 1})")


def has_annihilator_component(P: AlgebraPair, cocycles: list[CocyclePair]) -> bool:
    """True iff the cohomology classes of the list are linearly dependent."""
    width = len(_sym_slots(P.n)) + len(_skew_slots(P.n))
    bvecs = [cocycle_to_vector(c) for c in b22_basis(P)]
    cvecs = [cocycle_to_vector(c) for c in cocycles]
    base = Subspace(width, bvecs)
    joint = Subspace(width, bvecs + cvecs)
    return joint.dim < base.dim + len(cvecs)


# ---------------------------------------------------------------------------
# fixed-dot route: algebra-valued antisymmetric forms


@dataclass(frozen=True, eq=False)
class AlgValuedBiForm:
    """Antisymmetric bilinear map into the algebra, one component matrix per
    output coordinate."""

    n: int
    comps: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.comps) != self.n:
            raise ValueError("need one component matrix per coordinate")
        for B in self.comps:
            if B.nrows != self.n or B.ncols != self.n:
                raise ValueError("component shape mismatch")
            for i in range(self.n):
                for j in range(i, self.n):
                    if B.rows[i][j] != -B.rows[j][i]:
                        raise ValueError("component not antisymmetric")

    @staticmethod
    def zero(n: int) -> "AlgValuedBiForm":
        return AlgValuedBiForm(n, tuple(Matrix.zero(n, n) for _ in range(n)))

    @staticmethod
    def from_entries(n: int, entries: dict) -> "AlgValuedBiForm":
        """entries: {(i, j): vector} for i < j, 1-based, value of (e_i, e_j)."""
        comps = [Matrix.zero(n, n) for _ in range(n)]
        for (i, j), v in entries.items():
            if not 1 <= i < j <= n:
                raise ValueError("entries must use 1-based slots with i < j")
            for k, c in enumerate(v):
                cc = rf(c)
                comps[k].rows[i - 1][j - 1] = cc
                comps[k].rows[j - 1][i - 1] = -cc
        return AlgValuedBiForm(n, tuple(comps))

    def apply(self, x: Vec, y: Vec) -> Vec:
        return [_bilinear(B, x, y) for B in self.comps]

    def value(self, i: int, j: int) -> Vec:
        """Value on the basis pair (e_i, e_j), 0-based."""
        return [B.rows[i][j] for B in self.comps]

    @property
    def is_zero(self) -> bool:
        return all(x.is_zero for B in self.comps for r in B.rows for x in r)

    def bracket_table(self) -> list[list[Vec]]:
        return [
            [self.value(i, j) for j in range(self.n)] for i in range(self.n)
        ]

    def __str__(self):
        parts = []
        for k, B in enumerate(self.comps):
            terms = []
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    c = B.rows[i][j]
                    if not c.is_zero:
                        terms.append(f"({c})*D{i + 1}{j + 1}")
            parts.append(" + ".join(terms) if terms else "0")
        return "(" + ", ".join(parts) + ")"


def _bilinear(B: Matrix, x: Vec, y: Vec) -> RatFun:
    acc = RatFun.zero()
    for i, xi in enumerate(x):
        if xi.is_zero:
            continue
        for j, yj in enumerate(y):
            if not yj.is_zero:
                acc = acc + xi * yj * B.rows[i][j]
    return acc


def _alg_form_slots(n: int) -> list[tuple[int, int, int]]:
    return [(k, i, j) for k in range(n) for i in range(n) for j in range(i + 1, n)]


def _alg_form_to_vector(t: AlgValuedBiForm) -> Vec:
    return [t.comps[k].rows[i][j] for (k, i, j) in _alg_form_slots(t.n)]


def _alg_form_from_vector(n: int, v: Vec) -> AlgValuedBiForm:
    comps = [Matrix.zero(n, n) for _ in range(n)]
    for s, (k, i, j) in enumerate(_alg_form_slots(n)):
        c = rf(v[s])
        comps[k].rows[i][j] = c
        comps[k].rows[j][i] = -c
    return AlgValuedBiForm(n, tuple(comps))


@dataclass
class FixedDotSolution:
    """Affine solution set particular + span(basis); empty if inconsistent."""

    consistent: bool
    particular: AlgValuedBiForm | None
    basis: list[AlgValuedBiForm]
    _matrix: Matrix
    _rhs: Vec

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, theta: AlgValuedBiForm) -> bool:
        if not self.consistent:
            return False
        u = _alg_form_to_vector(theta)
        if self._matrix.nrows == 0:
            return True
        return self._matrix.apply(u) == list(self._rhs)

    def is_zero_set(self) -> bool:
        return (
            self.consistent
            and not self.basis
            and (self.particular is None or self.particular.is_zero)
        )


def z2_fixed_dot_linear(A: AlgebraPair) -> FixedDotSolution:
    """Solve the two linear compatibility conditions for an antisymmetric
    algebra-valued form against the fixed commutative product of A.  The
    bracket table of A is ignored.  The first condition is inhomogeneous,
    so the result is an affine set; the quadratic Jacobi condition is NOT
    imposed here (see jacobi_check)."""
    n = A.n
    for i in range(n):
        for j in range(i + 1, n):
            if A.dot[i][j] != A.dot[j][i]:
                raise ValueError("dot table is not commutative")
    slots = _alg_form_slots(n)
    index = {s: c for c, s in enumerate(slots)}
    width = len(slots)
    zero = RatFun.zero()

    def put(row, k, i, j, c):
        if i == j or c.is_zero:
            return
        if i < j:
            row[index[(k, i, j)]] = row[index[(k, i, j)]] + c
        else:
            row[index[(k, j, i)]] = row[index[(k, j, i)]] - c

    rows: list[Vec] = []
    rhs: Vec = []
    # theta(ei,ej).el = ei.(ej.el) - ej.(ei.el)
    for i in range(n):
        ei = A.basis_vector(i)
        for j in range(i + 1, n):
            ej = A.basis_vector(j)
            for l in range(n):
                target = [
                    p - q
                    for p, q in zip(
                        A.product(ei, A.dot[j][l]), A.product(ej, A.dot[i][l])
                    )
                ]
                for q in range(n):
                    row = [zero] * width
                    for m in range(n):
                        put(row, m, i, j, A.dot[m][l][q])
                    if any(not x.is_zero for x in row) or not target[q].is_zero:
                        rows.append(row)
                        rhs.append(target[q])
    # ei.theta(ej,ek) = theta(ei.ej, ek) + theta(ej, ei.ek)
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                for q in range(n):
                    row = [zero] * width
                    for m in range(n):
                        put(row, q, m, k, -A.dot[i][j][m])
                        put(row, q, j, m, -A.dot[i][k][m])
                        put(row, m, j, k, A.dot[i][m][q])
                    if any(not x.is_zero for x in row):
                        rows.append(row)
                        rhs.append(zero)
    if not rows:
        basis = [
            [rf(1) if c == s else rf(0) for c in range(width)] for s in range(width)
        ]
        M = Matrix.zero(0, width)
        return FixedDotSolution(
            True,
            AlgValuedBiForm.zero(n),
            [_alg_form_from_vector(n, v) for v in basis],
            M,
            [],
        )
    M = Matrix(rows)
    part = solve_particular(M, rhs)
    if part is None:
        return FixedDotSolution(False, None, [], M, rhs)
    basis = [_alg_form_from_vector(n, list(r)) for r in M.kernel().rows]
    return FixedDotSolution(True, _alg_form_from_vector(n, part), basis, M, rhs)


def jacobi_check(theta: AlgValuedBiForm) -> bool:
    """Quadratic condition theta(x, theta(y,z)) = theta(theta(x,y), z) +
    theta(y, theta(x,z)) on all basis triples."""
    n = theta.n
    basis = [[rf(1) if p == i else rf(0) for p in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = theta.apply(basis[i], theta.value(j, k))
                rhs = [
                    p + q
                    for p, q in zip(
                        theta.apply(theta.value(i, j), basis[k]),
                        theta.apply(basis[j], theta.value(i, k)),
                    )
                ]
                if lhs != rhs:
                    return False
    return True


def pair_with_bracket(A: AlgebraPair, theta: AlgValuedBiForm, label: str = "") -> AlgebraPair:
    """The pair (A's dot, theta as bracket)."""
    return AlgebraPair(A.n, A.dot, theta.bracket_table(), label=label or A.label)


def bracket_form(P: AlgebraPair) -> AlgValuedBiForm:
    """The bracket of P viewed as an algebra-valued antisymmetric form."""
    return AlgValuedBiForm(
        P.n, tuple(
            Matrix([[P.bracket[i][j][k] for j in range(P.n)] for i in range(P.n)])
            for k in range(P.n)
        )
    )


def aut_action_fixed_dot(
    A: AlgebraPair, theta: AlgValuedBiForm, phi: Matrix
) -> AlgValuedBiForm:
    """(theta * phi)(x, y) = phi^{-1}(theta(phi x, phi y)); phi must preserve
    the dot table of A (the bracket is ignored here)."""
    from .field import SingularMatrix

    n = A.n
    if phi.nrows != n or phi.ncols != n:
        raise NotAnAutomorphism("shape mismatch")
    try:
        inv = phi.invert()
    except SingularMatrix:
        raise NotAnAutomorphism("singular matrix") from None
    cols = [[phi.rows[p][i] for p in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            if phi.apply(A.dot[i][j]) != A.product(cols[i], cols[j]):
                raise NotAnAutomorphism(f"dot not preserved at ({i + 1},{j + 1})")
    comps = [Matrix.zero(n, n) for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = inv.apply(theta.apply(cols[i], cols[j]))
            for k in range(n):
                comps[k].rows[i][j] = w[k]
                comps[k].rows[j][i] = -w[k]
    return AlgValuedBiForm(n, tuple(comps))


# ---------------------------------------------------------------------------
# fixed-bracket route: commutative products compatible with a given bracket


def no_nonzero_compatible_bracket(A: AlgebraPair) -> bool:
    """True when the only bracket compatible with A's dot is zero."""
    sol = z2_fixed_dot_linear(A)
    if not sol.consistent or sol.is_zero_set():
        return True
    if sol.dim == 0:
        # unique nonzero candidate; compatible iff it also satisfies Jacobi
        return not jacobi_check(sol.particular)
    raise NotImplementedError(
        "quadratic filter implemented for affine sets of dimension 0"
    )


def compatible_dots_linear(P: AlgebraPair) -> list[list[list[Vec]]]:
    """Basis of symmetric product tables satisfying the linear mixed
    condition x.{y,z} = {x.y, z} + {y, x.z} against the bracket of P.
    The dot table of P is ignored; the other mixed condition is quadratic
    in the unknown product and is checked separately."""
    n = P.n
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    index = {}
    for s, (i, j) in enumerate(slots):
        index[(i, j)] = s
    width = n * len(slots)  # unknown c_{ij}^q at width-slot (q * len + s)
    zero = RatFun.zero()

    def put(row, i, j, q, c):
        if c.is_zero:
            return
        s = index[(i, j) if i <= j else (j, i)]
        row[q * len(slots) + s] = row[q * len(slots) + s] + c

    rows = []
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                for q in range(n):
                    row = [zero] * width
                    for m in range(n):
                        put(row, i, m, q, P.bracket[j][k][m])
                        put(row, i, j, m, -P.bracket[m][k][q])
                        put(row, i, k, m, -P.bracket[j][m][q])
                    if any(not x.is_zero for x in row):
                        rows.append(row)
    if not rows:
        kernel_vecs = [
            [rf(1) if c == s else rf(0) for c in range(width)] for s in range(width)
        ]
    else:
        kernel_vecs = [list(r) for r in Matrix(rows).kernel().rows]
    out = []
    for v in kernel_vecs:
        table = [[[rf(0)] * n for _ in range(n)] for _ in range(n)]
        for s, (i, j) in enumerate(slots):
            for q in range(n):
                c = v[q * len(slots) + s]
                table[i][j][q] = c
                table[j][i][q] = c
        out.append(table)
    return out


def mixed_identity_one_holds(P: AlgebraPair, dot_table: list[list[Vec]]) -> bool:
    """Check {x,y}.z = x.(y.z) - y.(x.z) for a candidate dot table against
    the bracket of P, on all basis triples."""
    n = P.n

    def dmul(v: Vec, k: int) -> Vec:
        out = [rf(0)] * n
        for m, c in enumerate(v):
            if not c.is_zero:
                out = [o + c * x for o, x in zip(out, dot_table[m][k])]
        return out

    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = dmul(P.bracket[i][j], k)
                yz = dot_table[j][k]
                xz = dot_table[i][k]
                rhs = [rf(0)] * n
                for m, c in enumerate(yz):
                    if not c.is_zero:
                        rhs = [o + c * x for o, x in zip(rhs, dot_table[i][m])]
                for m, c in enumerate(xz):
                    if not c.is_zero:
                        rhs = [o - c * x for o, x in zip(rhs, dot_table[j][m])]
                if lhs != rhs:
                    return False
    return True


def no_nonzero_compatible_dot(P: AlgebraPair) -> bool:
    """True when the only commutative product compatible with P's bracket is
    zero: linear solve for the linear mixed condition, then an exact check
    of the quadratic one along the solution space."""
    basis = compatible_dots_linear(P)
    if not basis:
        return True
    if len(basis) > 1:
        raise NotImplementedError(
            "quadratic filter implemented for solution spaces of dim <= 1"
        )
    return not _ray_has_nonzero_solution(P, basis[0])


def _ray_has_nonzero_solution(P: AlgebraPair, b: list[list[Vec]]) -> bool:
    """Is there s != 0 with s*b satisfying {x,y}.z = x.(y.z) - y.(x.z)?

    Each basis-triple component gives s*L = s^2*R with L, R scalars from b,
    so a nonzero solution needs L = s*R for all of them at a common s != 0.
    """
    n = P.n
    pairs = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for q in range(n):
                    L = RatFun.zero()
                    R = RatFun.zero()
                    for m in range(n):
                        L = L + P.bracket[i][j][m] * b[m][k][q]
                        R = R + b[j][k][m] * b[i][m][q] - b[i][k][m] * b[j][m][q]
                    pairs.append((L, R))
    s_val = None
    for L, R in pairs:
        if not R.is_zero:
            cand = L / R
            if s_val is None:
                s_val = cand
            elif s_val != cand:
                return False
    if s_val is None:
        # quadratic part vanishes identically on the ray; s scales L only
        return all(L.is_zero for L, _ in pairs)
    if s_val.is_zero:
        return False
    return all(L == s_val * R for L, R in pairs)
