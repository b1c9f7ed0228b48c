"""Degeneration witnesses and their verification.

A witness names a source and a target table from the catalog and gives a
basis parametrized by t (entries in Q(i)(a,t), possibly with radicals).
Exact verification computes the transformed structure constants over the
function field and takes the t -> 0 limit entrywise; numeric verification
evaluates the same data with mpmath along a ladder of t values and checks
that the residual against the target shrinks.  The module also hosts the
necessary-condition certificates used to refute degenerations and the
closed-set membership checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import mpmath

from . import catalog, expr
from .algebra import AlgebraPair, square_bracket
from .field import Matrix, NegativeValuation, RatFun, SingularMatrix
from .invariants import fingerprint, semicontinuity_check


class DegenError(Exception):
    pass


class WitnessFormatError(DegenError):
    def __init__(self, path, lineno, msg):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


class NotRationalEntries(DegenError):
    """Basis or index entries leave Q(i)(a,t); use numeric verification."""

    def __init__(self, claim: str, entries: list[str]):
        super().__init__(f"{claim}: non-rational entries: {', '.join(entries)}")
        self.entries = entries


class SingularBasis(DegenError):
    pass


class NumericSingularBasis(DegenError):
    pass


DEFAULT_SAMPLES = (Fraction(2), Fraction(3), Fraction(5, 2))
DEFAULT_T_LADDER = tuple(Fraction(1, 10) ** k for k in range(1, 7))


# ---------------------------------------------------------------------------
# Witness type and file format


@dataclass(frozen=True)
class DegenerationWitness:
    claim: str
    source: str
    index: object | None          # Expr substituted for the source parameter
    target: str
    target_param: bool
    rows: tuple                   # row i: tuple of (basis index j, Expr coeff)
    reparam: int = 1
    mode: str = "auto"            # exact | numeric | auto
    samples: tuple = DEFAULT_SAMPLES
    path: Path | None = None

    @property
    def n(self) -> int:
        return len(self.rows)

    def effective_index(self):
        if self.index is None or self.reparam == 1:
            return self.index
        return expr.reparametrize(self.index, self.reparam)

    def effective_rows(self):
        if self.reparam == 1:
            return self.rows
        return tuple(
            tuple((j, expr.reparametrize(c, self.reparam)) for j, c in row)
            for row in self.rows
        )

    def uses_radicals(self) -> bool:
        es = [c for row in self.effective_rows() for _, c in row]
        if self.effective_index() is not None:
            es.append(self.effective_index())
        return any(expr.has_fractional_power(e) for e in es)


def parse_degeneration_text(text: str, path="<string>") -> DegenerationWitness:
    claim = source = target = None
    index = None
    target_param = False
    reparam = 1
    mode = "auto"
    samples = DEFAULT_SAMPLES
    rows: dict[int, tuple] = {}
    saw_end = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if saw_end:
            raise WitnessFormatError(path, lineno, "content after 'end'")
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "degeneration":
            claim = rest
        elif head == "source":
            parts = rest.split(None, 2)
            if not parts:
                raise WitnessFormatError(path, lineno, "empty source line")
            source = parts[0]
            if len(parts) > 1:
                if parts[1] != "index" or len(parts) < 3:
                    raise WitnessFormatError(path, lineno, f"bad source line {rest!r}")
                try:
                    index = expr.parse(parts[2])
                except expr.ExprSyntaxError as exc:
                    raise WitnessFormatError(path, lineno, str(exc)) from exc
        elif head == "target":
            parts = rest.split()
            if not parts:
                raise WitnessFormatError(path, lineno, "empty target line")
            target = parts[0]
            if parts[1:] == ["param", "a"]:
                target_param = True
            elif parts[1:]:
                raise WitnessFormatError(path, lineno, f"bad target line {rest!r}")
        elif head == "reparam":
            try:
                reparam = int(rest)
            except ValueError as exc:
                raise WitnessFormatError(path, lineno, f"bad reparam {rest!r}") from exc
            if reparam < 1:
                raise WitnessFormatError(path, lineno, "reparam must be positive")
        elif head == "mode":
            if rest not in ("exact", "numeric", "auto"):
                raise WitnessFormatError(path, lineno, f"unknown mode {rest!r}")
            mode = rest
        elif head == "samples":
            try:
                samples = tuple(Fraction(s.strip()) for s in rest.split(","))
            except (ValueError, ZeroDivisionError) as exc:
                raise WitnessFormatError(path, lineno, f"bad samples {rest!r}") from exc
            if not samples:
                raise WitnessFormatError(path, lineno, "empty samples list")
        elif head.startswith("E") and head[1:].isdigit() and "=" in line:
            i = int(head[1:])
            _, rhs = line.split("=", 1)
            try:
                pairs = expr.parse_lincomb(rhs.strip(), prefixes=("e",))
            except expr.ExprSyntaxError as exc:
                raise WitnessFormatError(path, lineno, str(exc)) from exc
            if i in rows:
                raise WitnessFormatError(path, lineno, f"duplicate row E{i}")
            rows[i] = tuple((expr.atom_index(atom), coeff) for atom, coeff in pairs)
        elif line == "end":
            saw_end = True
        else:
            raise WitnessFormatError(path, lineno, f"unrecognized line {line!r}")
    if not claim or not source or not target:
        raise WitnessFormatError(path, 0, "missing degeneration/source/target header")
    if not saw_end:
        raise WitnessFormatError(path, 0, "missing 'end'")
    n = len(rows)
    if sorted(rows) != list(range(1, n + 1)):
        raise WitnessFormatError(path, 0, f"rows must be E1..E{n} with no gaps")
    for i in range(1, n + 1):
        for j, _ in rows[i]:
            if not 1 <= j <= n:
                raise WitnessFormatError(path, 0, f"row E{i} uses e{j} outside dim {n}")
    return DegenerationWitness(
        claim, source, index, target, target_param,
        tuple(rows[i] for i in range(1, n + 1)),
        reparam, mode, samples, Path(str(path)),
    )


def degenerations_dir() -> Path:
    return Path(str(resources.files(__package__) / "data" / "degenerations"))


def degeneration_witnesses() -> list[DegenerationWitness]:
    d = degenerations_dir()
    if not d.is_dir():
        raise DegenError(f"degenerations directory not found: {d}")
    out = []
    for p in sorted(d.glob("*.dgn")):
        w = parse_degeneration_text(p.read_text(), path=p)
        if w.claim != p.stem:
            raise WitnessFormatError(p, 0, f"claim {w.claim!r} does not match file name")
        out.append(w)
    return out


def degeneration_witness(claim: str) -> DegenerationWitness:
    for w in degeneration_witnesses():
        if w.claim == claim:
            return w
    raise DegenError(f"no witness named {claim!r}")


# ---------------------------------------------------------------------------
# Exact path


def transform(A: AlgebraPair, basis: Matrix) -> AlgebraPair:
    """Structure constants of A in the new basis given by the columns of
    basis (new vector k = column k, coordinates in the old basis)."""
    if basis.nrows != A.n or basis.ncols != A.n:
        raise ValueError("basis matrix has the wrong shape")
    try:
        inv = basis.invert()
    except SingularMatrix as exc:
        raise SingularBasis("basis matrix is singular") from exc
    n = A.n
    cols = [[basis.rows[p][k] for p in range(n)] for k in range(n)]
    dot = [[inv.apply(A.product(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    br = [[inv.apply(A.bracket_of(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    return AlgebraPair(n, dot, br, label=f"{A.label}~")


@dataclass
class Report:
    claim: str
    mode: str
    passed: bool
    mismatches: list = field(default_factory=list)   # (tensor, i, j, k) 1-based
    residuals: dict = field(default_factory=dict)    # str(a sample) -> [(t, float)]
    warnings: list = field(default_factory=list)
    message: str = ""


def _load_endpoints(w: DegenerationWitness):
    S = catalog.load(w.source)
    T = catalog.load(w.target)
    if isinstance(S, AlgebraPair) is False or isinstance(T, AlgebraPair) is False:
        raise DegenError(f"{w.claim}: witnesses need two-product tables")
    if S.n != w.n or T.n != w.n:
        raise DegenError(
            f"{w.claim}: dimension mismatch (rows {w.n}, source {S.n}, target {T.n})")
    if w.index is not None and not S.uses_parameter():
        raise DegenError(f"{w.claim}: index substitution on a parameterless source")
    if w.target_param and not T.uses_parameter():
        raise DegenError(f"{w.claim}: 'param a' on a parameterless target")
    if not w.target_param and T.uses_parameter():
        raise DegenError(f"{w.claim}: parametric target needs 'param a'")
    return S, T


def _lower_witness(w: DegenerationWitness):
    """RatFun images of index and basis entries, or the non-rational texts."""
    bad = []
    idx = None
    eff_index = w.effective_index()
    if eff_index is not None:
        idx = expr.lower(eff_index)
        if isinstance(idx, expr.NotRational):
            bad.append(f"index {expr.to_text(eff_index)}")
            idx = None
    n = w.n
    mat = [[RatFun.zero() for _ in range(n)] for _ in range(n)]
    for i, row in enumerate(w.effective_rows()):
        for j, coeff in row:
            c = expr.lower(coeff)
            if isinstance(c, expr.NotRational):
                bad.append(f"E{i + 1}: {expr.to_text(coeff)}")
            else:
                # column i holds basis vector i, row j its e_j coordinate
                mat[j - 1][i] = mat[j - 1][i] + c
    if bad:
        raise NotRationalEntries(w.claim, bad)
    return idx, Matrix(mat)


def verify_exact(w: DegenerationWitness) -> Report:
    """Transform, take t -> 0 limits, compare with the target exactly.

    Raises NotRationalEntries for radical witnesses, SingularBasis if the
    parametrized basis is degenerate, NegativeValuation (with the tensor
    slot in .location) if some transformed constant diverges.
    """
    S, T = _load_endpoints(w)
    idx, M = _lower_witness(w)
    if w.index is not None and idx is not None:
        S = S.subs_a(idx)
    try:
        moved = transform(S, M)
    except SingularBasis:
        raise SingularBasis(f"{w.claim}: basis matrix is singular over Q(i)(a,t)")
    mismatches = []
    for tensor, got, want in (("dot", moved.dot, T.dot),
                              ("bracket", moved.bracket, T.bracket)):
        for i in range(w.n):
            for j in range(w.n):
                for k in range(w.n):
                    try:
                        lim = got[i][j][k].limit_t0()
                    except NegativeValuation as exc:
                        raise NegativeValuation(
                            f"{w.claim}: {tensor} constant ({i + 1},{j + 1},{k + 1}) "
                            f"diverges as t -> 0",
                            location=(tensor, i + 1, j + 1, k + 1),
                        ) from exc
                    if lim != want[i][j][k]:
                        mismatches.append((tensor, i + 1, j + 1, k + 1))
    ok = not mismatches
    return Report(w.claim, "exact", ok, mismatches=mismatches,
                  message="limits match the target" if ok
                  else f"{len(mismatches)} constants have the wrong limit")


# ---------------------------------------------------------------------------
# Numeric path


def _uses_a(w: DegenerationWitness) -> bool:
    if w.target_param:
        return True
    es = [c for row in w.rows for _, c in row]
    if w.index is not None:
        es.append(w.index)
    return any(expr.uses_name(e, "a") for e in es)


def _numeric_tensor(P: AlgebraPair, a_val, t_val):
    return [[[c.eval_mp(a_val, t_val) for c in P.dot[i][j]] for j in range(P.n)]
            for i in range(P.n)], \
           [[[c.eval_mp(a_val, t_val) for c in P.bracket[i][j]] for j in range(P.n)]
            for i in range(P.n)]


def verify_numeric(w: DegenerationWitness, tol: float = 1e-6,
                   t_samples=None, a_samples=None) -> Report:
    """Evaluate the witness along a ladder of t values and check that the
    max-norm residual against the target is nonincreasing (10% slack per
    step) and ends below tol.  Parametric data is checked at every sample
    of a (defaults: the witness samples line, else 2, 3, 5/2)."""
    S, T = _load_endpoints(w)
    ladder = list(t_samples) if t_samples is not None else list(DEFAULT_T_LADDER)
    if a_samples is not None:
        samples = [Fraction(q) for q in a_samples]
    elif _uses_a(w):
        samples = list(w.samples)
    else:
        samples = [Fraction(1)]  # value is irrelevant, nothing uses a
    rows = w.effective_rows()
    eff_index = w.effective_index()
    report = Report(w.claim, "numeric", True)
    if w.uses_radicals():
        report.warnings.append(
            "fractional powers: odd roots of negative reals take the real "
            "branch, all other cases the principal branch")
    n = w.n
    # entry magnitudes scale like powers of t; deep ladder rungs plus a
    # t -> t^m reparametrization need precision well past the cancellation
    # range or LU pivots collapse to zero
    depth = max(-mpmath.log10(abs(expr._to_mp(tau))) for tau in ladder)
    dps = max(60, 40 + 20 * w.reparam * int(mpmath.ceil(depth)))
    with mpmath.workdps(dps):
        for q in samples:
            Tq = T.subs_a(q) if T.uses_parameter() else T
            t_dot, t_br = _numeric_tensor(Tq, mpmath.mpf(0), mpmath.mpf(0))
            series = []
            for tau in ladder:
                ctx = expr.NumericContext(precision=dps, a_value=q, t_value=tau)
                if eff_index is not None:
                    a_here = expr.eval_numeric(eff_index, ctx)
                else:
                    a_here = expr._to_mp(q)
                cols = [[mpmath.mpf(0)] * n for _ in range(n)]
                for i, row in enumerate(rows):
                    for j, coeff in row:
                        cols[i][j - 1] += expr.eval_numeric(coeff, ctx)
                M = mpmath.matrix([[cols[k][p] for k in range(n)] for p in range(n)])
                s_dot, s_br = _numeric_tensor(S, a_here, expr._to_mp(tau))
                try:
                    LU = mpmath.lu_solve  # noqa: N806 (alias for readability)
                    resid = mpmath.mpf(0)
                    for s_tab, t_tab in ((s_dot, t_dot), (s_br, t_br)):
                        for i in range(n):
                            for j in range(n):
                                prod = [mpmath.mpf(0)] * n
                                for p in range(n):
                                    xp = cols[i][p]
                                    if xp == 0:
                                        continue
                                    for r in range(n):
                                        yr = cols[j][r]
                                        if yr == 0:
                                            continue
                                        for k in range(n):
                                            prod[k] += xp * yr * s_tab[p][r][k]
                                z = LU(M, mpmath.matrix(prod))
                                for k in range(n):
                                    resid = max(resid, abs(z[k] - t_tab[i][j][k]))
                except (ZeroDivisionError, ValueError) as exc:
                    raise NumericSingularBasis(
                        f"{w.claim}: basis numerically singular at a={q}, t={tau}"
                    ) from exc
                series.append((tau, resid))
            # decide in working precision; float() may round onto the bound
            final = series[-1][1]
            monotone = all(series[s + 1][1] <= series[s][1] * mpmath.mpf("1.1")
                           for s in range(len(series) - 1))
            if not final < mpmath.mpf(tol) or not monotone:
                report.passed = False
            report.residuals[str(q)] = [(float(tau), float(r)) for tau, r in series]
    report.message = ("residuals shrink to the target" if report.passed
                      else "residuals do not settle below tolerance")
    return report


def verify(w: DegenerationWitness, tol: float = 1e-6) -> Report:
    """Dispatch on the witness mode; auto tries exact first and falls back
    to numeric when entries leave the rational function field."""
    if w.mode == "exact":
        return verify_exact(w)
    if w.mode == "numeric":
        return verify_numeric(w, tol=tol)
    try:
        return verify_exact(w)
    except NotRationalEntries:
        return verify_numeric(w, tol=tol)


# ---------------------------------------------------------------------------
# Non-degeneration certificates


@dataclass
class NonDegenReport:
    source: str
    target: str
    certificates: list       # Verdict-style (name, detail) pairs

    @property
    def passed(self) -> bool:
        return bool(self.certificates)

    @property
    def inconclusive(self) -> bool:
        return not self.certificates


def certify_non_degeneration(source: AlgebraPair, target: AlgebraPair) -> NonDegenReport:
    """Collect violated necessary conditions for source -> target; any one
    certifies that the degeneration is impossible.  No certificate decides
    nothing (the pair may or may not degenerate)."""
    certs = []
    rep = semicontinuity_check(source, target)
    for v in rep.violations():
        certs.append((v.name, v.detail))

    # a vanishing product survives every basis change and limit
    def _is_zero_table(tab, n):
        return all(c.is_zero for i in range(n) for j in range(n) for c in tab[i][j])

    for name, s_tab, t_tab in (("dot", source.dot, target.dot),
                               ("bracket", source.bracket, target.bracket)):
        if _is_zero_table(s_tab, source.n) and not _is_zero_table(t_tab, target.n):
            certs.append((f"zero-{name}-preserved",
                          f"source {name} vanishes, target {name} does not"))

    # perfect-bracket, zero-dot targets are rigid; only an isomorphic copy
    # can reach them
    if (_is_zero_table(target.dot, target.n)
            and square_bracket(target).dim == target.n
            and fingerprint(source) != fingerprint(target)):
        certs.append(("rigid-perfect-bracket-target",
                      "target is a perfect zero-product bracket algebra and "
                      "the endpoint fingerprints differ"))
    return NonDegenReport(source.label, target.label, certs)


# ---------------------------------------------------------------------------
# Closed sets of structure constants


@dataclass(frozen=True)
class ClosedSetSpec:
    name: str
    dim: int
    equations: tuple          # raw linear-combination texts over c/d atoms


def parse_closed_set_text(text: str, path="<string>") -> ClosedSetSpec:
    name = None
    dim = None
    eqs: list[str] = []
    saw_end = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if saw_end:
            raise WitnessFormatError(path, lineno, "content after 'end'")
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "closedset":
            name = rest
        elif head == "dim":
            dim = int(rest)
        elif head == "eq":
            if not rest:
                raise WitnessFormatError(path, lineno, "empty equation")
            eqs.append(rest)
        elif line == "end":
            saw_end = True
        else:
            raise WitnessFormatError(path, lineno, f"unrecognized line {line!r}")
    if name is None or dim is None:
        raise WitnessFormatError(path, 0, "missing closedset/dim header")
    if not saw_end:
        raise WitnessFormatError(path, 0, "missing 'end'")
    if not eqs:
        raise WitnessFormatError(path, 0, "no equations")
    spec = ClosedSetSpec(name, dim, tuple(eqs))
    for eq in eqs:
        _equation_terms(spec, eq)  # validates atoms against dim
    return spec


def closed_sets_dir() -> Path:
    return Path(str(resources.files(__package__) / "data" / "closedsets"))


def closed_sets() -> list[ClosedSetSpec]:
    d = closed_sets_dir()
    if not d.is_dir():
        raise DegenError(f"closed-sets directory not found: {d}")
    out = []
    for p in sorted(d.glob("*.cset")):
        s = parse_closed_set_text(p.read_text(), path=p)
        if s.name != p.stem:
            raise WitnessFormatError(p, 0, f"name {s.name!r} does not match file name")
        out.append(s)
    return out


def closed_set(name: str) -> ClosedSetSpec:
    for s in closed_sets():
        if s.name == name:
            return s
    raise DegenError(f"no closed set named {name!r}")


def _equation_terms(spec: ClosedSetSpec, eq: str):
    """[(tensor, i, j, k, coeff RatFun)] for one linear equation."""
    pairs = expr.parse_lincomb(eq, prefixes=("c", "d"))
    out = []
    for atom, coeff_ast in pairs:
        digits = atom[1:]
        if len(digits) != 3 or not digits.isdigit():
            raise ValueError(f"bad structure-constant atom {atom!r}")
        i, j, k = (int(ch) for ch in digits)
        if not all(1 <= x <= spec.dim for x in (i, j, k)):
            raise ValueError(f"atom {atom!r} out of range for dim {spec.dim}")
        coeff = expr.lower(coeff_ast)
        if isinstance(coeff, expr.NotRational) or coeff.num.uses_t() or coeff.num.uses_a() \
                or coeff.den.uses_t() or coeff.den.uses_a():
            raise ValueError(f"equation coefficients must be constants: {eq!r}")
        out.append(("dot" if atom[0] == "c" else "bracket", i, j, k, coeff))
    return out


def closed_set_membership(spec: ClosedSetSpec, A: AlgebraPair) -> bool:
    """True iff every equation vanishes on A's structure constants
    (symbolically in a when A is parametric)."""
    if A.n != spec.dim:
        raise ValueError(f"dimension mismatch: spec {spec.dim}, algebra {A.n}")
    for eq in spec.equations:
        total = RatFun.zero()
        for tensor, i, j, k, coeff in _equation_terms(spec, eq):
            tab = A.dot if tensor == "dot" else A.bracket
            total = total + coeff * tab[i - 1][j - 1][k - 1]
        if not total.is_zero:
            return False
    return True
