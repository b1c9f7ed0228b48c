"""Derivation algebras, orbit dimensions, isomorphism witnesses, and the
invariant fingerprints used for non-isomorphism and non-degeneration
arguments.

A derivation of a pair is a single linear map that is a Leibniz operator
for both products at once; its kernel dimension drives the orbit dimension
n^2 - dim Der on the structure tensor variety.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    AlgebraPair,
    annihilator,
    bracket_nilpotency,
    derived_space,
    dot_nilpotency,
    nilpotency,
    perfectness_checks,
    square_bracket,
    square_dot,
)
from .field import Matrix, RatFun, SingularMatrix, rf


class SingularWitness(Exception):
    pass


# ---------------------------------------------------------------------------
# Derivations.  Unknown D acts by columns: D(e_i) = sum_p D[p][i] e_p.


def _leibniz_rows(P: AlgebraPair, table) -> list[list[RatFun]]:
    n = P.n
    rows = []
    zero = RatFun.zero()
    for i in range(n):
        for j in range(n):
            cij = table[i][j]
            for q in range(n):
                row = [zero] * (n * n)
                # + sum_m c_ij^m D[q][m]
                for m in range(n):
                    if not cij[m].is_zero:
                        row[q * n + m] = row[q * n + m] + cij[m]
                # - sum_p D[p][i] c_pj^q  - sum_p D[p][j] c_ip^q
                for p in range(n):
                    cpjq = table[p][j][q]
                    if not cpjq.is_zero:
                        row[p * n + i] = row[p * n + i] - cpjq
                    cipq = table[i][p][q]
                    if not cipq.is_zero:
                        row[p * n + j] = row[p * n + j] - cipq
                if any(not x.is_zero for x in row):
                    rows.append(row)
    return rows


def derivations(P: AlgebraPair) -> list[Matrix]:
    """Basis of the space of joint derivations, as n x n matrices."""
    n = P.n
    rows = _leibniz_rows(P, P.dot) + _leibniz_rows(P, P.bracket)
    if not rows:
        return [Matrix([[1 if p * n + i == u else 0 for i in range(n)]
                        for p in range(n)]) for u in range(n * n)]
    ker = Matrix(rows).kernel()
    return [
        Matrix([[ker.rows[r][p * n + i] for i in range(n)] for p in range(n)])
        for r in range(ker.nrows)
    ]


def derivation_dim(P: AlgebraPair) -> int:
    return len(derivations(P))


def orbit_dim(P: AlgebraPair) -> int:
    return P.n * P.n - derivation_dim(P)


def family_dim(P: AlgebraPair) -> int:
    """Dimension of the closure of the union of basis-change orbits over the
    parameter: orbit_dim plus one when the tables depend on a.

    Assumes an essential parameter (distinct values give non-isomorphic
    members, with at most finite overlaps); that holds for every parametric
    family in the catalog.
    """
    return orbit_dim(P) + (1 if P.uses_parameter() else 0)


def derivation_profile(P: AlgebraPair, samples=(Fraction(2), Fraction(3), Fraction(5, 2))):
    """(generic dimension, {a value: dimension}) for a parametric pair.

    Rank over Q(a) can drop at special parameter values; callers that pin
    the generic value still get to see where the samples disagree.
    """
    generic = derivation_dim(P)
    sampled = {}
    if P.uses_parameter():
        for q in samples:
            sampled[q] = derivation_dim(P.subs_a(q))
    return generic, sampled


# ---------------------------------------------------------------------------
# Isomorphism witnesses


@dataclass(frozen=True, eq=False)
class IsoWitness:
    """phi maps source coordinates to target coordinates, phi(e_i) given by
    column i."""
    phi: Matrix
    source: str = ""
    target: str = ""


def verify_iso(w: IsoWitness, A: AlgebraPair, B: AlgebraPair) -> bool:
    if A.n != B.n or w.phi.nrows != A.n or w.phi.ncols != A.n:
        raise ValueError("dimension mismatch")
    try:
        w.phi.invert()
    except SingularMatrix as exc:
        raise SingularWitness(f"witness {w.source}->{w.target} is singular") from exc
    n = A.n
    cols = [[w.phi.rows[p][i] for p in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if w.phi.apply(A.dot[i][j]) != B.product(cols[i], cols[j]):
                return False
            if w.phi.apply(A.bracket[i][j]) != B.bracket_of(cols[i], cols[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# Fingerprints


@dataclass(frozen=True)
class Fingerprint:
    n: int
    ann: int
    dot_square: int
    bracket_square: int
    derived: int
    der: int
    nilpotent: bool
    nil_class: int | None
    dot_perfect: bool
    bracket_perfect: bool


def fingerprint(P: AlgebraPair) -> Fingerprint:
    nil, cls = nilpotency(P)
    perf = perfectness_checks(P)
    return Fingerprint(
        n=P.n,
        ann=annihilator(P).dim,
        dot_square=square_dot(P).dim,
        bracket_square=square_bracket(P).dim,
        derived=derived_space(P).dim,
        der=derivation_dim(P),
        nilpotent=nil,
        nil_class=cls,
        dot_perfect=perf.dot_perfect,
        bracket_perfect=perf.bracket_perfect,
    )


def fingerprint_separates(A: AlgebraPair, B: AlgebraPair) -> bool:
    """True certifies A and B are not isomorphic; false decides nothing."""
    return fingerprint(A) != fingerprint(B)


# ---------------------------------------------------------------------------
# Degeneration necessary conditions


@dataclass(frozen=True)
class Verdict:
    name: str
    holds: bool
    detail: str


@dataclass
class SemicontinuityReport:
    verdicts: list[Verdict]

    @property
    def all_hold(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def violations(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.holds]

    @property
    def certifies_non_degeneration(self) -> bool:
        return not self.all_hold

    def summary(self) -> str:
        return "; ".join(
            f"{v.name}: {'ok' if v.holds else 'VIOLATED (' + v.detail + ')'}"
            for v in self.verdicts
        )


def semicontinuity_check(source: AlgebraPair, target: AlgebraPair) -> SemicontinuityReport:
    """Necessary conditions for source -> target to be a degeneration.

    Any violation certifies non-degeneration; all conditions holding
    decides nothing.  The derivation-dimension equality case is allowed
    (we cannot decide isomorphism), only a strict drop is a violation.
    """
    if source.n != target.n:
        raise ValueError("degeneration requires equal dimensions")
    out = []

    ds, dt = derivation_dim(source), derivation_dim(target)
    out.append(Verdict("derivation-dim-nondecreasing", ds <= dt,
                       f"Der {ds} -> {dt}"))

    for name, fn in (("dot-square", square_dot),
                     ("bracket-square", square_bracket),
                     ("derived-space", derived_space)):
        s, t = fn(source).dim, fn(target).dim
        out.append(Verdict(f"{name}-nonincreasing", t <= s, f"dim {s} -> {t}"))

    s, t = annihilator(source).dim, annihilator(target).dim
    out.append(Verdict("annihilator-nondecreasing", s <= t, f"dim {s} -> {t}"))

    for name, fn in (("dot-nilpotency", dot_nilpotency),
                     ("bracket-nilpotency", bracket_nilpotency),
                     ("nilpotency", nilpotency)):
        sn, _ = fn(source)
        tn, _ = fn(target)
        out.append(Verdict(
            f"{name}-preserved", (not sn) or tn,
            f"source {'nilpotent' if sn else 'not nilpotent'}, "
            f"target {'nilpotent' if tn else 'not nilpotent'}"))
    return SemicontinuityReport(out)


def swap_matrix(n: int, i: int, j: int) -> Matrix:
    """Permutation witness exchanging basis vectors i and j (1-based)."""
    m = [[rf(1 if p == q else 0) for q in range(n)] for p in range(n)]
    i, j = i - 1, j - 1
    m[i][i] = m[j][j] = rf(0)
    m[i][j] = m[j][i] = rf(1)
    return Matrix(m)
