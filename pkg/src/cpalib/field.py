"""Exact arithmetic over Q(i)(a,t) and exact linear algebra on top of it.

The tower: Gaussian rationals Q(i), sparse bivariate polynomials Q(i)[a,t],
and reduced rational functions Q(i)(a,t).  Everything is exact; floats only
appear through the explicit eval_mp hooks (mpmath).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath


class FieldError(Exception):
    """Base class for exact-arithmetic failures."""


class DivideByZero(FieldError):
    pass


class NegativeValuation(FieldError):
    """Raised by limit_t0 when the function blows up at t=0."""

    def __init__(self, msg: str = "pole at t=0", location: object = None):
        super().__init__(msg if location is None else f"{msg} at {location}")
        self.location = location


class SingularMatrix(FieldError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rationals


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to Fraction")


@dataclass(frozen=True)
class GaussRational:
    """Element of Q(i), stored as re + im*i with exact Fractions."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        return GaussRational(_frac(x))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_rational(self) -> bool:
        return self.im == 0

    def __add__(self, o):
        o = GaussRational.of(o)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussRational.of(o))

    def __rsub__(self, o):
        return GaussRational.of(o) + (-self)

    def __mul__(self, o):
        o = GaussRational.of(o)
        return GaussRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def inv(self) -> "GaussRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise DivideByZero("division by zero in Q(i)")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * GaussRational.of(o).inv()

    def __rtruediv__(self, o):
        return GaussRational.of(o) * self.inv()

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def to_mpc(self):
        re = mpmath.mpf(self.re.numerator) / self.re.denominator
        im = mpmath.mpf(self.im.numerator) / self.im.denominator
        return mpmath.mpc(re, im) if self.im != 0 else re

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}*i"
        ims = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        istr = "i" if mag == 1 else f"{mag}*i"
        return f"{self.re}{ims}{istr}"


GR_ZERO = GaussRational()
GR_ONE = GaussRational(Fraction(1))
GR_I = GaussRational(Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# Univariate helpers over Q(i): polys as dict[int, GaussRational], no zeros.
# Used by the gcd machinery; not public API.


def _u_trim(p: dict) -> dict:
    return {k: v for k, v in p.items() if not v.is_zero}


def _u_deg(p: dict) -> int:
    return max(p) if p else -1


def _u_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for i, c in p.items():
        for j, d in q.items():
            k = i + j
            acc = out.get(k)
            out[k] = c * d if acc is None else acc + c * d
    return _u_trim(out)


def _u_sub(p: dict, q: dict) -> dict:
    out = dict(p)
    for k, v in q.items():
        acc = out.get(k)
        out[k] = -v if acc is None else acc - v
    return _u_trim(out)


def _u_scale(p: dict, c: GaussRational) -> dict:
    if c.is_zero:
        return {}
    return {k: v * c for k, v in p.items()}


def _u_divmod(p: dict, d: dict) -> tuple[dict, dict]:
    if not d:
        raise DivideByZero("univariate division by zero")
    q: dict = {}
    r = dict(p)
    dd = _u_deg(d)
    lc = d[dd]
    lci = lc.inv()
    while r and _u_deg(r) >= dd:
        dr = _u_deg(r)
        c = r[dr] * lci
        q[dr - dd] = c
        r = _u_sub(r, _u_mul({dr - dd: c}, d))
    return _u_trim(q), r


def _u_gcd(p: dict, q: dict) -> dict:
    a, b = dict(p), dict(q)
    while b:
        _, a2 = _u_divmod(a, b)
        a, b = b, a2
    if not a:
        return {}
    return _u_scale(a, a[_u_deg(a)].inv())  # monic


def _u_divexact(p: dict, d: dict) -> dict:
    q, r = _u_divmod(p, d)
    if r:
        raise FieldError("inexact univariate division")
    return q


# ---------------------------------------------------------------------------
# Bivariate polynomials Q(i)[a,t]


class Poly2:
    """Sparse polynomial in (a,t): dict (deg_a, deg_t) -> GaussRational."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero}

    # constructors
    @staticmethod
    def zero() -> "Poly2":
        return Poly2()

    @staticmethod
    def const(c) -> "Poly2":
        c = GaussRational.of(c)
        return Poly2({(0, 0): c})

    @staticmethod
    def var(name: str) -> "Poly2":
        if name == "a":
            return Poly2({(1, 0): GR_ONE})
        if name == "t":
            return Poly2({(0, 1): GR_ONE})
        raise ValueError(f"unknown variable {name!r}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_const(self) -> bool:
        return not self.terms or self.terms.keys() == {(0, 0)}

    def const_value(self) -> GaussRational:
        if self.is_zero:
            return GR_ZERO
        if not self.is_const:
            raise FieldError("not a constant polynomial")
        return self.terms[(0, 0)]

    def __eq__(self, o):
        return isinstance(o, Poly2) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, o: "Poly2") -> "Poly2":
        out = dict(self.terms)
        for k, v in o.terms.items():
            acc = out.get(k)
            out[k] = v if acc is None else acc + v
        return Poly2(out)

    def __neg__(self) -> "Poly2":
        return Poly2({k: -v for k, v in self.terms.items()})

    def __sub__(self, o: "Poly2") -> "Poly2":
        return self + (-o)

    def __mul__(self, o: "Poly2") -> "Poly2":
        if not self.terms or not o.terms:
            return Poly2()
        out: dict = {}
        for (ia, it), c in self.terms.items():
            for (ja, jt), d in o.terms.items():
                k = (ia + ja, it + jt)
                acc = out.get(k)
                out[k] = c * d if acc is None else acc + c * d
        return Poly2(out)

    def scale(self, c: GaussRational) -> "Poly2":
        if c.is_zero:
            return Poly2()
        return Poly2({k: v * c for k, v in self.terms.items()})

    def __pow__(self, e: int) -> "Poly2":
        if e < 0:
            raise ValueError("negative exponent on a polynomial")
        out = Poly2.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # degrees / orders
    def deg_t(self) -> int:
        return max((dt for (_, dt) in self.terms), default=-1)

    def deg_a(self) -> int:
        return max((da for (da, _) in self.terms), default=-1)

    def ord_t(self) -> int:
        if self.is_zero:
            raise FieldError("ord_t of the zero polynomial")
        return min(dt for (_, dt) in self.terms)

    def ord_a(self) -> int:
        if self.is_zero:
            raise FieldError("ord_a of the zero polynomial")
        return min(da for (da, _) in self.terms)

    def t_coeff(self, k: int) -> dict:
        """Coefficient of t^k as a univariate a-poly dict."""
        return {da: c for (da, dt), c in self.terms.items() if dt == k}

    def uses_a(self) -> bool:
        return any(da for (da, _) in self.terms)

    def uses_t(self) -> bool:
        return any(dt for (_, dt) in self.terms)

    def subs(self, a: "RatFun | None" = None, t: "RatFun | None" = None) -> "RatFun":
        """Substitute rational functions for a and/or t."""
        av = a if a is not None else RatFun.var("a")
        tv = t if t is not None else RatFun.var("t")
        out = RatFun.zero()
        for (da, dt), c in self.terms.items():
            out = out + RatFun.const(c) * av ** da * tv ** dt
        return out

    def eval_mp(self, a_val, t_val):
        out = mpmath.mpf(0)
        for (da, dt), c in self.terms.items():
            out = out + c.to_mpc() * a_val ** da * t_val ** dt
        return out

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for (da, dt) in sorted(self.terms, key=lambda k: (k[1], k[0])):
            c = self.terms[(da, dt)]
            mono = []
            if da:
                mono.append("a" if da == 1 else f"a^{da}")
            if dt:
                mono.append("t" if dt == 1 else f"t^{dt}")
            cs = str(c)
            if mono and cs == "1":
                body = "*".join(mono)
            elif mono and cs == "-1":
                body = "-" + "*".join(mono)
            else:
                if ("+" in cs[1:]) or ("-" in cs[1:]):
                    cs = f"({cs})"
                body = "*".join([cs] + mono)
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__


def _p2_monomial_content(p: Poly2) -> tuple[int, int]:
    """Largest (da, dt) monomial dividing every term."""
    da = min(k[0] for k in p.terms)
    dt = min(k[1] for k in p.terms)
    return da, dt


def _p2_shift_down(p: Poly2, da: int, dt: int) -> Poly2:
    return Poly2({(ka - da, kt - dt): v for (ka, kt), v in p.terms.items()})


def _p2_from_tcoeffs(tc: list[dict]) -> Poly2:
    terms: dict = {}
    for dt, ap in enumerate(tc):
        for da, c in ap.items():
            terms[(da, dt)] = c
    return Poly2(terms)


def _p2_to_tcoeffs(p: Poly2) -> list[dict]:
    out: list[dict] = [{} for _ in range(p.deg_t() + 1)]
    for (da, dt), c in p.terms.items():
        out[dt][da] = c
    return out


def _tc_deg(tc: list[dict]) -> int:
    for d in range(len(tc) - 1, -1, -1):
        if tc[d]:
            return d
    return -1


def _tc_trim(tc: list[dict]) -> list[dict]:
    d = _tc_deg(tc)
    return [_u_trim(x) for x in tc[: d + 1]]


def _tc_content(tc: list[dict]) -> dict:
    g: dict = {}
    for ap in tc:
        if ap:
            g = _u_gcd(g, ap) if g else _u_scale(ap, ap[_u_deg(ap)].inv())
            if _u_deg(g) == 0:
                return {0: GR_ONE}
    return g if g else {}


def _tc_divexact_content(tc: list[dict], g: dict) -> list[dict]:
    if _u_deg(g) == 0 and g.get(0) == GR_ONE:
        return tc
    return [(_u_divexact(ap, g) if ap else {}) for ap in tc]


def _tc_mul_apoly(tc: list[dict], g: dict) -> list[dict]:
    return [_u_mul(ap, g) if ap else {} for ap in tc]


def _tc_prem(A: list[dict], B: list[dict]) -> list[dict]:
    """Pseudo-remainder of A by B in t, coefficients in Q(i)[a]."""
    dA, dB = _tc_deg(A), _tc_deg(B)
    lcB = B[dB]
    R = [dict(x) for x in A]
    while True:
        dR = _tc_deg(R)
        if dR < dB:
            break
        lcR = R[dR]
        # R := lcB*R - lcR * t^(dR-dB) * B
        R = _tc_mul_apoly(R, lcB)
        shift = dR - dB
        for k in range(dB + 1):
            term = _u_mul(B[k], lcR)
            idx = k + shift
            R[idx] = _u_sub(R[idx], term)
        R = _tc_trim(R)
        if not R:
            break
    return R


def poly2_gcd(p: Poly2, q: Poly2) -> Poly2:
    """Deterministic gcd in Q(i)[a,t] (primitive, lex-leading coefficient 1)."""
    if p.is_zero:
        return _p2_normalize(q)
    if q.is_zero:
        return _p2_normalize(p)
    pa, pt = _p2_monomial_content(p)
    qa, qt = _p2_monomial_content(q)
    ca, ct = min(pa, qa), min(pt, qt)
    p0 = _p2_shift_down(p, pa, pt)
    q0 = _p2_shift_down(q, qa, qt)
    mono = Poly2({(ca, ct): GR_ONE})
    if p0.is_const or q0.is_const:
        return _p2_normalize(mono)
    if not p0.uses_t() and not q0.uses_t():
        g = _u_gcd({k[0]: v for k, v in p0.terms.items()},
                   {k[0]: v for k, v in q0.terms.items()})
        gp = Poly2({(da, 0): c for da, c in g.items()})
        return _p2_normalize(mono * gp)
    if not p0.uses_a() and not q0.uses_a():
        g = _u_gcd({k[1]: v for k, v in p0.terms.items()},
                   {k[1]: v for k, v in q0.terms.items()})
        gp = Poly2({(0, dt): c for dt, c in g.items()})
        return _p2_normalize(mono * gp)
    if (not p0.uses_t()) or (not q0.uses_t()):
        # one side free of t: gcd divides the a-content of the other
        tfree, other = (p0, q0) if not p0.uses_t() else (q0, p0)
        g = _u_gcd({k[0]: v for k, v in tfree.terms.items()},
                   _tc_content(_p2_to_tcoeffs(other)))
        gp = Poly2({(da, 0): c for da, c in g.items()})
        return _p2_normalize(mono * gp)
    A, B = _p2_to_tcoeffs(p0), _p2_to_tcoeffs(q0)
    cA, cB = _tc_content(A), _tc_content(B)
    cg = _u_gcd(cA, cB)
    A = _tc_divexact_content(A, cA)
    B = _tc_divexact_content(B, cB)
    if _tc_deg(A) < _tc_deg(B):
        A, B = B, A
    while True:
        R = _tc_prem(A, B)
        if not R:
            break
        cR = _tc_content(R)
        R = _tc_divexact_content(R, cR)
        A, B = B, R
        if _tc_deg(B) == 0:
            B = [{0: GR_ONE}]
            break
    g = _p2_from_tcoeffs(_tc_mul_apoly(B, cg))
    return _p2_normalize(mono * g)


def _p2_normalize(p: Poly2) -> Poly2:
    """Scale so the lex-leading ((deg_t, deg_a) max) coefficient is 1."""
    if p.is_zero:
        return p
    key = max(p.terms, key=lambda k: (k[1], k[0]))
    lc = p.terms[key]
    if lc == GR_ONE:
        return p
    return p.scale(lc.inv())


def poly2_divexact(p: Poly2, d: Poly2) -> Poly2:
    """Exact division in Q(i)[a,t]; raises FieldError if not divisible."""
    if d.is_zero:
        raise DivideByZero("polynomial division by zero")
    if p.is_zero:
        return Poly2()
    if d.is_const:
        return p.scale(d.const_value().inv())
    da, dt = _p2_monomial_content(d)
    pa, pt = _p2_monomial_content(p)
    if da > pa or dt > pt:
        raise FieldError("inexact polynomial division (monomial content)")
    p0 = _p2_shift_down(p, da, dt)
    d0 = _p2_shift_down(d, da, dt)
    if not d0.uses_t():
        g = {k[0]: v for k, v in d0.terms.items()}
        tc = _p2_to_tcoeffs(p0)
        return _p2_from_tcoeffs([_u_divexact(ap, g) if ap else {} for ap in tc])
    A = _p2_to_tcoeffs(p0)
    B = _p2_to_tcoeffs(d0)
    dB = _tc_deg(B)
    lcB = B[dB]
    Q: list[dict] = [{} for _ in range(max(_tc_deg(A) - dB, 0) + 1)]
    while True:
        dA = _tc_deg(A)
        if dA < dB:
            break
        qc = _u_divexact(A[dA], lcB)
        Q[dA - dB] = qc
        for k in range(dB + 1):
            A[k + dA - dB] = _u_sub(A[k + dA - dB], _u_mul(B[k], qc))
        A = _tc_trim(A) + [{}] * 0
        if not A:
            A = []
            break
        if _tc_deg(A) < dB:
            break
    if A and any(A[k] for k in range(len(A))):
        raise FieldError("inexact polynomial division")
    return _p2_from_tcoeffs(Q)


# ---------------------------------------------------------------------------
# Rational functions Q(i)(a,t)


class RatFun:
    """Reduced fraction num/den of Poly2, canonically normalized."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly2, den: Poly2 | None = None, _canonical: bool = False):
        if den is None:
            den = Poly2.const(1)
        if den.is_zero:
            raise DivideByZero("zero denominator")
        if num.is_zero:
            self.num = Poly2()
            self.den = Poly2.const(1)
            return
        if _canonical:
            self.num, self.den = num, den
            return
        if not den.is_const:
            g = poly2_gcd(num, den)
            if not g.is_const:
                num = poly2_divexact(num, g)
                den = poly2_divexact(den, g)
        key = max(den.terms, key=lambda k: (k[1], k[0]))
        lc = den.terms[key]
        if lc != GR_ONE:
            inv = lc.inv()
            num = num.scale(inv)
            den = den.scale(inv)
        self.num, self.den = num, den

    # constructors
    @staticmethod
    def zero() -> "RatFun":
        return _RF_ZERO

    @staticmethod
    def one() -> "RatFun":
        return _RF_ONE

    @staticmethod
    def const(c) -> "RatFun":
        return RatFun(Poly2.const(c))

    @staticmethod
    def var(name: str) -> "RatFun":
        return RatFun(Poly2.var(name))

    @staticmethod
    def of(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        if isinstance(x, Poly2):
            return RatFun(x)
        return RatFun.const(GaussRational.of(x))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num == self.den

    def is_polynomial(self) -> bool:
        return self.den.is_const

    def is_tfree(self) -> bool:
        return not self.num.uses_t() and not self.den.uses_t()

    def __eq__(self, o):
        if not isinstance(o, RatFun):
            if isinstance(o, (int, Fraction, GaussRational)):
                o = RatFun.of(o)
            else:
                return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, o):
        o = RatFun.of(o)
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _canonical=True)

    def __sub__(self, o):
        return self + (-RatFun.of(o))

    def __rsub__(self, o):
        return RatFun.of(o) + (-self)

    def __mul__(self, o):
        o = RatFun.of(o)
        if self.is_zero or o.is_zero:
            return _RF_ZERO
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "RatFun":
        if self.is_zero:
            raise DivideByZero("inverting the zero function")
        return RatFun(self.den, self.num)

    def __truediv__(self, o):
        return self * RatFun.of(o).inv()

    def __rtruediv__(self, o):
        return RatFun.of(o) * self.inv()

    def __pow__(self, e: int) -> "RatFun":
        if e == 0:
            return _RF_ONE
        if e < 0:
            return self.inv() ** (-e)
        return RatFun(self.num ** e, self.den ** e)

    # t-adic structure
    def valuation_t(self) -> int:
        """Order of vanishing at t=0 (negative at a pole). Requires self != 0."""
        if self.is_zero:
            raise FieldError("valuation of the zero function")
        return self.num.ord_t() - self.den.ord_t()

    def limit_t0(self) -> "RatFun":
        """Exact limit as t -> 0; raises NegativeValuation at a pole."""
        if self.is_zero:
            return _RF_ZERO
        v = self.valuation_t()
        if v < 0:
            raise NegativeValuation()
        if v > 0:
            return _RF_ZERO
        on = self.num.ord_t()
        od = self.den.ord_t()
        nn = Poly2({(da, 0): c for da, c in self.num.t_coeff(on).items()})
        dd = Poly2({(da, 0): c for da, c in self.den.t_coeff(od).items()})
        return RatFun(nn, dd)

    def subs(self, a: "RatFun | None" = None, t: "RatFun | None" = None) -> "RatFun":
        top = self.num.subs(a=a, t=t)
        bot = self.den.subs(a=a, t=t)
        if bot.is_zero:
            raise DivideByZero("substitution lands on a zero denominator")
        return top / bot

    def eval_mp(self, a_val=0, t_val=0):
        top = self.num.eval_mp(a_val, t_val)
        bot = self.den.eval_mp(a_val, t_val)
        if bot == 0:
            raise ZeroDivisionError("denominator vanishes at the sample point")
        return top / bot

    def __str__(self):
        if self.den.is_const and self.den.const_value() == GR_ONE:
            return str(self.num)
        ns = str(self.num)
        if (" + " in ns) or (" - " in ns):
            ns = f"({ns})"
        ds = str(self.den)
        if len(self.den.terms) > 1 or not ds.isalnum():
            ds = f"({ds})"
        return f"{ns}/{ds}"

    __repr__ = __str__


_RF_ZERO = RatFun(Poly2())
_RF_ONE = RatFun(Poly2.const(1))


def rf(x) -> RatFun:
    """Shorthand coercion used all over the test-suite."""
    return RatFun.of(x)


# ---------------------------------------------------------------------------
# Exact linear algebra

Vec = Sequence[RatFun]


class Matrix:
    """Dense matrix over Q(i)(a,t) with exact row reduction."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = [[RatFun.of(x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(nr: int, nc: int) -> "Matrix":
        return Matrix([[0] * nc for _ in range(nr)])

    def copy(self) -> "Matrix":
        return Matrix([list(r) for r in self.rows])

    def __eq__(self, o):
        return (
            isinstance(o, Matrix)
            and self.nrows == o.nrows
            and self.ncols == o.ncols
            and all(a == b for ra, rb in zip(self.rows, o.rows) for a, b in zip(ra, rb))
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def matmul(self, o: "Matrix") -> "Matrix":
        if self.ncols != o.nrows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(o.ncols):
                acc = _RF_ZERO
                for k in range(self.ncols):
                    x = self.rows[i][k]
                    if x.is_zero:
                        continue
                    acc = acc + x * o.rows[k][j]
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def __matmul__(self, o):
        return self.matmul(o)

    def apply(self, v: Vec) -> list[RatFun]:
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.nrows):
            acc = _RF_ZERO
            for k, x in enumerate(self.rows[i]):
                if not x.is_zero:
                    acc = acc + x * RatFun.of(v[k])
            out.append(acc)
        return out

    def rref(self) -> tuple["Matrix", int, tuple[int, ...]]:
        """Reduced row-echelon form: (matrix, rank, pivot columns). Pivots are 1."""
        m = [list(r) for r in self.rows]
        pivots: list[int] = []
        pr = 0
        for col in range(self.ncols):
            sel = None
            for r in range(pr, len(m)):
                if not m[r][col].is_zero:
                    sel = r
                    break
            if sel is None:
                continue
            m[pr], m[sel] = m[sel], m[pr]
            inv = m[pr][col].inv()
            m[pr] = [x * inv for x in m[pr]]
            for r in range(len(m)):
                if r != pr and not m[r][col].is_zero:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[pr])]
            pivots.append(col)
            pr += 1
            if pr == len(m):
                break
        return Matrix(m), len(pivots), tuple(pivots)

    def rank(self) -> int:
        return self.rref()[1]

    def kernel(self) -> "Matrix":
        """Basis of the right kernel, rows in reduced echelon form."""
        R, rank, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        if not free:
            return Matrix.zero(0, self.ncols)
        basis = []
        for fc in free:
            v = [_RF_ZERO] * self.ncols
            v[fc] = _RF_ONE
            for r, pc in enumerate(pivots):
                v[pc] = -R.rows[r][fc]
            basis.append(v)
        K, _, _ = Matrix(basis).rref()
        return K

    def invert(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise SingularMatrix("non-square matrix")
        n = self.nrows
        aug = Matrix([list(self.rows[i]) + [1 if j == i else 0 for j in range(n)]
                      for i in range(n)])
        R, rank, pivots = aug.rref()
        if rank < n or any(p >= n for p in pivots[:n]) or pivots[:n] != tuple(range(n)):
            raise SingularMatrix("matrix is singular over the function field")
        return Matrix([r[n:] for r in R.rows])

    def det(self) -> RatFun:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self.rows]
        n = self.nrows
        out = _RF_ONE
        sign = 1
        for col in range(n):
            sel = None
            for r in range(col, n):
                if not m[r][col].is_zero:
                    sel = r
                    break
            if sel is None:
                return _RF_ZERO
            if sel != col:
                m[col], m[sel] = m[sel], m[col]
                sign = -sign
            piv = m[col][col]
            out = out * piv
            inv = piv.inv()
            for r in range(col + 1, n):
                if not m[r][col].is_zero:
                    f = m[r][col] * inv
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return out if sign == 1 else -out

    def subs(self, a: RatFun | None = None, t: RatFun | None = None) -> "Matrix":
        return Matrix([[x.subs(a=a, t=t) for x in r] for r in self.rows])

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + "]"

    __repr__ = __str__


def solve_particular(A: Matrix, b: Vec) -> list[RatFun] | None:
    """One solution of A x = b (free variables set to 0), or None."""
    aug = Matrix([list(r) + [RatFun.of(b[i])] for i, r in enumerate(A.rows)])
    R, rank, pivots = aug.rref()
    if any(p == A.ncols for p in pivots):
        return None  # inconsistent
    x = [_RF_ZERO] * A.ncols
    for r, pc in enumerate(pivots):
        x[pc] = R.rows[r][A.ncols]
    return x


def vec_is_zero(v: Vec) -> bool:
    return all(RatFun.of(x).is_zero for x in v)
