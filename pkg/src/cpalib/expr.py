"""Small expression language for data files: rationals, i, a, t, arithmetic,
integer/fractional powers, sqrt and cbrt sugar.

Three consumers: exact lowering to RatFun (when no fractional exponent
survives folding), arbitrary-precision numeric evaluation via mpmath
(principal branches), and the t -> t^m reparametrization used to clear
radicals from degeneration witnesses.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .field import GR_I, GR_ONE, DivideByZero, GaussRational, RatFun


class ExprSyntaxError(Exception):
    """Parse failure; `offset` is the byte offset into the input."""

    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} (at byte {offset})")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class DivideByZeroAtPoint(Exception):
    """Numeric evaluation hit a zero denominator; carries the subtree."""

    def __init__(self, subtree: str):
        super().__init__(f"division by zero while evaluating {subtree}")
        self.subtree = subtree


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: GaussRational


@dataclass(frozen=True)
class Var:
    name: str  # 'a' or 't'


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction


Expr = Const | Var | Add | Sub | Mul | Div | Neg | Pow


def const(x) -> Const:
    return Const(GaussRational.of(x))


def sqrt(e: Expr) -> Pow:
    return Pow(e, Fraction(1, 2))


def cbrt(e: Expr) -> Pow:
    return Pow(e, Fraction(1, 3))


@dataclass(frozen=True)
class NumericContext:
    """Where and how to evaluate numerically.  t must be nonzero; fractional
    powers use principal branches."""

    precision: int = 60
    a_value: object = 1
    t_value: object = Fraction(1, 100)

    def __post_init__(self):
        if self.precision < 30:
            raise ValueError("precision must be at least 30 digits")
        if self.t_value == 0:
            raise ValueError("t must be nonzero in a numeric context")


# ---------------------------------------------------------------------------
# Parser (recursive descent).
#
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := base ('^' exponent)?
#   base   := number | 'a' | 't' | 'i' | '(' expr ')' | 'sqrt(' expr ')'
#             | 'cbrt(' expr ')'
#   exponent := digits | '(' ['-'] digits ['/' digits] ')'


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ExprSyntaxError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def digits(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def ident(self) -> tuple[str, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos], start

    def parse(self) -> Expr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return e

    def expr(self) -> Expr:
        if self.peek() == "-":
            self.take("-")
            e: Expr = Neg(self.term())
        else:
            e = self.term()
        while True:
            c = self.peek()
            if c == "+":
                self.take("+")
                e = Add(e, self.term())
            elif c == "-":
                self.take("-")
                e = Sub(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.take("*")
                e = Mul(e, self.factor())
            elif c == "/":
                self.take("/")
                e = Div(e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        b = self.base()
        if self.peek() == "^":
            self.take("^")
            return Pow(b, self.exponent())
        return b

    def exponent(self) -> Fraction:
        if self.peek() == "(":
            self.take("(")
            neg = False
            if self.peek() == "-":
                self.take("-")
                neg = True
            num = self.digits()
            den = 1
            if self.peek() == "/":
                self.take("/")
                den = self.digits()
            self.take(")")
            f = Fraction(num, den)
            return -f if neg else f
        return Fraction(self.digits())

    def base(self) -> Expr:
        c = self.peek()
        if c == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if c.isdigit():
            return Const(GaussRational.of(self.digits()))
        if c.isalpha() or c == "_":
            name, start = self.ident()
            if name in ("a", "t"):
                return Var(name)
            if name == "i":
                return Const(GR_I)
            if name in ("sqrt", "cbrt"):
                self.take("(")
                e = self.expr()
                self.take(")")
                return sqrt(e) if name == "sqrt" else cbrt(e)
            raise UnknownIdentifier(name, start)
        self.error("expected a number, variable, or '('")
        raise AssertionError  # unreachable


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Canonical printer.  parse(to_text(e)) == e for every parser-produced tree.

_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _const_text(c: GaussRational) -> tuple[str, int]:
    if c.im == 0:
        q = c.re
        if q.denominator == 1:
            if q >= 0:
                return str(q), _PREC_ATOM
            return f"-{-q}", _PREC_ADD  # prints as a negation
        s = f"{abs(q.numerator)}/{q.denominator}"
        return (s, _PREC_MUL) if q >= 0 else (f"-{s}", _PREC_ADD)
    if c.re == 0 and c.im == 1:
        return "i", _PREC_ATOM
    # general Gaussian constant: spell it out as arithmetic on i
    re_s = "" if c.re == 0 else _const_text(GaussRational(c.re))[0]
    im_part = f"{_const_text(GaussRational(abs(c.im)))[0]}*i" if abs(c.im) != 1 else "i"
    if c.re == 0:
        return (f"-{im_part}", _PREC_ADD) if c.im < 0 else (im_part, _PREC_MUL)
    op = "-" if c.im < 0 else "+"
    return f"{re_s} {op} {im_part}", _PREC_ADD


def _render(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Var):
        return e.name, _PREC_ATOM
    if isinstance(e, Add):
        l = _wrap(e.left, _PREC_ADD)
        r = _wrap(e.right, _PREC_MUL)
        return f"{l} + {r}", _PREC_ADD
    if isinstance(e, Sub):
        l = _wrap(e.left, _PREC_ADD)
        r = _wrap(e.right, _PREC_MUL)
        return f"{l} - {r}", _PREC_ADD
    if isinstance(e, Mul):
        l = _wrap(e.left, _PREC_MUL)
        r = _wrap(e.right, _PREC_POW)
        return f"{l}*{r}", _PREC_MUL
    if isinstance(e, Div):
        l = _wrap(e.left, _PREC_MUL)
        r = _wrap(e.right, _PREC_POW)
        return f"{l}/{r}", _PREC_MUL
    if isinstance(e, Neg):
        body = _wrap(e.operand, _PREC_MUL)
        return f"-{body}", _PREC_ADD
    if isinstance(e, Pow):
        b = _wrap(e.base, _PREC_ATOM)
        q = e.exponent
        if q == Fraction(1, 2):
            inner, _ = _render(e.base)
            return f"sqrt({inner})", _PREC_ATOM
        if q == Fraction(1, 3):
            inner, _ = _render(e.base)
            return f"cbrt({inner})", _PREC_ATOM
        if q.denominator == 1 and q >= 0:
            return f"{b}^{q.numerator}", _PREC_POW
        if q.denominator == 1:
            return f"{b}^({q.numerator})", _PREC_POW
        return f"{b}^({q.numerator}/{q.denominator})", _PREC_POW
    raise TypeError(f"not an expression node: {e!r}")


def _wrap(e: Expr, min_prec: int) -> str:
    s, p = _render(e)
    return s if p >= min_prec else f"({s})"


def to_text(e: Expr) -> str:
    return _render(e)[0]


# ---------------------------------------------------------------------------
# Lowering to RatFun


@dataclass(frozen=True)
class NotRational:
    """Returned (not raised) when an expression leaves Q(i)(a,t)."""

    subtree: str
    reason: str

    def __bool__(self):  # pragma: no cover - guard against truthiness misuse
        raise TypeError("check isinstance(x, NotRational), not truthiness")


def _fold_pow(base: Expr, expo: Fraction) -> tuple[Expr, Fraction]:
    """Collapse nested powers syntactically: (x^n)^q -> x^(n q)."""
    while isinstance(base, Pow):
        expo = expo * base.exponent
        base = base.base
    return base, expo


def lower(e: Expr) -> RatFun | NotRational:
    """Exact image in Q(i)(a,t), or NotRational if a fractional power
    survives exponent folding."""
    if isinstance(e, Const):
        return RatFun.const(e.value)
    if isinstance(e, Var):
        return RatFun.var(e.name)
    if isinstance(e, (Add, Sub, Mul, Div)):
        l = lower(e.left)
        if isinstance(l, NotRational):
            return l
        r = lower(e.right)
        if isinstance(r, NotRational):
            return r
        if isinstance(e, Add):
            return l + r
        if isinstance(e, Sub):
            return l - r
        if isinstance(e, Mul):
            return l * r
        if r.is_zero:
            raise DivideByZero(f"division by the zero function in {to_text(e)}")
        return l / r
    if isinstance(e, Neg):
        v = lower(e.operand)
        return v if isinstance(v, NotRational) else -v
    if isinstance(e, Pow):
        base, expo = _fold_pow(e.base, e.exponent)
        if expo.denominator != 1:
            return NotRational(to_text(e), f"fractional exponent {expo}")
        b = lower(base)
        if isinstance(b, NotRational):
            return b
        n = int(expo)
        if n < 0 and b.is_zero:
            raise DivideByZero(f"zero base with negative exponent in {to_text(e)}")
        return b ** n
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Numeric evaluation (principal branches)


def _to_mp(x):
    if isinstance(x, GaussRational):
        return x.to_mpc()
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, (int, float, complex)):
        return mpmath.mpmathify(x)
    return x  # assume mpmath type


def eval_numeric(e: Expr, ctx: NumericContext):
    """Evaluate at (ctx.a_value, ctx.t_value) with ctx.precision digits."""
    with mpmath.workdps(ctx.precision):
        a_val = _to_mp(ctx.a_value)
        t_val = _to_mp(ctx.t_value)

        def ev(node: Expr):
            if isinstance(node, Const):
                return node.value.to_mpc()
            if isinstance(node, Var):
                return a_val if node.name == "a" else t_val
            if isinstance(node, Add):
                return ev(node.left) + ev(node.right)
            if isinstance(node, Sub):
                return ev(node.left) - ev(node.right)
            if isinstance(node, Mul):
                return ev(node.left) * ev(node.right)
            if isinstance(node, Div):
                bot = ev(node.right)
                if bot == 0:
                    raise DivideByZeroAtPoint(to_text(node.right))
                return ev(node.left) / bot
            if isinstance(node, Neg):
                return -ev(node.operand)
            if isinstance(node, Pow):
                b = ev(node.base)
                q = node.exponent
                if b == 0:
                    if q < 0:
                        raise DivideByZeroAtPoint(to_text(node))
                    return mpmath.mpf(0) if q > 0 else mpmath.mpf(1)
                if q.denominator == 1:
                    return b ** int(q)
                # odd roots of negative reals stay real (matches the
                # real-algebraic reading of radical witnesses); everything
                # else takes the principal branch
                if mpmath.im(b) == 0 and mpmath.re(b) < 0 and q.denominator % 2 == 1:
                    mag = mpmath.power(-mpmath.re(b),
                                       mpmath.mpf(q.numerator) / q.denominator)
                    return mag if q.numerator % 2 == 0 else -mag
                return mpmath.power(b, mpmath.mpf(q.numerator) / q.denominator)
            raise TypeError(f"not an expression node: {node!r}")

        return ev(e)


# ---------------------------------------------------------------------------
# Reparametrization t -> t^m


def uses_name(e: Expr, name: str) -> bool:
    """True if the variable appears anywhere in the expression."""
    if isinstance(e, Var):
        return e.name == name
    if isinstance(e, Const):
        return False
    if isinstance(e, (Add, Sub, Mul, Div)):
        return uses_name(e.left, name) or uses_name(e.right, name)
    if isinstance(e, Neg):
        return uses_name(e.operand, name)
    if isinstance(e, Pow):
        return uses_name(e.base, name)
    raise TypeError(f"not an expression node: {e!r}")


def has_fractional_power(e: Expr) -> bool:
    """True if any exponent in the expression is non-integer."""
    if isinstance(e, (Const, Var)):
        return False
    if isinstance(e, (Add, Sub, Mul, Div)):
        return has_fractional_power(e.left) or has_fractional_power(e.right)
    if isinstance(e, Neg):
        return has_fractional_power(e.operand)
    if isinstance(e, Pow):
        return e.exponent.denominator != 1 or has_fractional_power(e.base)
    raise TypeError(f"not an expression node: {e!r}")


def reparametrize(e: Expr, m: int) -> Expr:
    """Substitute t := t^m (m >= 1).  Composing witnesses with this clears
    radicals such as sqrt(t) when m is a multiple of the root order."""
    if m < 1:
        raise ValueError("reparametrization exponent must be >= 1")
    if m == 1:
        return e
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return Pow(e, Fraction(m)) if e.name == "t" else e
    if isinstance(e, Add):
        return Add(reparametrize(e.left, m), reparametrize(e.right, m))
    if isinstance(e, Sub):
        return Sub(reparametrize(e.left, m), reparametrize(e.right, m))
    if isinstance(e, Mul):
        return Mul(reparametrize(e.left, m), reparametrize(e.right, m))
    if isinstance(e, Div):
        return Div(reparametrize(e.left, m), reparametrize(e.right, m))
    if isinstance(e, Neg):
        return Neg(reparametrize(e.operand, m))
    if isinstance(e, Pow):
        return Pow(reparametrize(e.base, m), e.exponent)
    raise TypeError(f"not an expression node: {e!r}")

# ---------------------------------------------------------------------------
# Linear combinations of named atoms.  Data files write vectors and cocycles
# as sums of terms, each term an optional coefficient times a single atom:
#
#     2*e1 - a*e3            (atom prefix "e")
#     s12 + 2*k13            (atom prefixes "s", "k")
#     (t^2/(8*a^2))*e1       (any expression as coefficient)
#
# Splitting happens at parenthesis depth 0, so '/' and '-' inside a
# parenthesized coefficient never confuse it.

_ATOM_RE = re.compile(r"([A-Za-z]+)([0-9]+)\Z")


class LincombSyntaxError(ExprSyntaxError):
    pass


def _split_depth0(text: str, seps: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise LincombSyntaxError("unbalanced ')'", k)
        elif depth == 0 and ch in seps:
            parts.append(text[start:k])
            start = k + 1
    if depth != 0:
        raise LincombSyntaxError("unbalanced '('", len(text))
    parts.append(text[start:])
    return parts


def parse_lincomb(text: str, prefixes: tuple[str, ...] = ("e",)) -> list[tuple[str, Expr]]:
    """Parse a sum of coefficient*atom terms into (atom, coefficient) pairs.

    Atoms are identifiers made of one of the given letter prefixes followed
    by digits (e1, s12, k23, ...).  Each term must contain exactly one atom
    as a bare top-level factor; everything else in the term multiplies into
    the coefficient.  The literal "0" gives the empty list.
    """
    s = text.strip()
    if s == "0":
        return []
    if not s:
        raise LincombSyntaxError("empty linear combination", 0)
    # carve into signed terms
    terms: list[tuple[int, str]] = []
    depth = 0
    sign, start = 1, 0
    k = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        start = k = 1
    while k < len(s):
        ch = s[k]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and k > start:
            terms.append((sign, s[start:k]))
            sign = -1 if ch == "-" else 1
            start = k + 1
        k += 1
    terms.append((sign, s[start:]))

    out: list[tuple[str, Expr]] = []
    for sign, term in terms:
        term = term.strip()
        if not term:
            raise LincombSyntaxError(f"empty term in {text!r}", 0)
        factors = [f.strip() for f in _split_depth0(term, "*")]
        atom = None
        coef_parts = []
        for f in factors:
            m = _ATOM_RE.match(f)
            if m and m.group(1) in prefixes:
                if atom is not None:
                    raise LincombSyntaxError(
                        f"two atoms in one term: {term!r}", 0)
                atom = f
            else:
                coef_parts.append(f)
        if atom is None:
            raise LincombSyntaxError(f"no atom in term {term!r}", 0)
        if coef_parts:
            coef = parse("*".join(coef_parts))
        else:
            coef = Const(GR_ONE)
        if sign < 0:
            coef = Neg(coef)
        out.append((atom, coef))
    return out


def atom_index(atom: str) -> int:
    """Digits of an atom name as an int: atom_index('e12') == 12."""
    m = _ATOM_RE.match(atom)
    if not m:
        raise ValueError(f"not an atom: {atom!r}")
    return int(m.group(2))
