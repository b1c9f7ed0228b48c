"""Named algebra catalog, loaded from .alg data files.

Each file holds one multiplication table:

    algebra P02
    family pair3
    dim 3
    params a
    e1*e1 = e2
    [e1,e2] = e2 + e3
    [e1,e3] = a*e2
    end

Optional lines: `params a` (the entry is a one-parameter family),
`constraint a != <q>` (excluded parameter value), `single` (one bilinear
product with no symmetry; stored entries are taken verbatim).  Unlisted
products are zero; the dot table is completed by symmetry and the bracket
table by antisymmetry, so bracket lines must have i < j.  Lines starting
with '#' are comments.

Files live in the package's data/catalog directory; the CPA_CATALOG_DIR
environment variable points loads somewhere else (used by tests and by the
CLI for user-supplied tables).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import expr
from .algebra import AlgebraPair, SingleAlgebra
from .field import RatFun


class CatalogError(Exception):
    pass


class UnknownLabel(CatalogError):
    def __init__(self, label: str):
        super().__init__(f"no catalog entry named {label!r}")
        self.label = label


class ConstraintViolation(CatalogError):
    def __init__(self, label: str, message: str):
        super().__init__(f"{label}: {message}")
        self.label = label


class CatalogFormatError(CatalogError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    family: str
    dim: int
    has_param: bool
    constraint: Fraction | None  # excluded value of the parameter, if any
    single: bool
    path: Path


def catalog_dir() -> Path:
    override = os.environ.get("CPA_CATALOG_DIR")
    if override:
        return Path(override)
    return Path(str(resources.files(__package__) / "data" / "catalog"))


# ---------------------------------------------------------------------------
# Parsing


def _parse_product_key(lhs: str, path, lineno: int) -> tuple[str, int, int]:
    """'e1*e2' -> ('dot', 1, 2);  '[e1,e3]' -> ('bracket', 1, 3)."""
    s = lhs.replace(" ", "")
    if s.startswith("[") and s.endswith("]"):
        inner = s[1:-1].split(",")
        if len(inner) != 2:
            raise CatalogFormatError(path, lineno, f"bad bracket product {lhs!r}")
        kind = "bracket"
        parts = inner
    else:
        parts = s.split("*")
        if len(parts) != 2:
            raise CatalogFormatError(path, lineno, f"bad product {lhs!r}")
        kind = "dot"
    idx = []
    for p in parts:
        if not (len(p) >= 2 and p[0] == "e" and p[1:].isdigit()):
            raise CatalogFormatError(path, lineno, f"bad basis vector {p!r}")
        idx.append(int(p[1:]))
    return kind, idx[0], idx[1]


def _lower_vector(rhs: str, dim: int, allow_param: bool, path, lineno: int) -> list[RatFun]:
    try:
        pairs = expr.parse_lincomb(rhs, prefixes=("e",))
    except expr.ExprSyntaxError as exc:
        raise CatalogFormatError(path, lineno, str(exc)) from exc
    vec = [RatFun.zero() for _ in range(dim)]
    for atom, coef_ast in pairs:
        k = expr.atom_index(atom)
        if not 1 <= k <= dim:
            raise CatalogFormatError(path, lineno, f"basis index out of range: {atom}")
        coef = expr.lower(coef_ast)
        if isinstance(coef, expr.NotRational):
            raise CatalogFormatError(path, lineno, f"non-rational coefficient in {rhs!r}")
        if coef.num.uses_t() or coef.den.uses_t():
            raise CatalogFormatError(path, lineno, "catalog coefficients cannot use t")
        if (coef.num.uses_a() or coef.den.uses_a()) and not allow_param:
            raise CatalogFormatError(path, lineno, "parameter a used without a 'params a' line")
        vec[k - 1] = vec[k - 1] + coef
    return vec


@dataclass
class _Parsed:
    entry: CatalogEntry
    dot: dict       # {(i,j): [RatFun]}
    bracket: dict


def parse_alg_text(text: str, path="<string>") -> _Parsed:
    label = family = None
    dim = None
    has_param = False
    constraint = None
    single = False
    dot: dict = {}
    bracket: dict = {}
    saw_end = False
    header_done = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if saw_end:
            raise CatalogFormatError(path, lineno, "content after 'end'")
        head, _, rest = line.partition(" ")
        if not header_done and head == "algebra":
            label = rest.strip()
            continue
        if not header_done and head == "family":
            family = rest.strip()
            continue
        if not header_done and head == "dim":
            dim = int(rest)
            continue
        if not header_done and head == "params":
            if rest.strip() != "a":
                raise CatalogFormatError(path, lineno, "only parameter 'a' is supported")
            has_param = True
            continue
        if not header_done and head == "single":
            single = True
            continue
        if not header_done and head == "constraint":
            parts = rest.replace(" ", "").split("!=")
            if len(parts) != 2 or parts[0] != "a":
                raise CatalogFormatError(path, lineno, f"bad constraint {rest!r}")
            constraint = Fraction(parts[1])
            continue
        if line == "end":
            saw_end = True
            continue
        # multiplication line
        header_done = True
        if label is None or dim is None or family is None:
            raise CatalogFormatError(path, lineno, "products before the header is complete")
        if "=" not in line:
            raise CatalogFormatError(path, lineno, f"expected '=' in {line!r}")
        lhs, rhs = line.split("=", 1)
        kind, i, j = _parse_product_key(lhs, path, lineno)
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise CatalogFormatError(path, lineno, "basis index out of range")
        vec = _lower_vector(rhs, dim, has_param, path, lineno)
        if kind == "bracket":
            if single:
                raise CatalogFormatError(path, lineno, "bracket line in a 'single' table")
            if i >= j:
                raise CatalogFormatError(path, lineno, "bracket entries must have i < j")
            if (i, j) in bracket:
                raise CatalogFormatError(path, lineno, f"duplicate bracket entry ({i},{j})")
            bracket[(i, j)] = vec
        else:
            key = (i, j) if single else (min(i, j), max(i, j))
            if key in dot:
                raise CatalogFormatError(path, lineno, f"duplicate product entry {key}")
            dot[key] = vec

    if label is None or family is None or dim is None:
        raise CatalogFormatError(path, 0, "missing algebra/family/dim header")
    if not saw_end:
        raise CatalogFormatError(path, 0, "missing 'end'")
    if constraint is not None and not has_param:
        raise CatalogFormatError(path, 0, "constraint without params")
    entry = CatalogEntry(label, family, dim, has_param, constraint, single,
                         Path(str(path)))
    return _Parsed(entry, dot, bracket)


# ---------------------------------------------------------------------------
# Directory scan (cached per directory)

_CACHE: dict[str, dict[str, _Parsed]] = {}


def _scan(directory: Path) -> dict[str, _Parsed]:
    key = str(directory)
    if key in _CACHE:
        return _CACHE[key]
    table: dict[str, _Parsed] = {}
    if not directory.is_dir():
        raise CatalogError(f"catalog directory not found: {directory}")
    for p in sorted(directory.glob("*.alg")):
        parsed = parse_alg_text(p.read_text(), path=p)
        lbl = parsed.entry.label
        if lbl != p.stem:
            raise CatalogFormatError(p, 0, f"label {lbl!r} does not match file name")
        if lbl in table:
            raise CatalogFormatError(p, 0, f"duplicate label {lbl!r}")
        table[lbl] = parsed
    _CACHE[key] = table
    return table


def clear_cache() -> None:
    _CACHE.clear()


def entries(family: str | None = None, dim: int | None = None) -> list[CatalogEntry]:
    """All catalog entries, filtered and sorted by label."""
    table = _scan(catalog_dir())
    out = [p.entry for p in table.values()]
    if family is not None:
        out = [e for e in out if e.family == family]
    if dim is not None:
        out = [e for e in out if e.dim == dim]
    return sorted(out, key=lambda e: e.label)


def families() -> list[str]:
    return sorted({e.family for e in entries()})


def load(label: str, a=None):
    """Load a catalog table as AlgebraPair (or SingleAlgebra for 'single'
    entries).  Parametric families load with symbolic a by default; pass
    a=<rational> to bind the parameter."""
    table = _scan(catalog_dir())
    if label not in table:
        raise UnknownLabel(label)
    parsed = table[label]
    ent = parsed.entry
    if ent.single:
        if a is not None:
            raise CatalogError(f"{label} takes no parameter")
        return SingleAlgebra.from_entries(ent.dim, parsed.dot, label=label)
    if a is not None and not ent.has_param:
        raise CatalogError(f"{label} takes no parameter")
    P = AlgebraPair.from_tables(ent.dim, parsed.dot, parsed.bracket, label=label)
    if a is not None:
        av = Fraction(a) if not isinstance(a, (RatFun, Fraction)) else a
        if ent.constraint is not None and av == ent.constraint:
            raise ConstraintViolation(label, f"parameter value a = {av} is excluded")
        P = P.subs_a(av)
        P.label = f"{label}(a={av})"
    return P


# ---------------------------------------------------------------------------
# Extension recipes: a base label plus cocycle lines in the s<ij>/k<ij> form
# syntax, one line per adjoined annihilator direction


@dataclass(frozen=True)
class ExtensionRecipe:
    target: str
    base: str
    binding: Fraction | None     # bound value for the base's parameter
    has_param: bool              # 'params a' declared for the coefficients
    cocycles: tuple[str, ...]    # raw linear-combination texts, in order
    path: Path | None = None


def extensions_dir() -> Path:
    return Path(str(resources.files(__package__) / "data" / "extensions"))


def parse_extension_text(text: str, path="<string>") -> ExtensionRecipe:
    target = base = None
    binding = None
    has_param = False
    cocycles: list[str] = []
    saw_end = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if saw_end:
            raise CatalogFormatError(path, lineno, "content after 'end'")
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "extension":
            target = rest
        elif head == "base":
            parts = rest.split()
            base = parts[0] if parts else ""
            if len(parts) == 2:
                bind = parts[1].replace(" ", "")
                if not bind.startswith("a="):
                    raise CatalogFormatError(path, lineno, f"bad base binding {parts[1]!r}")
                binding = Fraction(bind[2:])
            elif len(parts) > 2:
                raise CatalogFormatError(path, lineno, f"bad base line {rest!r}")
        elif head == "params":
            if rest != "a":
                raise CatalogFormatError(path, lineno, "only parameter 'a' is supported")
            has_param = True
        elif head == "cocycle":
            if not rest:
                raise CatalogFormatError(path, lineno, "empty cocycle line")
            cocycles.append(rest)
        elif line == "end":
            saw_end = True
        else:
            raise CatalogFormatError(path, lineno, f"unrecognized line {line!r}")
    if not target or not base:
        raise CatalogFormatError(path, 0, "missing extension/base header")
    if not cocycles:
        raise CatalogFormatError(path, 0, "no cocycle lines")
    if not saw_end:
        raise CatalogFormatError(path, 0, "missing 'end'")
    return ExtensionRecipe(target, base, binding, has_param, tuple(cocycles),
                           Path(str(path)))


def extension_recipes() -> list[ExtensionRecipe]:
    out = []
    d = extensions_dir()
    if not d.is_dir():
        raise CatalogError(f"extensions directory not found: {d}")
    for p in sorted(d.glob("*.ext")):
        r = parse_extension_text(p.read_text(), path=p)
        if r.target != p.stem:
            raise CatalogFormatError(p, 0, f"target {r.target!r} does not match file name")
        out.append(r)
    return out


def extension_recipe(target: str) -> ExtensionRecipe:
    for r in extension_recipes():
        if r.target == target:
            return r
    raise UnknownLabel(target)


def build_extension(recipe: "ExtensionRecipe | str", a=None) -> AlgebraPair:
    """Run the annihilator-extension construction for a recipe.  Parametric
    recipes build symbolically unless a binds the parameter; raises
    NotACocycle (from cohom.extend) when the recorded pair fails the
    cocycle conditions."""
    from .cohom import cocycle_from_spec, extend

    if isinstance(recipe, str):
        recipe = extension_recipe(recipe)
    if a is not None and not recipe.has_param:
        raise CatalogError(f"{recipe.target} takes no parameter")
    ent = next((e for e in entries() if e.label == recipe.base), None)
    if ent is None:
        raise UnknownLabel(recipe.base)
    if recipe.binding is not None:
        base = load(recipe.base, a=recipe.binding)
    elif ent.has_param and recipe.has_param:
        base = load(recipe.base, a=a)
    else:
        base = load(recipe.base)
    pairs = [cocycle_from_spec(base, txt, allow_param=recipe.has_param)
             for txt in recipe.cocycles]
    if a is not None:
        av = Fraction(a) if not isinstance(a, Fraction) else a
        from .cohom import BiFormScalar, CocyclePair
        pairs = [
            CocyclePair(
                BiFormScalar(base.n, c.theta.mat.subs(a=av), "symmetric"),
                BiFormScalar(base.n, c.vartheta.mat.subs(a=av), "antisymmetric"),
                base,
            )
            for c in pairs
        ]
        label = f"{recipe.target}(a={av})"
    else:
        label = recipe.target
    return extend(base, pairs, label=label)
