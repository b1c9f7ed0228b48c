"""Exact-arithmetic toolkit for algebras carrying a commutative product and a
Lie bracket tied together by two mixed identities.

Subpackages work over the exact field Q(i)(a,t): `field` has the arithmetic
and linear algebra, `expr` the little expression language used by data files,
`algebra` the structure-constant core, `invariants` the numeric invariants,
`cohom` the cocycle/extension machinery, `degen` the degeneration witnesses,
`catalog` the bundled algebra files, and `cli` the `cpa` command.
"""

__version__ = "0.1.0"
