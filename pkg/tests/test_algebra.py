"""Structure-constant core: identity checks, polarization, subspaces."""
from __future__ import annotations

from fractions import Fraction

import pytest

from cpalib.algebra import (
    AlgebraPair,
    SingleAlgebra,
    annihilator,
    bracket_nilpotency,
    check_AB,
    check_cpa,
    check_derived_identities,
    depolarize,
    derived_identity_violations,
    derived_space,
    dot_nilpotency,
    nilpotency,
    perfectness_checks,
    polarize,
    square_bracket,
    square_dot,
    Subspace,
)
from cpalib.field import RatFun, rf

A = RatFun.var("a")

E1, E2, E3 = [1, 0, 0], [0, 1, 0], [0, 0, 1]


def pair_P01():
    # e1e1=e1; {e2,e3}=e2
    return AlgebraPair.from_tables(3, {(1, 1): E1}, {(2, 3): E2}, label="P01")


def pair_nil3(alpha=A):
    # e1e1=e2, e1e2=alpha*e3; {e1,e2}=e3
    return AlgebraPair.from_tables(
        3,
        {(1, 1): E2, (1, 2): [0, 0, alpha]},
        {(1, 2): E3},
        label="nil3",
    )


def test_check_cpa_passes_on_good_pairs():
    assert check_cpa(pair_P01()).passed
    assert check_cpa(pair_nil3()).passed
    assert check_cpa(pair_nil3(Fraction(0))).passed
    assert check_cpa(AlgebraPair.abelian(4)).passed


def test_check_cpa_catches_broken_antisymmetry():
    P = pair_P01()
    # flip only the (3,2) slot so the table is no longer antisymmetric
    P.bracket[2][1] = [rf(0), rf(1), rf(0)]
    rep = check_cpa(P)
    assert not rep.passed
    assert "anticommutativity" in rep.failed_identities()


def test_check_cpa_catches_broken_mixed_identity():
    # dot e1e1=e1 with bracket {e1,e2}=e2 violates identity II
    P = AlgebraPair.from_tables(2, {(1, 1): [1, 0]}, {(1, 2): [0, 1]})
    rep = check_cpa(P)
    assert not rep.passed
    assert "mixed-identity-II" in rep.failed_identities()


def test_derived_identities_hold_on_examples():
    for P in (pair_P01(), pair_nil3(), AlgebraPair.abelian(3)):
        assert check_derived_identities(P).passed


def test_medial_violation_witness():
    """Brute-force-found 2-dim commutative witness: e1e1=e2, e1e2=e1."""
    J = AlgebraPair.from_tables(2, {(1, 1): [0, 1], (1, 2): [1, 0]}, {})
    assert not check_cpa(J).passed  # not a valid pair, as expected
    rep = derived_identity_violations(J)
    med = [v for v in rep.violations if v.identity == "medial"]
    assert med, "medial violation must be detected"
    assert any(v.indices == (0, 0, 1, 1) for v in med)
    with pytest.raises(AssertionError):
        check_derived_identities(J)


def single_QAB():
    return SingleAlgebra.from_entries(
        2, {(1, 1): [1, 0], (1, 2): [0, 1], (2, 1): [0, -1]}, label="QAB"
    )


def single_QBA():
    return SingleAlgebra.from_entries(2, {(1, 1): [1, 0], (1, 2): [0, 2]}, label="QBA")


def test_AB_separation():
    rep = check_AB(single_QAB())
    assert "identity-A" not in rep.failed_identities()
    assert "identity-B" in rep.failed_identities()
    rep = check_AB(single_QBA())
    assert "identity-B" not in rep.failed_identities()
    assert "identity-A" in rep.failed_identities()


def test_depolarize_of_witnesses_is_not_a_valid_pair():
    for S in (single_QAB(), single_QBA()):
        assert not check_cpa(depolarize(S)).passed


def test_polarize_depolarize_roundtrip():
    P = pair_nil3()
    Q = depolarize(polarize(P))
    for i in range(3):
        for j in range(3):
            assert P.dot[i][j] == Q.dot[i][j]
            assert P.bracket[i][j] == Q.bracket[i][j]


def test_combined_product_satisfies_AB():
    for P in (pair_P01(), pair_nil3()):
        rep = check_AB(polarize(P))
        assert rep.passed


def test_annihilator():
    assert annihilator(pair_P01()).dim == 0
    ann = annihilator(pair_nil3())
    assert ann.dim == 1
    assert ann.contains([rf(0), rf(0), rf(1)])


def test_annihilator_in_kernel_of_left_multiplications():
    P = pair_nil3()
    ann = annihilator(P)
    for v in ann.basis():
        for k in range(P.n):
            assert all(x.is_zero for x in P.product(v, P.basis_vector(k)))
            assert all(x.is_zero for x in P.bracket_of(v, P.basis_vector(k)))


def test_squares_and_derived():
    P = pair_nil3()
    assert square_dot(P).dim == 2  # <e2, e3> generically
    assert square_bracket(P).dim == 1
    assert derived_space(P).dim == 2
    # at alpha = 0 the dot square drops
    P0 = pair_nil3(Fraction(0))
    assert square_dot(P0).dim == 1


def test_nilpotency():
    assert nilpotency(pair_nil3()) == (True, 3)
    ok, cls = nilpotency(pair_P01())
    assert not ok and cls is None
    assert nilpotency(AlgebraPair.abelian(2)) == (True, 1)


def test_single_product_nilpotency():
    # dot nilpotent but bracket not: zero dot with sl2 bracket
    sl2 = AlgebraPair.from_tables(
        3, {}, {(1, 2): E3, (1, 3): [-2, 0, 0], (2, 3): [0, 2, 0]}, label="sl2"
    )
    assert check_cpa(sl2).passed
    assert dot_nilpotency(sl2) == (True, 1)
    ok, _ = bracket_nilpotency(sl2)
    assert not ok


def test_perfectness():
    sl2 = AlgebraPair.from_tables(
        3, {}, {(1, 2): E3, (1, 3): [-2, 0, 0], (2, 3): [0, 2, 0]}
    )
    rep = perfectness_checks(sl2)
    assert rep.bracket_perfect and not rep.dot_perfect and rep.consistent
    T1 = AlgebraPair.from_tables(3, {(1, 1): E1, (2, 2): E2, (3, 3): E3}, {})
    rep = perfectness_checks(T1)
    assert rep.dot_perfect and not rep.bracket_perfect and rep.consistent


def test_subspace_operations():
    U = Subspace(3, [[rf(1), rf(0), rf(0)], [rf(0), rf(1), rf(0)]])
    W = Subspace(3, [[rf(0), rf(1), rf(1)]])
    assert U.dim == 2 and W.dim == 1
    assert U.sum_with(W).dim == 3
    X = U.intersect(Subspace(3, [[rf(0), rf(1), rf(0)], [rf(0), rf(0), rf(1)]]))
    assert X.dim == 1
    assert X.contains([rf(0), rf(1), rf(0)])


def test_parametric_residual_must_vanish_identically():
    """A residual that is a nonzero rational function fails even though it
    vanishes at special parameter values."""
    # bracket {e1,e2} = a*e2 on dot e1e1=e1 violates identity II unless a=0
    P = AlgebraPair.from_tables(2, {(1, 1): [1, 0]}, {(1, 2): [0, A]})
    assert not check_cpa(P).passed
    assert check_cpa(P.subs_a(0)).passed
