"""Scalar cocycles, one-dimensional extensions, and compatible-product spaces."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cpalib.algebra import AlgebraPair, Subspace, annihilator, check_cpa
from cpalib.catalog import entries, load
from cpalib.cohom import (
    AlgValuedBiForm,
    BiFormScalar,
    CocyclePair,
    ExtensionError,
    NotACocycle,
    NotAnAutomorphism,
    aut_action_fixed_dot,
    b22_basis,
    bracket_form,
    cocycle_from_vector,
    cocycle_matrix_action,
    cocycle_to_vector,
    compatible_dots_linear,
    delta,
    extend,
    h22_dim,
    has_annihilator_component,
    jacobi_check,
    nabla,
    no_nonzero_compatible_bracket,
    no_nonzero_compatible_dot,
    pair_with_bracket,
    rad,
    z2_fixed_dot_linear,
    z22_basis,
)
from cpalib.field import Matrix, RatFun, rf
from cpalib.invariants import swap_matrix

A = RatFun.var("a")


def _pair(P: AlgebraPair, sym=None, skew=None) -> CocyclePair:
    theta = sym if sym is not None else BiFormScalar.zero(P.n, "symmetric")
    vartheta = skew if skew is not None else BiFormScalar.zero(P.n, "antisymmetric")
    return CocyclePair(theta, vartheta, P)


def _vec_diff(c1: CocyclePair, c2: CocyclePair):
    return [x - y for x, y in zip(cocycle_to_vector(c1), cocycle_to_vector(c2))]


def _same_tables(P: AlgebraPair, Q: AlgebraPair) -> bool:
    return P.n == Q.n and P.dot == Q.dot and P.bracket == Q.bracket


def _coboundary_span(P: AlgebraPair) -> Subspace:
    width = len(cocycle_to_vector(_pair(P)))
    return Subspace(width, [cocycle_to_vector(c) for c in b22_basis(P)])


# ---------------------------------------------------------------------------
# scalar bilinear form builders


def test_nabla_is_symmetric_entry():
    f = nabla(3, 1, 2)
    assert f.apply([rf(1), rf(0), rf(0)], [rf(0), rf(1), rf(0)]) == rf(1)
    assert f.apply([rf(0), rf(1), rf(0)], [rf(1), rf(0), rf(0)]) == rf(1)
    assert f.apply([rf(1), rf(0), rf(0)], [rf(1), rf(0), rf(0)]) == rf(0)
    assert str(f) == "(1)*n12"


def test_nabla_diagonal_and_coeff():
    f = nabla(2, 1, 1, coeff=Fraction(3, 2))
    assert f.apply([rf(1), rf(0)], [rf(1), rf(0)]) == rf(Fraction(3, 2))
    assert not f.is_zero


def test_delta_is_antisymmetric_entry():
    g = delta(3, 1, 3)
    e1 = [rf(1), rf(0), rf(0)]
    e3 = [rf(0), rf(0), rf(1)]
    assert g.apply(e1, e3) == rf(1)
    assert g.apply(e3, e1) == rf(-1)
    assert g.apply(e1, e1) == rf(0)


def test_delta_rejects_equal_indices():
    with pytest.raises(ValueError):
        delta(3, 2, 2)


def test_form_arithmetic():
    f = nabla(2, 1, 1).plus(nabla(2, 1, 2, coeff=2)).scaled(3)
    e1 = [rf(1), rf(0)]
    e2 = [rf(0), rf(1)]
    assert f.apply(e1, e1) == rf(3)
    assert f.apply(e1, e2) == rf(6)
    assert nabla(2, 1, 1).scaled(0).is_zero


def test_biform_validates_symmetry_class():
    bad = Matrix([[rf(0), rf(1)], [rf(0), rf(0)]])
    with pytest.raises(ValueError):
        BiFormScalar(2, bad, "symmetric")
    with pytest.raises(ValueError):
        BiFormScalar(2, bad, "antisymmetric")


def test_cocycle_vector_roundtrip():
    P = load("bbP2")
    c = _pair(P, sym=nabla(3, 1, 3, coeff=5).plus(nabla(3, 2, 2, coeff=-7)),
              skew=delta(3, 1, 2, coeff=Fraction(1, 3)))
    v = cocycle_to_vector(c)
    assert len(v) == 6 + 3
    c2 = cocycle_from_vector(P, v)
    assert _vec_diff(c, c2) == [rf(0)] * 9


# ---------------------------------------------------------------------------
# cocycle and coboundary spaces on the catalog of small examples

# (label, parameter, expected (dim Z, dim B, dim H), dim annihilator)
COHOM_TABLE = [
    ("boldP1", None, (4, 0, 4), 2),
    ("boldP2", None, (3, 1, 2), 1),
    ("bbP1", Fraction(0), (6, 1, 5), 1),
    ("bbP1", "generic", (4, 1, 3), 1),
    ("bbP2", None, (5, 1, 4), 1),
    ("bbP3", "generic", (4, 2, 2), 1),
    ("bbP4", None, (9, 0, 9), 3),
    ("bbP5", None, (6, 1, 5), 2),
    ("bbP6", None, (4, 1, 3), 1),
    ("bbP7", None, (4, 2, 2), 1),
]


@pytest.mark.parametrize("label,av,dims,ann", COHOM_TABLE,
                         ids=[f"{r[0]}-{r[1]}" for r in COHOM_TABLE])
def test_cohomology_dimensions(label, av, dims, ann):
    if av is None or av == "generic":
        P = load(label)
    else:
        P = load(label, a=av)
    Z = z22_basis(P)
    B = b22_basis(P)
    assert (len(Z), len(B), h22_dim(P)) == dims
    assert annihilator(P).dim == ann
    for c in Z:
        assert c.is_cocycle()
    zspan = Subspace(len(cocycle_to_vector(_pair(P))),
                     [cocycle_to_vector(c) for c in Z])
    for c in B:
        assert zspan.contains(cocycle_to_vector(c))


def test_cohomology_dimension_one_abelian():
    one = AlgebraPair.from_tables(1, label="ab1")
    assert len(z22_basis(one)) == 1
    assert len(b22_basis(one)) == 0
    assert h22_dim(one) == 1


def _zspan(P: AlgebraPair) -> Subspace:
    return Subspace(len(cocycle_to_vector(_pair(P))),
                    [cocycle_to_vector(c) for c in z22_basis(P)])


def test_two_dim_abelian_cocycles_are_everything():
    P = load("boldP1")
    gens = [
        _pair(P, sym=nabla(2, 1, 1)),
        _pair(P, sym=nabla(2, 1, 2)),
        _pair(P, sym=nabla(2, 2, 2)),
        _pair(P, skew=delta(2, 1, 2)),
    ]
    span = _zspan(P)
    for g in gens:
        assert span.contains(cocycle_to_vector(g))


def test_one_idempotent_direction_cocycles():
    # e1*e1 = e2: the square form n11 is a coboundary, n12 and D12 are not
    P = load("boldP2")
    z = _zspan(P)
    b = _coboundary_span(P)
    assert z.contains(cocycle_to_vector(_pair(P, sym=nabla(2, 1, 1))))
    assert z.contains(cocycle_to_vector(_pair(P, sym=nabla(2, 1, 2))))
    assert z.contains(cocycle_to_vector(_pair(P, skew=delta(2, 1, 2))))
    assert not z.contains(cocycle_to_vector(_pair(P, sym=nabla(2, 2, 2))))
    assert b.dim == 1
    assert b.contains(cocycle_to_vector(_pair(P, sym=nabla(2, 1, 1))))


def test_heisenberg_pair_cocycle_space():
    # e1*e2 = a e3, [e1,e2] = e3, generic a
    P = load("bbP1")
    z = _zspan(P)
    b = _coboundary_span(P)
    for g in [_pair(P, sym=nabla(3, 1, 1)),
              _pair(P, sym=nabla(3, 2, 2)),
              _pair(P, skew=delta(3, 1, 2)),
              _pair(P, sym=nabla(3, 1, 2, coeff=A), skew=delta(3, 1, 2))]:
        assert z.contains(cocycle_to_vector(g))
    assert b.contains(cocycle_to_vector(
        _pair(P, sym=nabla(3, 1, 2, coeff=A), skew=delta(3, 1, 2))))
    # forms pairing against the central direction e3 are excluded
    assert not z.contains(cocycle_to_vector(_pair(P, sym=nabla(3, 3, 3))))
    assert not z.contains(cocycle_to_vector(_pair(P, skew=delta(3, 1, 3))))


def test_nilpotent_bracket_pair_cocycle_space():
    # e2*e2 = e3, [e1,e2] = e3: five pure generators, nothing mixed
    P = load("bbP2")
    z = _zspan(P)
    assert z.dim == 5
    for g in [_pair(P, sym=nabla(3, 1, 1)),
              _pair(P, sym=nabla(3, 1, 2)),
              _pair(P, sym=nabla(3, 2, 2)),
              _pair(P, skew=delta(3, 1, 2)),
              _pair(P, skew=delta(3, 2, 3))]:
        assert z.contains(cocycle_to_vector(g))
    # the pair (n23, 2 D13) fails the bracket compatibility condition
    stray = _pair(P, sym=nabla(3, 2, 3), skew=delta(3, 1, 3, coeff=2))
    assert not z.contains(cocycle_to_vector(stray))
    assert stray.violations()[0][0] == "bracket-into-theta"
    assert not z.contains(cocycle_to_vector(_pair(P, skew=delta(3, 1, 3))))


def test_param_family_cocycle_generators():
    # e1*e1 = e2, e1*e2 = a e3, [e1,e2] = e3
    P = load("bbP3")
    z = _zspan(P)
    b = _coboundary_span(P)
    good = _pair(P, sym=nabla(3, 1, 3, coeff=A).plus(nabla(3, 2, 2, coeff=A * (A - rf(1)))),
                 skew=delta(3, 1, 3))
    assert z.contains(cocycle_to_vector(good))
    assert not b.contains(cocycle_to_vector(good))
    # swapping the two symmetric coefficients breaks the cocycle conditions
    swapped = _pair(P, sym=nabla(3, 1, 3, coeff=A * (A - rf(1))).plus(nabla(3, 2, 2, coeff=A)),
                    skew=delta(3, 1, 3))
    assert not z.contains(cocycle_to_vector(swapped))
    # coboundaries: differentials of the coordinate functionals e1*, e2*
    assert b.dim == 2
    assert b.contains(cocycle_to_vector(_pair(P, sym=nabla(3, 1, 1))))
    assert b.contains(cocycle_to_vector(
        _pair(P, sym=nabla(3, 1, 2, coeff=A), skew=delta(3, 1, 2))))


def test_cocycle_violation_locations():
    P = load("bbP2")
    stray = _pair(P, sym=nabla(3, 2, 3), skew=delta(3, 1, 3, coeff=2))
    assert stray.violations() == [
        ("bracket-into-theta", (0, 1, 1)),
        ("theta-vartheta-link", (1, 0, 1)),
    ]
    assert not stray.is_cocycle()


# ---------------------------------------------------------------------------
# radical of the symmetric part


def test_rad_of_degenerate_form():
    P = load("boldP1")
    c = _pair(P, sym=nabla(2, 1, 1))
    r = rad(c)
    assert r.dim == 1
    assert r.contains([rf(0), rf(1)])


def test_rad_of_full_rank_form():
    P = load("bbP1", a=0)
    c = _pair(P, sym=nabla(3, 1, 1).plus(nabla(3, 2, 2)), skew=delta(3, 1, 3))
    assert rad(c).dim == 0


def test_rad_of_list_is_intersection():
    P = load("bbP4")
    c1 = _pair(P, sym=nabla(3, 1, 1))
    c2 = _pair(P, sym=nabla(3, 2, 2))
    joint = rad([c1, c2])
    assert joint == rad(c1).intersect(rad(c2))
    assert joint.dim == 1
    assert joint.contains([rf(0), rf(0), rf(1)])


def test_rad_rejects_empty_list():
    with pytest.raises(ValueError):
        rad([])


# ---------------------------------------------------------------------------
# one-dimensional extensions


def test_extend_two_dim_abelian_by_two_cocycles():
    P = load("boldP1")
    c1 = _pair(P, sym=nabla(2, 1, 2, coeff=A), skew=delta(2, 1, 2))
    c2 = _pair(P, sym=nabla(2, 1, 1))
    E = extend(P, [c1, c2], label="E")
    T = load("Pfrak01")
    assert _same_tables(E, T)
    assert annihilator(E).dim == 2
    assert not check_cpa(E).violations
    assert E.label == "E"


def test_extend_three_dim_base_single_cocycle():
    P = load("bbP7")
    c = _pair(P, sym=nabla(3, 1, 3).plus(nabla(3, 2, 2)), skew=delta(3, 1, 2))
    E = extend(P, [c])
    assert _same_tables(E, load("Pfrak27"))
    assert annihilator(E).dim == 1
    assert not check_cpa(E).violations


def test_extend_default_label():
    P = load("boldP2")
    c = _pair(P, sym=nabla(2, 1, 2))
    E = extend(P, [c])
    assert E.label == "boldP2^(1)"
    E2 = extend(P, [c, _pair(P, skew=delta(2, 1, 2))])
    assert E2.label == "boldP2^(2)"


def test_extend_by_zero_cocycle_splits():
    P = load("bbP2")
    E = extend(P, [_pair(P)])
    assert E.n == 4
    # the new direction multiplies to zero against everything
    for i in range(4):
        assert E.dot[i][3] == [rf(0)] * 4
        assert E.bracket[i][3] == [rf(0)] * 4
    assert annihilator(E).dim == annihilator(P).dim + 1


def test_extend_rejects_non_cocycle():
    P = load("bbP2")
    bad = _pair(P, sym=nabla(3, 2, 3), skew=delta(3, 1, 3, coeff=2))
    with pytest.raises(NotACocycle) as exc:
        extend(P, [bad])
    assert str(exc.value) == (
        "entry 1: condition bracket-into-theta fails at basis triple (1, 2, 2)"
    )
    assert exc.value.location == (0, 1, 1)


def test_extend_rejects_non_cocycle_in_second_slot():
    P = load("bbP2")
    good = _pair(P, sym=nabla(3, 1, 1))
    bad = _pair(P, sym=nabla(3, 2, 3), skew=delta(3, 1, 3, coeff=2))
    with pytest.raises(NotACocycle) as exc:
        extend(P, [good, bad])
    assert str(exc.value).startswith("entry 2:")


def test_extend_base_mismatch():
    P = load("bbP2")
    Q = load("bbP4")
    c = _pair(Q, sym=nabla(3, 1, 1))
    with pytest.raises(ValueError):
        extend(P, [c])


# ---------------------------------------------------------------------------
# matrix action on scalar cocycles


def _two_dim_class(P, coeffs):
    a1, a2, a3, a4 = coeffs
    sym = nabla(2, 1, 1, coeff=a1).plus(nabla(2, 1, 2, coeff=a2)).plus(
        nabla(2, 2, 2, coeff=a3))
    return _pair(P, sym=sym, skew=delta(2, 1, 2, coeff=a4))


def test_action_by_identity():
    P = load("boldP2")
    c = _two_dim_class(P, (1, 2, 3, 4))
    eye = Matrix.identity(2)
    assert _vec_diff(cocycle_matrix_action(c, eye), c) == [rf(0)] * 4


def test_action_on_two_dim_abelian_instance():
    P = load("boldP1")
    phi = Matrix([[rf(2), rf(3)], [rf(5), rf(7)]])
    c = _two_dim_class(P, (1, -2, 3, 5))
    acted = cocycle_matrix_action(c, phi)
    expected = _two_dim_class(P, (39, 53, 72, -5))
    assert _vec_diff(acted, expected) == [rf(0)] * 4


def test_action_by_scaling():
    P = load("boldP1")
    d = Matrix([[rf(2), rf(0)], [rf(0), rf(1)]])
    acted = cocycle_matrix_action(_pair(P, sym=nabla(2, 1, 1)), d)
    assert acted.theta.mat.rows[0][0] == rf(4)
    assert acted.theta.mat.rows[0][1] == rf(0)


def _aut_samples(rng, label, av=None):
    """Pairs (algebra, random automorphism) for bases with known Aut shapes."""
    P = load(label) if av is None else load(label, a=av)
    def nz():
        while True:
            v = rf(Fraction(rng.randint(-6, 6), rng.randint(1, 3)))
            if not v.is_zero:
                return v
    def any_():
        return rf(Fraction(rng.randint(-6, 6), rng.randint(1, 3)))
    if label == "boldP1":
        while True:
            phi = Matrix([[any_(), any_()], [any_(), any_()]])
            try:
                phi.invert()
                return P, phi
            except Exception:
                continue
    if label == "boldP2":
        x, y = nz(), any_()
        return P, Matrix([[x, rf(0)], [y, x * x]])
    if label == "bbP4":
        while True:
            phi = Matrix([[any_() for _ in range(3)] for _ in range(3)])
            try:
                phi.invert()
                return P, phi
            except Exception:
                continue
    if label == "bbP3":
        x, z, w = nz(), any_(), any_()
        return P, Matrix([[x, rf(0), rf(0)],
                          [z, x * x, rf(0)],
                          [w, rf(2) * x * z, x ** 3]])
    raise AssertionError(label)


def test_action_preserves_cocycles_randomized():
    rng = random.Random(20240815)
    cases = [("boldP1", None), ("boldP2", None), ("bbP4", None), ("bbP3", 1)]
    for label, av in cases:
        for _ in range(25):
            P, phi = _aut_samples(rng, label, av)
            z = z22_basis(P)
            coeffs = [rf(rng.randint(-4, 4)) for _ in z]
            vec = [rf(0)] * len(cocycle_to_vector(_pair(P)))
            for c, co in zip(z, coeffs):
                vec = [u + co * v for u, v in zip(vec, cocycle_to_vector(c))]
            c = cocycle_from_vector(P, vec)
            acted = cocycle_matrix_action(c, phi)
            assert acted.is_cocycle()
            # pullback definition: acted(x, y) = c(phi x, phi y)
            for i in range(P.n):
                for j in range(P.n):
                    x = [phi.rows[p][i] for p in range(P.n)]
                    y = [phi.rows[p][j] for p in range(P.n)]
                    ei = P.basis_vector(i)
                    ej = P.basis_vector(j)
                    assert acted.theta.apply(ei, ej) == c.theta.apply(x, y)
                    assert acted.vartheta.apply(ei, ej) == c.vartheta.apply(x, y)


def test_action_with_mixing_matrix():
    P = load("boldP1")
    c1 = _pair(P, sym=nabla(2, 1, 1))
    c2 = _pair(P, skew=delta(2, 1, 2))
    eye = Matrix.identity(2)
    mix = Matrix([[rf(0), rf(1)], [rf(1), rf(0)]])
    out = cocycle_matrix_action([c1, c2], eye, mix=mix)
    assert _vec_diff(out[0], c2) == [rf(0)] * 4
    assert _vec_diff(out[1], c1) == [rf(0)] * 4


def test_action_mix_shape_checked():
    P = load("boldP1")
    c = _pair(P, sym=nabla(2, 1, 1))
    with pytest.raises(ValueError):
        cocycle_matrix_action([c], Matrix.identity(2), mix=Matrix.identity(2))


def test_action_rejects_non_automorphism():
    P = load("boldP2")
    c = _pair(P, sym=nabla(2, 1, 2))
    # invertible but does not respect e1*e1 = e2
    phi = Matrix([[rf(1), rf(0)], [rf(0), rf(2)]])
    with pytest.raises(NotAnAutomorphism):
        cocycle_matrix_action(c, phi)
    with pytest.raises(NotAnAutomorphism):
        cocycle_matrix_action(c, Matrix([[rf(1), rf(1)], [rf(1), rf(1)]]))


def test_action_rejects_wrong_size():
    P = load("boldP2")
    c = _pair(P, sym=nabla(2, 1, 2))
    with pytest.raises(NotAnAutomorphism):
        cocycle_matrix_action(c, Matrix.identity(3))


# ---------------------------------------------------------------------------
# class action on the parametrized three-dimensional family

# Aut of (e1*e1 = e2, e1*e2 = a e3, [e1,e2] = e3) at a = 1 contains
# [[2,0,0],[3,4,0],[5,12,8]]; the class of 7*[C1] + 11*[C2] pulls back to
# 56*[C1] + 176*[C2].

def _family_class(P, av, c1, c2):
    sym = nabla(3, 1, 2, coeff=c1).plus(
        nabla(3, 1, 3, coeff=c2 * av)).plus(
        nabla(3, 2, 2, coeff=c2 * av * (av - rf(1))))
    return _pair(P, sym=sym, skew=delta(3, 1, 3, coeff=c2))


def test_family_action_numeric_instance():
    P = load("bbP3", a=1)
    G = _family_class(P, rf(1), rf(7), rf(11))
    phi = Matrix([[rf(2), rf(0), rf(0)],
                  [rf(3), rf(4), rf(0)],
                  [rf(5), rf(12), rf(8)]])
    acted = cocycle_matrix_action(G, phi)
    assert acted.is_cocycle()
    expected = _family_class(P, rf(1), rf(56), rf(176))
    diff = _vec_diff(acted, expected)
    assert any(not x.is_zero for x in diff)  # agreement is only mod coboundaries
    assert _coboundary_span(P).contains(diff)


def test_family_action_generic_parameter():
    P = load("bbP3")
    G = _family_class(P, A, rf(7), rf(11))
    phi = Matrix([[rf(2), rf(0), rf(0)],
                  [rf(3), rf(4), rf(0)],
                  [rf(5), A * rf(12), rf(8)]])
    acted = cocycle_matrix_action(G, phi)
    assert acted.is_cocycle()
    b = _coboundary_span(P)
    # x11^2 * (a1 x11 + a(a-1) a2 x21) = 4*(14 + 33 a(a-1)), a2 x11^4 = 176
    c1 = rf(4) * (rf(14) + rf(33) * A * (A - rf(1)))
    assert b.contains(_vec_diff(acted, _family_class(P, A, c1, rf(176))))
    # tripling the parameter-dependent part of the coefficient breaks it
    c1_wrong = rf(4) * (rf(14) + rf(99) * A * (A - rf(1)))
    assert not b.contains(_vec_diff(acted, _family_class(P, A, c1_wrong, rf(176))))


# ---------------------------------------------------------------------------
# annihilator components of extension data


def test_annihilator_component_detection():
    P = load("boldP2")
    independent = [_pair(P, sym=nabla(2, 1, 2)), _pair(P, skew=delta(2, 1, 2))]
    assert not has_annihilator_component(P, independent)
    only_coboundary = [_pair(P, sym=nabla(2, 1, 1))]
    assert has_annihilator_component(P, only_coboundary)
    duplicated = [independent[0], independent[0]]
    assert has_annihilator_component(P, duplicated)


# ---------------------------------------------------------------------------
# algebra-valued forms and bracket compatibility with a fixed product


def test_alg_form_entries_and_tables():
    th = AlgValuedBiForm.from_entries(3, {(2, 3): [rf(0), rf(1), rf(0)]})
    assert th.value(1, 2) == [rf(0), rf(1), rf(0)]
    assert th.value(2, 1) == [rf(0), rf(-1), rf(0)]
    assert th.value(0, 0) == [rf(0)] * 3
    assert not th.is_zero
    assert AlgValuedBiForm.zero(3).is_zero


def test_fixed_dot_solutions_small_catalog():
    # each case: label, binding, expected dimension, expected particular
    D = AlgValuedBiForm.from_entries
    cases = [
        ("J03", None, 2, AlgValuedBiForm.zero(3)),
        ("J05", None, 1, AlgValuedBiForm.zero(3)),
        ("J06", None, 1, AlgValuedBiForm.zero(3)),
        ("M04", Fraction(0), 1, D(3, {(1, 3): [rf(-1), rf(0), rf(0)]})),
        ("M05", None, 1, D(3, {(1, 3): [rf(-1), rf(0), rf(0)]})),
        ("M06", None, 0, D(3, {(1, 3): [rf(-1), rf(-1), rf(0)],
                               (2, 3): [rf(0), rf(-1), rf(0)]})),
        ("M07", None, 0, D(3, {(1, 3): [rf(-1), rf(0), rf(0)],
                               (2, 3): [rf(0), rf(-1), rf(0)]})),
        ("A03z", None, 0, D(3, {(2, 3): [rf(0), rf(-1), rf(0)]})),
    ]
    for label, av, dim, particular in cases:
        P = load(label) if av is None else load(label, a=av)
        sol = z2_fixed_dot_linear(P)
        assert sol.consistent, label
        assert sol.dim == dim, label
        got = sol.particular
        for i in range(3):
            for j in range(3):
                assert got.value(i, j) == particular.value(i, j), (label, i, j)


def test_fixed_dot_solution_membership():
    J03 = load("J03")
    sol = z2_fixed_dot_linear(J03)
    inside = AlgValuedBiForm.from_entries(3, {(2, 3): [rf(0), rf(1), rf(0)]})
    outside = AlgValuedBiForm.from_entries(3, {(1, 2): [rf(1), rf(0), rf(0)]})
    assert sol.contains(inside)
    assert not sol.contains(outside)


def test_fixed_dot_abelian_is_unconstrained():
    P = AlgebraPair.from_tables(3, label="zero3")
    sol = z2_fixed_dot_linear(P)
    assert sol.dim == 9  # three independent entries, three coordinates each
    assert sol.particular.is_zero


def test_fixed_dot_rejects_noncommutative_table():
    n = 2
    dot = [[[rf(0)] * n for _ in range(n)] for _ in range(n)]
    dot[0][1] = [rf(1), rf(0)]  # e1*e2 = e1 but e2*e1 = 0
    with pytest.raises(ValueError):
        z2_fixed_dot_linear(AlgebraPair(n, dot, [[[rf(0)] * n] * n] * n))


def test_jacobi_check_and_pairing():
    J03 = load("J03")
    th = AlgValuedBiForm.from_entries(3, {(2, 3): [rf(0), rf(1), rf(0)]})
    assert jacobi_check(th)
    P = pair_with_bracket(J03, th, label="mk")
    ref = load("P01")
    assert _same_tables(P, ref)
    assert not check_cpa(P).violations
    assert P.label == "mk"


def test_jacobi_check_zero_and_violation():
    assert jacobi_check(AlgValuedBiForm.zero(4))
    bad = AlgValuedBiForm.from_entries(
        3, {(1, 2): [rf(1), rf(0), rf(0)], (2, 3): [rf(0), rf(1), rf(0)]})
    assert not jacobi_check(bad)


def test_bracket_form_roundtrip():
    P = load("P01")
    th = bracket_form(P)
    assert th.bracket_table() == P.bracket
    sol = z2_fixed_dot_linear(P)
    assert sol.contains(th)


def test_aut_action_fixed_dot_identity():
    J03 = load("J03")
    th = AlgValuedBiForm.from_entries(3, {(2, 3): [rf(0), rf(2), rf(3)]})
    out = aut_action_fixed_dot(J03, th, Matrix.identity(3))
    for i in range(3):
        for j in range(3):
            assert out.value(i, j) == th.value(i, j)


def test_aut_action_fixed_dot_diagonal_block():
    # three orthogonal idempotents: any invertible map fixing each e_i*e_i = e_i
    # up to the block on span(e2, e3) acts on D23-valued forms
    J03 = load("J03")
    th = AlgValuedBiForm.from_entries(3, {(2, 3): [rf(0), rf(1), rf(1)]})
    phi = Matrix([[rf(1), rf(0), rf(0)],
                  [rf(0), rf(2), rf(0)],
                  [rf(0), rf(0), rf(3)]])
    out = aut_action_fixed_dot(J03, th, phi)
    assert out.value(1, 2) == [rf(0), rf(3), rf(2)]


def test_aut_action_fixed_dot_full_block():
    J03 = load("J03")
    th = AlgValuedBiForm.from_entries(3, {(2, 3): [rf(0), rf(1), rf(1)]})
    phi = Matrix([[rf(1), rf(0), rf(0)],
                  [rf(0), rf(2), rf(5)],
                  [rf(0), rf(7), rf(3)]])
    out = aut_action_fixed_dot(J03, th, phi)
    assert out.value(1, 2) == [rf(0), rf(-2), rf(-5)]


def test_aut_action_fixed_dot_swap_negates():
    J05 = load("J05")
    th = AlgValuedBiForm.from_entries(3, {(1, 2): [rf(0), rf(0), rf(1)]})
    out = aut_action_fixed_dot(J05, th, swap_matrix(3, 1, 2))
    assert out.value(0, 1) == [rf(0), rf(0), rf(-1)]


def test_aut_action_fixed_dot_rejects_nonautomorphism():
    J05 = load("J05")
    th = AlgValuedBiForm.from_entries(3, {(1, 2): [rf(0), rf(0), rf(1)]})
    bad = Matrix([[rf(2), rf(0), rf(0)],
                  [rf(0), rf(1), rf(0)],
                  [rf(0), rf(0), rf(1)]])
    with pytest.raises(NotAnAutomorphism):
        aut_action_fixed_dot(J05, th, bad)


# ---------------------------------------------------------------------------
# catalog-wide consistency

PAIR_FAMILIES = ("pair2", "pair3", "pair4", "nil3", "component")
KNOWN_INVALID = {"Pfrak13", "Pfrak14", "Pfrak15"}  # stored as printed


def _valid_pairs():
    return [e for e in entries()
            if e.family in PAIR_FAMILIES and not e.single
            and e.label not in KNOWN_INVALID]


def test_every_catalog_bracket_is_compatible_with_its_dot():
    for entry in _valid_pairs():
        P = load(entry.label)
        th = bracket_form(P)
        if th.is_zero:
            continue
        sol = z2_fixed_dot_linear(P)
        assert sol.contains(th), entry.label
        assert jacobi_check(th), entry.label


def test_known_invalid_brackets_are_incompatible():
    for label in sorted(KNOWN_INVALID):
        P = load(label)
        assert not z2_fixed_dot_linear(P).contains(bracket_form(P)), label


def test_every_catalog_coboundary_is_a_cocycle():
    # h22_dim asserts the inclusion internally; sweep the pair entries
    for entry in _valid_pairs():
        P = load(entry.label)
        assert h22_dim(P) >= 0, entry.label


# ---------------------------------------------------------------------------
# compatibility engines for rigid examples


def test_semisimple_bracket_admits_no_product():
    L = load("Lfrak1")
    assert compatible_dots_linear(L) == []
    assert no_nonzero_compatible_dot(L)


def test_three_idempotent_product_admits_no_bracket():
    T = load("T1")
    sol = z2_fixed_dot_linear(T)
    assert sol.consistent
    assert sol.is_zero_set()
    assert no_nonzero_compatible_bracket(T)
