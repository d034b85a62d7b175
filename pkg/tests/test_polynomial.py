from __future__ import annotations

import pytest
from corpus import F2, F3, cat, corpus_functors, quotient
from hypothesis import given, settings, strategies as st

from functorlab.category import ProductCat, TruncationError
from functorlab.functors import (
    additive_standard,
    constant,
    external_tensor,
    restrict,
    standard_projective,
)
from functorlab.linalg import StructuralError
from functorlab.polynomial import (
    ap_type_check,
    cross_effect,
    factors_through,
    is_antipolynomial_via,
    is_constant,
    poly_degree,
    slot_functor,
)


def test_second_cross_effect_of_projective():
    C = cat((2,), 2)
    rep = cross_effect(standard_projective(C, 1, F2), 2, (1, 1))
    assert rep.dim == 1 and rep.total_dim == 4
    assert sorted(rep.summands.values()) == [1, 1, 1, 1]
    assert rep.identity_holds()


def test_cross_effects_of_additive_and_constant():
    C = cat((2,), 2)
    h1 = additive_standard(C, 1, F2)
    assert cross_effect(h1, 2, (1, 1)).dim == 0
    assert cross_effect(h1, 1, (2,)).dim == 2
    K = constant(C, F2)
    rep = cross_effect(K, 1, (1,))
    assert rep.dim == 0 and rep.constant_dim == 1


def test_cross_effect_rejects_bad_input():
    C = cat((2,), 1)
    P = standard_projective(C, 1, F2)
    with pytest.raises(TruncationError):
        cross_effect(P, 2, (1, 1))
    with pytest.raises(ValueError):
        cross_effect(P, 2, (1,))


def test_cross_effect_basis():
    C = cat((2,), 2)
    rep, basis = cross_effect(standard_projective(C, 1, F2), 2, (1, 1), basis=True)
    assert basis.shape == (4, rep.dim)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 7), st.sampled_from([(1,), (2,), (1, 1)]))
def test_cross_effect_summands_add_up(i, ranks):
    funcs = corpus_functors((2,), 2, F2)
    name, F = funcs[i % len(funcs)]
    rep = cross_effect(F, len(ranks), ranks)
    assert sum(rep.summands.values()) == F.dims[sum(ranks)], name


def test_poly_degree():
    C = cat((2,), 2)
    assert poly_degree(constant(C, F2), 2).degree == 0
    assert poly_degree(additive_standard(C, 1, F2), 2).degree == 1
    deg = poly_degree(standard_projective(C, 1, F2), 2)
    assert deg.degree is None and deg.label() == ">= 2"
    assert deg.witnesses[2] == (1, 1)
    with pytest.raises(TruncationError):
        poly_degree(standard_projective(cat((2,), 1), 1, F2), 2)


def test_is_constant():
    C = cat((4,), 1)
    assert is_constant(constant(C, F2))
    assert not is_constant(additive_standard(C, 1, F2))


def test_factors_through_quotient():
    phi = quotient((6,), (2,), 1)
    G = standard_projective(phi.dst, 1, F3)
    fac = factors_through(phi, restrict(phi, G))
    assert fac.holds
    fac.functor.validate()
    assert fac.functor.dims == G.dims
    bad = factors_through(phi, standard_projective(phi.src, 1, F3))
    assert not bad.holds and bad.witness is not None
    with pytest.raises(StructuralError):
        factors_through(phi, standard_projective(phi.dst, 1, F3))


def test_factors_through_z4_to_z2():
    phi = quotient((4,), (2,), 1)
    assert factors_through(phi, restrict(phi, additive_standard(phi.dst, 1, F2))).holds
    # Z/4 (x) F_2 only sees the reduction mod 2, so h^1 factors as well
    assert factors_through(phi, additive_standard(phi.src, 1, F2)).holds
    assert not factors_through(phi, standard_projective(phi.src, 1, F2)).holds


def test_antipolynomial_depends_on_coefficients():
    phi = quotient((6,), (2,), 1)
    A_f3 = restrict(phi, standard_projective(phi.dst, 1, F3))
    A_f2 = restrict(phi, standard_projective(phi.dst, 1, F2))
    assert is_antipolynomial_via(phi, A_f3).holds
    v = is_antipolynomial_via(phi, A_f2)
    assert v.factors and not v.k_trivial and not v.holds
    # constants always qualify
    assert is_antipolynomial_via(phi, constant(phi.src, F2)).constant


def test_slot_functors_and_ap_type():
    phi = quotient((6,), (2,), 2)
    A1 = restrict(phi, standard_projective(phi.dst, 1, F3))
    h1 = additive_standard(phi.src, 1, F3)
    B = external_tensor(A1, h1)
    assert isinstance(B.cat, ProductCat)
    for x in phi.src.objects():
        slot_functor(B, 1, x).validate()
        slot_functor(B, 0, x).validate()
        assert slot_functor(B, 1, x).dims == tuple(A1.dims[x] * d for d in h1.dims)
    good = ap_type_check(B, phi, 2)
    assert good.holds and set(good.second_slot_degrees.values()) == {"1"}
    # swapping the factors breaks the antipolynomial slot
    bad = ap_type_check(external_tensor(h1, A1), phi, 2)
    assert not bad.holds
    with pytest.raises(StructuralError):
        slot_functor(A1, 0, 0)
