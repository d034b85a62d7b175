from __future__ import annotations

import numpy as np
import pytest
from corpus import F2, F3, QQ, cat, corpus_functors, quotient

from functorlab.category import ProductCat, opposite
from functorlab.functors import (
    additive_standard,
    constant,
    direct_sum,
    dual,
    external_tensor,
    functors_equal,
    hom_group_functor,
    hom_space,
    linearize,
    pointwise_tensor,
    reduced_part,
    restrict,
    standard_projective,
    standard_projective_op,
    tensor_over_cat,
    yoneda_kills_relations,
    yoneda_map,
    zero_functor,
)
from functorlab.linalg import StructuralError


def test_standard_projective_dims():
    C = cat((4,), 1)
    P = standard_projective(C, 1, F2)
    assert P.dims == (1, 4)
    assert standard_projective_op(C, 1, F2).dims == (1, 4)
    assert standard_projective_op(C, 1, F2).cat == opposite(C)


def test_additive_standard_dims():
    assert additive_standard(cat((2,), 2), 1, F2).dims == (0, 1, 2)
    assert additive_standard(cat((6,), 1), 1, F3).dims == (0, 1)
    # Z/4 (x) F_3 = 0
    assert additive_standard(cat((4,), 1), 1, F3).dims == (0, 0)


@pytest.mark.parametrize("moduli,N,k", [((2,), 2, F2), ((4,), 1, F2), ((6,), 1, F3)])
def test_corpus_functors_are_functorial(moduli, N, k):
    for name, F in corpus_functors(moduli, N, k):
        F.validate()


def test_reduced_part_splits():
    C = cat((2,), 2)
    P = standard_projective(C, 1, F2)
    split = reduced_part(P)
    assert split.constant_dim == 1
    assert split.functor.dims == tuple(d - 1 for d in P.dims)
    split.functor.validate()
    for x in C.objects():
        ident = F2.matmul(split.projection[x], split.inclusion[x])
        assert np.array_equal(ident, F2.eye(split.functor.dims[x]))


def test_tensors_and_sums():
    C = cat((2,), 1)
    P = standard_projective(C, 1, F2)
    T = pointwise_tensor(P, P)
    T.validate()
    assert T.dims == (1, 4)
    E = external_tensor(P, additive_standard(C, 1, F2))
    assert E.cat == ProductCat(C, C)
    E.validate()
    assert E.dims == (0, 1, 0, 2)
    S = direct_sum(P, constant(C, F2))
    S.validate()
    assert S.dims == (2, 3)


def test_dual_and_restriction():
    phi = quotient((4,), (2,), 1)
    F = standard_projective(phi.dst, 1, F3)
    R = restrict(phi, F, validate=True)
    assert R.dims == (1, 2)
    D = dual(R)
    D.validate()
    assert D.cat == opposite(phi.src)
    assert functors_equal(dual(D), R)


def test_linearized_hom_group():
    C = cat((6,), 1)
    L = linearize(hom_group_functor(C, 1), F3)
    assert L.dims == (1, 6)
    P = standard_projective(C, 1, F3)
    assert functors_equal(L, P)


def test_hom_space_generators_vs_all_morphisms():
    for name, F in corpus_functors((4,), 1, F2):
        for name2, G in corpus_functors((4,), 1, F2):
            assert hom_space(F, G).dim == hom_space(F, G, all_morphisms=True).dim, (name, name2)


def test_hom_space_known_values():
    C = cat((2,), 2)
    k = constant(C, F2)
    P1 = standard_projective(C, 1, F2)
    assert hom_space(k, P1).dim == 1
    assert hom_space(P1, k).dim == 1
    assert hom_space(zero_functor(C, F2), P1).dim == 0


def test_yoneda_map_is_iso():
    for moduli, N, k in [((2,), 2, F2), ((6,), 1, F3)]:
        C = cat(moduli, N)
        for name, G in corpus_functors(moduli, N, k):
            for c in C.objects():
                assert yoneda_kills_relations(c, G)
                q = tensor_over_cat(standard_projective_op(C, c, k), G)
                m = yoneda_map(c, G, q)
                assert m.shape == (G.dims[c], q.dim)
                assert k.rank(m) == G.dims[c] == q.dim, (name, c)


def test_rational_coefficients():
    C = cat((2,), 1)
    P = standard_projective(C, 1, QQ)
    assert hom_space(P, P).dim == 2
    assert tensor_over_cat(dual(P), P).dim == 2


def test_mismatched_categories_raise():
    with pytest.raises(StructuralError):
        hom_space(standard_projective(cat((2,), 1), 1, F2), standard_projective(cat((2,), 2), 1, F2))
    with pytest.raises(StructuralError):
        tensor_over_cat(standard_projective(cat((2,), 1), 1, F2), standard_projective(cat((2,), 1), 1, F2))
