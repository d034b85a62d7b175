from __future__ import annotations

import pytest
from corpus import F2, F3, cat, quotient

from functorlab.functors import (
    additive_standard,
    constant,
    dual,
    external_tensor,
    pointwise_tensor,
    restrict,
    standard_projective,
)
from functorlab.homology import ext_over_cat, tor_over_cat
from functorlab.kunneth import diagonal_comparison


def _a1_p1():
    phi = quotient((6,), (2,), 1)
    A1 = restrict(phi, standard_projective(phi.dst, 1, F3))
    P1 = additive_standard(phi.src, 1, F3)
    return A1, P1


@pytest.mark.parametrize("variance", ["ext", "tor"])
def test_separation_at_rank_one(variance):
    A1, P1 = _a1_p1()
    C1, C2 = (A1, P1) if variance == "ext" else (dual(A1), dual(P1))
    res = diagonal_comparison(A1, P1, C1, C2, 2, variance)
    assert res.comparison.all_iso()
    assert res.product_factorizes() and res.diagonal_factorizes()
    out = res.as_json()
    assert out["product_factorizes"] and out["comparison"]["variance"] == variance


def test_product_dims_match_direct_computation():
    # Ext over C x C computed directly on the external tensors, no Kunneth splitting
    A1, P1 = _a1_p1()
    res = diagonal_comparison(A1, P1, A1, P1, 2, "ext")
    direct = ext_over_cat(external_tensor(A1, P1), external_tensor(A1, P1), 2).dims()
    assert direct == res.product_dims
    diag = ext_over_cat(pointwise_tensor(A1, P1), pointwise_tensor(A1, P1), 2).dims()
    assert diag == res.diagonal_dims


def test_factor_dims_are_the_single_ext_groups():
    A1, P1 = _a1_p1()
    res = diagonal_comparison(A1, P1, A1, P1, 2, "ext")
    d1, d2 = res.factor_dims
    assert {n: d1[n] for n in range(3)} == ext_over_cat(A1, A1, 2).dims()
    assert {n: d2[n] for n in range(3)} == ext_over_cat(P1, P1, 2).dims()


def test_kunneth_without_separation_hypothesis():
    # two polynomial factors over F_2: the product side still factorizes,
    # while the diagonal side need not agree with it
    C = cat((2,), 1)
    h1 = additive_standard(C, 1, F2)
    K = constant(C, F2)
    res = diagonal_comparison(h1, K, h1, K, 1, "ext")
    assert res.product_factorizes()
    direct = tor_over_cat(dual(pointwise_tensor(h1, K)), pointwise_tensor(h1, K), 1).dims()
    assert direct[0] == res.diagonal_dims[0]
