from __future__ import annotations

import pytest
from corpus import F2, F3, QQ, cat, quotient

from functorlab.abgroups import GroupComplex
from functorlab.category import FiniteRing, RingMap
from functorlab.functors import additive_standard, constant, dual, standard_projective
from functorlab.homology import (
    FiniteAlgebra,
    RingModule,
    algebra_bar_complex,
    algebra_free_resolution_tor,
    bar_rank_estimate,
    comparison_map,
    excision_criterion,
    ext_over_cat,
    ring_tor,
    tor_over_cat,
)
from functorlab.category import SizingError
from functorlab.linalg import ZZ

METHODS = ("resolution", "bar", "bar-unnormalized")


def _pairs(moduli, k):
    C = cat(moduli, 1)
    h1, K, P1 = additive_standard(C, 1, k), constant(C, k), standard_projective(C, 1, k)
    return {"h1,h1": (h1, h1), "h1,k": (h1, K), "k,h1": (K, h1), "P1,h1": (P1, h1)}


@pytest.mark.parametrize("moduli,k", [((2,), F2), ((4,), F2), ((3,), F3), ((4,), F3)])
def test_three_routes_agree(moduli, k):
    for name, (F, G) in _pairs(moduli, k).items():
        ext = [ext_over_cat(F, G, 3, method=m).dims() for m in METHODS]
        tor = [tor_over_cat(dual(F), G, 3, method=m).dims() for m in METHODS]
        assert ext[0] == ext[1] == ext[2], name
        assert tor[0] == tor[1] == tor[2], name


def test_frozen_ext_over_z4():
    # frozen after agreement of the resolution and both bar routes
    C = cat((4,), 1)
    h1 = additive_standard(C, 1, F2)
    assert ext_over_cat(h1, h1, 3).dims() == {0: 1, 1: 2, 2: 4, 3: 8}
    assert tor_over_cat(dual(standard_projective(C, 1, F2)), h1, 3).dims() == {0: 2, 1: 3, 2: 6, 3: 12}
    # over F_2 with ring F_2, h^1 is projective and self-orthogonal in positive degrees
    C2 = cat((2,), 1)
    assert ext_over_cat(additive_standard(C2, 1, F2), additive_standard(C2, 1, F2), 3).dims() == \
        {0: 1, 1: 0, 2: 0, 3: 0}


def test_rational_coefficients_match_bar():
    C = cat((2,), 1)
    P = standard_projective(C, 1, QQ)
    K = constant(C, QQ)
    for m in METHODS:
        assert ext_over_cat(P, K, 2, method=m).dims() == {0: 1, 1: 0, 2: 0}
        assert ext_over_cat(K, K, 2, method=m).dims() == {0: 1, 1: 0, 2: 0}


def test_bar_rank_estimate_and_cap():
    C = cat((2,), 2)
    P = standard_projective(C, 1, F2)
    est = bar_rank_estimate(C, P.dims, P.dims, 4)
    # degree 0 is the sum of dim F(x) * dim G(x); higher degrees grow with the chains
    assert est[0] == sum(d * d for d in P.dims) == 21
    assert all(a < b for a, b in zip(est, est[1:]))
    with pytest.raises(SizingError):
        ext_over_cat(P, P, 3, method="bar")


@pytest.mark.parametrize("method", ["resolution", "bar"])
def test_comparison_map_truncated_excision(method):
    phi = quotient((4,), (2,), 1)
    F = standard_projective(phi.dst, 1, F3)
    ext = comparison_map(phi, F, F, 2, "ext", method=method)
    tor = comparison_map(phi, dual(F), F, 2, "tor", method=method)
    assert [(d.src_dim, d.dst_dim, d.rank) for d in ext.degrees] == [(2, 2, 2), (0, 1, 0), (0, 1, 0)]
    assert ext.verdicts() == ["iso", "injective-only", "injective-only"]
    assert [(d.src_dim, d.dst_dim, d.rank) for d in tor.degrees] == [(2, 2, 2), (1, 0, 0), (1, 0, 0)]


def test_comparison_along_identity_is_iso():
    C = cat((2,), 1)
    from functorlab.category import IdentityFunctor

    phi = IdentityFunctor(C)
    F = additive_standard(C, 1, F2)
    assert comparison_map(phi, F, F, 2, "ext").all_iso()
    assert comparison_map(phi, dual(F), F, 2, "tor").all_iso()


@pytest.mark.parametrize("p,n", [(2, 2), (3, 3), (2, 3)])
def test_truncated_polynomial_tor(p, n):
    from functorlab.linalg import GF

    A = FiniteAlgebra.truncated_polynomial(GF(p), n)
    k = A.augmentation_module()
    bar = algebra_bar_complex(k, k, 5).summary(4).dims()
    res = algebra_free_resolution_tor(k, k, 5).summary(4).dims()
    assert bar == res == {i: 1 for i in range(5)}
    assert ring_tor(A, k, k, 4).dims() == bar


def _periodic_oracle(m: int, d: int, top: int) -> dict[int, str]:
    """Tor^{Z/m}(Z/d, Z/d) from Z/m <-(d)- Z/m <-(m/d)- Z/m <-(d)- ..., tensored with Z/d."""
    r = {n: 1 for n in range(top + 2)}
    diffs = {n: [[(d if n % 2 else m // d) % d]] for n in range(1, top + 2)}
    rel = {n: [[d]] for n in range(top + 2)}
    gc = GroupComplex(0, top + 1, r, diffs, rel)
    return {n: str(gc.homology(n).group) for n in range(top + 1)}


@pytest.mark.parametrize("m,d", [(4, 2), (6, 2), (8, 2), (8, 4), (9, 3), (12, 6)])
def test_ring_tor_matches_periodic_resolution(m, d):
    M = RingModule.from_ring_map(RingMap.canonical(FiniteRing((m,)), FiniteRing((d,))))
    got = ring_tor(FiniteRing((m,)), M, M, 4)
    assert {n: str(g) for n, g in got.groups.items()} == _periodic_oracle(m, d, 4)


def test_excision_criterion_z4_z2():
    phi = RingMap.canonical(FiniteRing((4,)), FiniteRing((2,)))
    f2 = excision_criterion(phi, F2, 3)
    assert {n: str(g) for n, g in f2.torsion.groups.items()} == {0: "Z/2", 1: "Z/2", 2: "Z/2", 3: "Z/2"}
    assert not f2.satisfied
    assert ("k (x) T", 1) in f2.violations and ("Tor_1(k, T)", 1) in f2.violations
    assert excision_criterion(phi, F3, 3).satisfied and excision_criterion(phi, QQ, 3).satisfied
    with pytest.raises(ValueError):
        excision_criterion(phi, F3, 0)


def test_excision_criterion_split_case():
    # Z/6 -> Z/2 is a product projection: T vanishes in positive degrees
    crit = excision_criterion(RingMap.canonical(FiniteRing((6,)), FiniteRing((2,))), F2, 4)
    assert crit.satisfied
    assert all(crit.torsion[i].is_zero() for i in range(1, 4))


def test_ring_tor_integral_coefficients():
    R = FiniteRing((4,))
    free = RingModule.free(R, 1)
    M = RingModule.from_ring_map(RingMap.canonical(R, FiniteRing((2,))))
    out = ring_tor(R, free, M, 3)
    assert str(out[0]) == "Z/2" and all(out[i].is_zero() for i in (1, 2, 3))
    assert out.ring is ZZ
