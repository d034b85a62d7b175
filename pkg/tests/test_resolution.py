from __future__ import annotations

import numpy as np
import pytest
from corpus import F2, F3, QQ, cat, corpus_functors

from functorlab.category import FiniteRing, opposite
from functorlab.functors import additive_standard
from functorlab.projectives import _convolve, coordinate_idempotents, projective_types
from functorlab.resolution import resolve


@pytest.mark.parametrize("moduli,k", [((6,), F3), ((4,), F3), ((2,), F2), ((4,), QQ), ((6,), F2), ((2, 3), F2)])
def test_coordinate_idempotents_are_orthogonal(moduli, k):
    R = FiniteRing(moduli)
    fam = coordinate_idempotents(R, k)
    one = k.zeros(R.size)
    one[R.one] = k.one
    total = sum(fam[1:], fam[0].copy())
    total = k.array(total) if k.char else total
    assert np.array_equal(total, one)
    for i, e in enumerate(fam):
        for j, f in enumerate(fam):
            prod = _convolve(R, k, e, f)
            assert np.array_equal(prod, e if i == j else k.zeros(R.size))


@pytest.mark.parametrize("moduli,N,k", [((6,), 2, F3), ((2,), 2, F2), ((4,), 1, QQ), ((6,), 1, F2)])
def test_projective_types_decompose_standard_projectives(moduli, N, k):
    C = cat(moduli, N)
    for c_cat in (C, opposite(C)):
        types = projective_types(c_cat, k)
        for c in c_cat.objects():
            for x in c_cat.objects():
                assert sum(t.dim(x) for t in types[c]) == c_cat.hom_size(c, x)


def test_refinement_splits_z6_over_f3():
    # k[(Z/6, *)] over F_3 has more than one primitive summand
    types = projective_types(cat((6,), 1), F3)
    assert len(types[1]) > 1
    assert len(projective_types(cat((6,), 1), F3, refine=False)[1]) == 1


def _exact(res, x: int, top: int) -> bool:
    k = res.field
    ranks = [k.rank(res.diff_at(n, x)) if res.diff_at(n, x).size else 0 for n in range(top + 1)]
    if ranks[0] != res.target.dims[x]:
        return False
    for n in range(top):
        dim_n = res.modules[n].dim(x)
        if dim_n - ranks[n] != ranks[n + 1]:
            return False
    return True


@pytest.mark.parametrize("moduli,N,k", [((2,), 2, F2), ((4,), 1, F2), ((6,), 1, F3)])
@pytest.mark.parametrize("refine", [True, False])
def test_resolutions_are_exact(moduli, N, k, refine):
    C = cat(moduli, N)
    for name, F in corpus_functors(moduli, N, k):
        res = resolve(F, 3, refine=refine)
        for x in C.objects():
            assert _exact(res, x, 3), (name, x)
        # d o d = 0 at every object
        for n in range(1, 4):
            for x in C.objects():
                a, b = res.diff_at(n - 1, x), res.diff_at(n, x)
                if a.size and b.size:
                    assert not np.any(k.matmul(a, b) != 0)


def test_additive_standard_is_projective_at_rank_one():
    # over F_2 with N = 1, h^1 is the reduced summand of P^1
    res = resolve(additive_standard(cat((2,), 1), 1, F2), 3)
    assert res.ranks() == [(0, 1), (0, 0), (0, 0), (0, 0)]
    # over Z/4 it is not: the resolution never stops
    res = resolve(additive_standard(cat((4,), 1), 1, F2), 3)
    assert all(sum(r) > 0 for r in res.ranks())
