from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from functorlab.category import SizingError, TruncationError
from functorlab.linalg import GF, QQ, ZZ
from functorlab.simplicial import (
    check_em_vanishing,
    check_local_hurewicz,
    connectivity,
    constant_simplicial,
    em_map,
    em_space,
    homotopy_groups,
    hurewicz_map,
    k_negligible,
    linearize_simplicial,
    map_connectivity,
    nerve_model,
    surjections,
    vanishing_biconditional,
)

F2, F3 = GF(2), GF(3)


def _pi(X, **kw) -> dict[int, str]:
    return {i: str(g) for i, g in homotopy_groups(X, **kw).groups.items()}


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(2,), (3,), (4,), (2, 2), (6,)]), st.integers(0, 2))
def test_em_spaces_have_one_homotopy_group(orders, n):
    T = 4 if n < 2 else 3
    X = em_space(orders, n, T)
    X.validate()
    pi = homotopy_groups(X)
    for i in range(T):
        want = sorted(orders) if i == n else []
        assert sorted(pi[i].torsion) == want and pi[i].free_rank == 0


def test_em_sizes_and_ranks():
    X = em_space((2,), 2, 5)
    assert [X.rank(m) for m in range(6)] == [0, 0, 1, 3, 6, 10]
    assert [X.size(m) for m in range(4)] == [1, 1, 2, 8]


def test_nerve_agrees_with_em_space():
    for orders in [(2,), (3,)]:
        assert _pi(nerve_model(orders, 4)) == _pi(em_space(orders, 1, 4))


def test_constant_object():
    assert _pi(constant_simplicial((2, 3), 3)) == {0: "Z/6", 1: "0", 2: "0"}


def test_normalized_and_unnormalized_agree():
    X = em_space((2,), 1, 5)
    assert _pi(X) == _pi(X, normalized=False)
    ZX = linearize_simplicial(X, ZZ)
    # integral homology of Z/2 in degrees 0..4
    assert _pi(ZX) == _pi(ZX, normalized=False) == {0: "Z", 1: "Z/2", 2: "0", 3: "Z/2", 4: "0"}


def test_linearization_over_fields():
    X = em_space((2,), 1, 5)
    assert homotopy_groups(linearize_simplicial(X, F2)).dims() == {i: 1 for i in range(5)}
    for k in (F3, QQ):
        assert homotopy_groups(linearize_simplicial(X, k)).dims() == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}
    linearize_simplicial(X, F2).validate()


def test_surjections_count():
    # order-preserving surjections [m] -> [n] number C(m, n)
    assert len(surjections(3, 1)) == 3
    assert len(surjections(4, 2)) == 6
    assert surjections(2, 2) == [(0, 1, 2)]


@pytest.mark.parametrize("X", [em_space((2,), 1, 5), em_space((2,), 2, 4), constant_simplicial((2,), 3),
                               nerve_model((3,), 4)], ids=lambda X: X.name)
def test_hurewicz_is_split_injective(X):
    h = hurewicz_map(X)
    assert h.split_injective
    assert all(d.iso for d in h.degrees if d.degree <= 2 and X.name != "const(Z/2)")


def test_hurewicz_degrees_on_classifying_space():
    h = hurewicz_map(em_space((2,), 1, 5))
    got = [(d.degree, str(d.src), str(d.dst), d.iso) for d in h.degrees]
    assert got[1] == (1, "Z/2", "Z/2", True)
    assert got[3] == (3, "0", "Z/2", False)


def test_em_vanishing_reports():
    rep = check_em_vanishing((2,), 1, F3, 5)
    assert rep.verdict == "confirmed"
    assert rep.extra["pi_k"] == {"0": 1, "1": 0, "2": 0, "3": 0, "4": 0}
    bad = check_em_vanishing((2,), 1, F2, 4)
    assert bad.verdict == "hypotheses-unmet"
    assert not k_negligible((2,), F2) and k_negligible((2,), F3) and k_negligible((4, 3), QQ)


def test_local_hurewicz_reports():
    assert check_local_hurewicz(em_space((2,), 1, 6), F3, 4).verdict == "confirmed"
    rep = check_local_hurewicz(em_space((2,), 1, 3), F2, 0)
    assert rep.verdict == "confirmed"
    assert check_local_hurewicz(constant_simplicial((2,), 3), F3, 0).verdict == "confirmed"
    with pytest.raises(TruncationError):
        check_local_hurewicz(em_space((2,), 1, 3), F3, 4)


@pytest.mark.parametrize("k", [F2, F3, QQ])
def test_vanishing_biconditional(k):
    for X in (em_space((2,), 1, 5), em_space((3,), 1, 4), nerve_model((2,), 4)):
        for e in range(1, X.T - 1):
            vanish, cond = vanishing_biconditional(X, k, e)
            assert vanish == cond, (X.name, k.tag, e)


def test_map_connectivity():
    f = em_map([[1]], (4,), (2,), 1, 4)
    assert map_connectivity(f, F3) == {"pi": 1, "k_linearized": 3, "certified": [0, 3]}
    assert map_connectivity(f, F2) == {"pi": 1, "k_linearized": 1, "certified": [0, 3]}


def test_connectivity_helper():
    assert connectivity({0: (True, True), 1: (True, True), 2: (False, True)}) == 2
    assert connectivity({0: (True, True), 1: (True, False)}) == 0
    assert connectivity({0: (False, False)}) == -1


def test_truncation_and_caps():
    X = em_space((2,), 1, 3)
    with pytest.raises(TruncationError):
        homotopy_groups(X, 3)
    with pytest.raises(SizingError):
        em_space((4,), 2, 5, cap=1000)
    with pytest.raises(SizingError):
        linearize_simplicial(em_space((2,), 2, 5), F2, cap=100)
