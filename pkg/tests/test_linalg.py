from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from functorlab.abgroups import integer_kernel
from functorlab.linalg import (
    GF,
    QQ,
    ZZ,
    ChainComplex,
    HomologyGroup,
    Matrix,
    StructuralError,
    homology,
    rank_kernel_cokernel,
    ring_from_tag,
    smith_normal_form,
    summary_from_invariants,
    universal_coefficients,
)

small_ints = st.integers(min_value=-6, max_value=6)


def int_matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def _det(m: list[list[int]]) -> int:
    a = [[Fraction(x) for x in row] for row in m]
    n, det = len(a), Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if a[r][i] != 0), None)
        if p is None:
            return 0
        if p != i:
            a[i], a[p] = a[p], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return int(det)


def test_snf_known_example():
    s = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert s.invariant_factors == (2, 6, 12)


def test_snf_zero_and_empty():
    assert smith_normal_form([[0, 0], [0, 0]]).rank == 0
    assert smith_normal_form(Matrix.zero(ZZ, 0, 3)).invariant_factors == ()


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_snf_transforms_diagonalize(m):
    s = smith_normal_form(m, transforms=True)
    A = np.array(m, dtype=object)
    L, R, Li = (np.array(x, dtype=object) for x in (s.left, s.right, s.left_inv))
    D = L.dot(A).dot(R)
    diag = [D[i, i] for i in range(min(D.shape))]
    off = D.copy()
    for i in range(min(D.shape)):
        off[i, i] = 0
    assert not off.any()
    assert [d for d in diag if d] == list(s.invariant_factors)
    assert all(b % a == 0 for a, b in zip(s.invariant_factors, s.invariant_factors[1:]))
    assert (Li.dot(L) == np.eye(len(m), dtype=int)).all()
    assert abs(_det(s.left)) == 1 and abs(_det(s.right)) == 1


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_snf_rank_matches_rational_rank(m):
    assert smith_normal_form(m).rank == QQ.rank(QQ.array(m))


@settings(max_examples=60, deadline=None)
@given(int_matrices(), st.sampled_from([2, 3, 5]))
def test_rank_mod_p_from_invariant_factors(m, p):
    s = smith_normal_form(m)
    expected = sum(1 for d in s.invariant_factors if d % p)
    assert GF(p).rank(GF(p).array(m)) == expected


@settings(max_examples=40, deadline=None)
@given(int_matrices(), st.sampled_from(["GF(2)", "GF(3)", "QQ"]))
def test_nullspace_and_solve(m, tag):
    k = ring_from_tag(tag)
    a = k.array(m)
    ker = k.nullspace(a)
    assert ker.shape == (a.shape[1], a.shape[1] - k.rank(a))
    if ker.size:
        prod = k.matmul(a, ker)
        assert not np.any(prod != 0)
    b = k.matmul(a, k.array([[1]] * a.shape[1]))[:, 0]
    x = k.solve(a, b)
    assert x is not None
    assert np.array_equal(k.matmul(a, x.reshape(-1, 1))[:, 0], b)


def test_field_inverse_and_errors():
    k = GF(5)
    a = k.array([[2, 1], [1, 1]])
    inv = k.inverse(a)
    assert np.array_equal(k.matmul(a, inv), k.eye(2))
    with pytest.raises(StructuralError):
        k.inverse(k.array([[1, 2], [2, 4]]))
    assert k.solve(k.array([[1, 1], [1, 1]]), k.array([0, 1])) is None


def test_rational_field_is_exact():
    a = QQ.array([[1, 3], [2, 7]])
    inv = QQ.inverse(a)
    assert inv[0, 0] == Fraction(7) and inv[0, 1] == Fraction(-3)
    assert QQ.array([[Fraction(1, 3)]])[0, 0] * 3 == 1


def test_ring_tags():
    assert ring_from_tag("ZZ") is ZZ
    assert ring_from_tag("GF(7)").char == 7
    with pytest.raises(ValueError):
        ring_from_tag("GF(4)")


def test_matrix_sparse_product():
    a = Matrix.from_dense(ZZ, [[1, 2], [0, 1]])
    b = Matrix.from_dense(ZZ, [[1, -2], [0, 1]])
    assert (a @ b).to_lists() == [[1, 0], [0, 1]]
    assert Matrix.from_dense(GF(2), [[2, 3]]).entries == {(0, 1): 1}
    with pytest.raises(StructuralError):
        Matrix(ZZ, 1, 1, {(1, 0): 1})


def test_rank_kernel_cokernel():
    rank, ker, coker = rank_kernel_cokernel(Matrix.from_dense(GF(2), [[1, 1, 0], [0, 0, 1]]))
    assert (rank, len(ker), coker) == (2, 1, 0)
    with pytest.raises(StructuralError):
        rank_kernel_cokernel(Matrix.from_dense(ZZ, [[1]]))


def test_integral_homology_of_multiplication_by_two():
    c = ChainComplex(ZZ, 0, 1, {0: 1, 1: 1}, {1: Matrix.from_dense(ZZ, [[2]])})
    h = homology(c)
    assert str(h[0]) == "Z/2" and h[1].is_zero()
    assert universal_coefficients(h, GF(2)) == ({0: 1, 1: 0}, {0: 1, 1: 0})
    assert universal_coefficients(h, GF(3)) == ({0: 0, 1: 0}, {0: 0, 1: 0})


def test_rp2_cellular_chains():
    # Z -2-> Z -0-> Z in degrees 2, 1, 0
    c = ChainComplex(ZZ, 0, 2, {0: 1, 1: 1, 2: 1}, {1: [[0]], 2: [[2]]})
    h = homology(c)
    assert [str(h[i]) for i in range(3)] == ["Z", "Z/2", "0"]
    assert homology(ChainComplex(GF(2), 0, 2, {0: 1, 1: 1, 2: 1}, {1: [[0]], 2: [[2]]})).dims() == {0: 1, 1: 1, 2: 1}


def test_d_squared_is_checked():
    with pytest.raises(StructuralError):
        ChainComplex(ZZ, 0, 2, {0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[1]]})


@settings(max_examples=40, deadline=None)
@given(int_matrices(3, 4), st.lists(st.lists(small_ints, min_size=2, max_size=2), min_size=1, max_size=4),
       st.sampled_from(["ZZ", "GF(2)", "GF(3)", "QQ"]))
def test_euler_characteristic(d1, coeffs, tag):
    # d_2 has columns in the integer kernel of d_1, so d_1 d_2 = 0
    r0, r1 = len(d1), len(d1[0])
    ker = integer_kernel(d1, r1)
    cols = [[sum(c * v[i] for c, v in zip(cf, ker)) for i in range(r1)] for cf in coeffs] if ker else []
    r2 = len(cols)
    d2 = [[cols[j][i] for j in range(r2)] for i in range(r1)]
    k = ring_from_tag(tag)
    c = ChainComplex(k, 0, 2, {0: r0, 1: r1, 2: r2}, {1: d1, 2: d2 if r2 else Matrix.zero(k, r1, 0)})
    h = homology(c)
    assert sum((-1) ** n * g.free_rank for n, g in h.groups.items()) == r0 - r1 + r2
    if tag == "ZZ":
        # universal coefficients: dims over GF(2) from the integral groups
        kc = ChainComplex(GF(2), 0, 2, {0: r0, 1: r1, 2: r2}, {1: d1, 2: d2 if r2 else Matrix.zero(GF(2), r1, 0)})
        tens, tor = universal_coefficients(h, GF(2))
        assert homology(kc).dims() == {n: tens[n] + tor.get(n - 1, 0) for n in range(3)}


def test_homology_group_strings_and_summary():
    assert str(HomologyGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
    assert HomologyGroup(0, (3,)).order() == 3 and HomologyGroup(1).order() is None
    s = summary_from_invariants(ZZ, {0: [0], 1: [2, 4], 2: []})
    assert s.as_json() == {"0": {"free": 1, "torsion": []}, "1": {"free": 0, "torsion": [2, 4]},
                           "2": {"free": 0, "torsion": []}}
