from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from functorlab.abgroups import (
    GroupComplex,
    Lattice,
    cyclic_orders_rel,
    hom_is_injective,
    hom_is_surjective,
    integer_kernel,
    lattice_basis,
    rational_solve,
    subquotient,
)
from functorlab.linalg import StructuralError

vec3 = st.lists(st.integers(-5, 5), min_size=3, max_size=3)


@settings(max_examples=50, deadline=None)
@given(st.lists(vec3, min_size=1, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_lattice_membership(gens, coeffs):
    lat = Lattice(gens, 3)
    v = [sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(3)]
    y = lat.coords(v)
    assert y is not None
    assert lat.vector(y) == v


@settings(max_examples=50, deadline=None)
@given(st.lists(vec3, min_size=1, max_size=3))
def test_integer_kernel(rows):
    ker = integer_kernel(rows, 3)
    for k in ker:
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in rows)
    rank = len(lattice_basis([[rows[i][j] for i in range(len(rows))] for j in range(3)], len(rows)))
    assert len(ker) == 3 - rank


def test_lattice_rejects_non_members():
    lat = Lattice([[2, 0], [0, 3]], 2)
    assert lat.contains([4, 3]) and not lat.contains([1, 0])
    assert Lattice([], 2).coords([0, 0]) == [] and Lattice([], 2).coords([1, 0]) is None


def test_subquotient_orders_and_coords():
    h = subquotient([[1, 0], [0, 1]], [[2, 0], [0, 0]], 2)
    assert sorted(h.orders) == [0, 2]
    assert str(h.group) == "Z + Z/2"
    assert h.coords([2, 0]) == tuple(0 for _ in h.orders)
    with pytest.raises(StructuralError):
        subquotient([[2, 0]], [[1, 0]], 2)


def test_group_complex_cyclic():
    # Z/4 --2--> Z/4: kernel Z/2, cokernel Z/2
    gc = GroupComplex(0, 1, {0: 1, 1: 1}, {1: [[2]]}, {0: [[4]], 1: [[4]]})
    assert str(gc.homology(0).group) == "Z/2"
    assert str(gc.homology(1).group) == "Z/2"
    assert gc.homology(1).generators == [[2]] or gc.homology(1).coords([2]) != (0,)


def test_group_complex_lattice_restriction():
    # the sublattice 2Z of Z, mapping by 1 to Z/2 in degree 0
    gc = GroupComplex(0, 1, {0: 1, 1: 1}, {1: [[1]]}, {0: [[2]]}, {1: [[2]]})
    assert gc.homology(0).group.free_rank == 0 and str(gc.homology(0).group) == "Z/2"
    assert str(gc.homology(1).group) == "Z"


def test_hom_injective_surjective():
    rel = cyclic_orders_rel([2, 0, 3])
    assert rel == [[2, 0, 0], [0, 0, 3]]
    assert hom_is_injective([2], [4], [[2]])
    assert not hom_is_injective([4], [2], [[1]])
    assert hom_is_surjective([2], [[1]]) and not hom_is_surjective([4], [[2]])
    assert hom_is_injective([0], [0], [[3]]) and not hom_is_surjective([0], [[3]])


def test_rational_solve():
    x = rational_solve([[2, 0], [0, 4]], [1, 1])
    assert x is not None and 2 * x[0] == 1 and 4 * x[1] == 1
    assert rational_solve([[1, 1], [1, 1]], [0, 1]) is None
