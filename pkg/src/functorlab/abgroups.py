"""Finitely generated abelian groups as lattice subquotients, with explicit homology.

A group is presented inside some ZZ^r as L / Rel where Rel <= L are lattices given
by generating columns.  Homology of a complex of such groups is computed with Smith
forms, keeping cycle representatives and a coordinate map so that induced maps
between homology groups can be written down.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import HomologyGroup, StructuralError, smith_normal_form


def _cols(m, r: int) -> list[list[int]]:
    """Normalize to a list of columns: lists are taken as lists of column vectors,
    2-d arrays as r x k matrices."""
    if m is None:
        return []
    if isinstance(m, np.ndarray):
        if m.size == 0:
            return []
        a = m.reshape(r, -1)
        return [[int(x) for x in a[:, j]] for j in range(a.shape[1])]
    return [[int(x) for x in c] for c in m]


def _to_matrix(cols: list[list[int]], r: int) -> list[list[int]]:
    return [[c[i] for c in cols] for i in range(r)]


def _matvec(m: list[list[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in m]


def lattice_basis(gens: list[list[int]], r: int) -> list[list[int]]:
    """A ZZ-basis (columns) of the lattice spanned by ``gens`` in ZZ^r."""
    gens = [g for g in gens if any(g)]
    if not gens:
        return []
    s = smith_normal_form(_to_matrix(gens, r), transforms=True)
    li = s.left_inv
    return [[li[i][t] * s.invariant_factors[t] for i in range(r)] for t in range(s.rank)]


def integer_kernel(m: list[list[int]], cols: int) -> list[list[int]]:
    """Basis of {x in ZZ^cols : m x = 0}."""
    if not m or all(not any(row) for row in m):
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    s = smith_normal_form(m, transforms=True)
    R = s.right
    return [[R[i][j] for i in range(cols)] for j in range(s.rank, cols)]


class Lattice:
    """Full-rank-in-itself lattice with a basis and exact coordinate solving."""

    def __init__(self, gens: list[list[int]], r: int):
        self.r = r
        self.basis = lattice_basis(gens, r)
        self.rank = len(self.basis)
        if self.rank:
            s = smith_normal_form(_to_matrix(self.basis, r), transforms=True)
            self._L = s.left
            self._R = s.right
            self._d = s.invariant_factors

    def coords(self, v: Sequence[int]) -> list[int] | None:
        """Integer coordinates of v in the basis, or None when v is not in the lattice."""
        v = [int(x) for x in v]
        if self.rank == 0:
            return [] if not any(v) else None
        lv = _matvec(self._L, v)
        if any(lv[i] for i in range(self.rank, self.r)):
            return None
        y = []
        for i in range(self.rank):
            q, rem = divmod(lv[i], self._d[i])
            if rem:
                return None
            y.append(q)
        return _matvec(self._R, y)

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def vector(self, coords: Sequence[int]) -> list[int]:
        out = [0] * self.r
        for c, b in zip(coords, self.basis):
            if c:
                for i in range(self.r):
                    out[i] += c * b[i]
        return out


@dataclass
class SubquotientHomology:
    """H = Z / B with generators and a coordinate map.

    ``orders[i]`` is the order of generator i (0 for an infinite cyclic summand).
    """

    ambient: int
    orders: tuple[int, ...]
    generators: list[list[int]]
    _z: Lattice
    _L: tuple
    _keep: list

    def coords(self, cycle: Sequence[int]) -> tuple[int, ...]:
        y = self._z.coords(cycle)
        if y is None:
            raise StructuralError("vector is not a cycle")
        c = _matvec(self._L, y) if self._L else []
        out = []
        for i, o in zip(self._keep, self.orders):
            out.append(c[i] % o if o else c[i])
        return tuple(out)

    @property
    def group(self) -> HomologyGroup:
        return HomologyGroup(sum(1 for o in self.orders if o == 0), tuple(o for o in self.orders if o))

    def is_zero(self) -> bool:
        return not self.orders


def subquotient(z_gens: list[list[int]], b_gens: list[list[int]], r: int) -> SubquotientHomology:
    """Z/B for lattices B <= Z <= ZZ^r given by generators."""
    z = Lattice(z_gens, r)
    coords = []
    for g in b_gens:
        if not any(g):
            continue
        c = z.coords(g)
        if c is None:
            raise StructuralError("boundary not contained in cycles")
        coords.append(c)
    zr = z.rank
    if zr == 0:
        return SubquotientHomology(r, (), [], z, (), [])
    if coords:
        s = smith_normal_form(_to_matrix(coords, zr), transforms=True)
        L, Li, factors = s.left, s.left_inv, s.invariant_factors
    else:
        L = tuple(tuple(int(i == j) for j in range(zr)) for i in range(zr))
        Li, factors = L, ()
    orders, keep, gens = [], [], []
    for i in range(zr):
        o = factors[i] if i < len(factors) else 0
        if o == 1:
            continue
        keep.append(i)
        orders.append(o)
        gens.append(z.vector([Li[t][i] for t in range(zr)]))
    return SubquotientHomology(r, tuple(orders), gens, z, L, keep)


@dataclass
class GroupComplex:
    """Complex of f.g. abelian groups C_n = L_n / Rel_n inside ZZ^{r_n}, degrees lo..hi.

    ``d[n]`` is an integer matrix ZZ^{r_n} -> ZZ^{r_{n-1}} mapping L_n into L_{n-1}
    and Rel_n into Rel_{n-1}.  ``rel[n]`` and ``lat[n]`` are lists of column vectors;
    ``lat[n]`` defaults to all of ZZ^{r_n}.
    """

    lo: int
    hi: int
    r: dict
    d: dict
    rel: dict
    lat: dict | None = None

    def _lat(self, n) -> list[list[int]]:
        if self.lat is not None and n in self.lat:
            return _cols(self.lat[n], self.r.get(n, 0))
        rn = self.r.get(n, 0)
        return [[int(i == j) for i in range(rn)] for j in range(rn)]

    def _rel(self, n) -> list[list[int]]:
        return _cols(self.rel.get(n), self.r.get(n, 0))

    def _dmat(self, n) -> list[list[int]]:
        rows, cols = self.r.get(n - 1, 0), self.r.get(n, 0)
        m = self.d.get(n)
        if m is None or rows == 0 or cols == 0:
            return [[0] * cols for _ in range(rows)]
        a = np.asarray(m, dtype=object).reshape(rows, cols)
        return [[int(x) for x in row] for row in a]

    def cycles(self, n: int) -> list[list[int]]:
        rn = self.r.get(n, 0)
        lat = self._lat(n)
        if not lat:
            return []
        if n - 1 < self.lo or self.r.get(n - 1, 0) == 0:
            return lat
        dm = self._dmat(n)
        rel = self._rel(n - 1)
        imgs = [_matvec(dm, v) for v in lat]
        big = _to_matrix(imgs + rel, self.r[n - 1])
        ker = integer_kernel(big, len(imgs) + len(rel))
        out = []
        for k in ker:
            v = [0] * rn
            for c, b in zip(k[: len(lat)], lat):
                if c:
                    for i in range(rn):
                        v[i] += c * b[i]
            out.append(v)
        return out

    def boundaries(self, n: int) -> list[list[int]]:
        gens = list(self._rel(n))
        if n + 1 <= self.hi and self.r.get(n + 1, 0):
            dm = self._dmat(n + 1)
            gens += [_matvec(dm, v) for v in self._lat(n + 1)]
        return gens

    def homology(self, n: int) -> SubquotientHomology:
        return subquotient(self.cycles(n), self.boundaries(n), self.r.get(n, 0))


def cyclic_orders_rel(orders: Sequence[int]) -> list[list[int]]:
    """Relation columns for ZZ/o_1 + ... + ZZ/o_r (order 0 means ZZ)."""
    r = len(orders)
    return [[o if i == j else 0 for i in range(r)] for j, o in enumerate(orders) if o]


def map_matrix(h_src: SubquotientHomology, h_dst: SubquotientHomology, f) -> list[list[int]]:
    """Matrix of the induced map on generators: column j = coords of f(generator j)."""
    return [list(h_dst.coords(f(g))) for g in h_src.generators]


def hom_is_injective(src_orders: Sequence[int], dst_orders: Sequence[int], cols: list[list[int]]) -> bool:
    """Injectivity of a map between sums of cyclic groups, columns = images of generators."""
    s, t = len(src_orders), len(dst_orders)
    rel_dst = cyclic_orders_rel(dst_orders)
    mat = _to_matrix([list(c) for c in cols] + rel_dst, t) if t else [[] for _ in range(0)]
    if t == 0:
        ker = [[int(i == j) for i in range(s)] for j in range(s)]
    else:
        ker = [k[:s] for k in integer_kernel(mat, s + len(rel_dst))]
    rel_src = Lattice(cyclic_orders_rel(src_orders), s)
    return all(rel_src.contains(k) for k in ker)


def hom_is_surjective(dst_orders: Sequence[int], cols: list[list[int]]) -> bool:
    t = len(dst_orders)
    if t == 0:
        return True
    gens = [list(c) for c in cols] + cyclic_orders_rel(dst_orders)
    lat = Lattice(gens, t)
    return lat.rank == t and all(lat.contains([int(i == j) for i in range(t)]) for j in range(t))


def rational_solve(a: list[list[int]], b: list[int]) -> list[Fraction] | None:
    """Exact solution of a x = b over QQ (any one), or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = m[i][cols]
    return x
