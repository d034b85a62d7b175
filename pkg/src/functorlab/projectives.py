"""Projective summands P^c e = k[C(c, -)] e for idempotents e of k[End(c)].

Resolving by the whole standard projective k[C(c, -)] is wasteful: it splits along
any complete family of orthogonal idempotents of the monoid algebra k[End(c)].  For
truncated matrix categories we use the commutative family generated by diagonal
matrices whose entries are ring idempotents or units of order prime to char k.  Such
an idempotent is a tensor product over the columns of a morphism c -> x, so a basis
of P^c e (x) is a Kronecker product of small bases, one per column.

Every basis matrix B has an identity block at its pivot columns, so the coordinates
of a vector of P^c e (x), written in the ambient k[C(c, x)], are its pivot entries.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import gcd

import numpy as np

from .category import FiniteCategory, FiniteRing, OppositeCat, ProductCat, TruncCat
from .linalg import Field, StructuralError


class ProjType:
    """The projective P^c e; ``e`` is a dense vector over hom(c, c)."""

    def __init__(self, cat: FiniteCategory, field: Field, obj: int, label: tuple, e: np.ndarray, basis_fn):
        self.cat, self.field, self.obj, self.label = cat, field, obj, label
        self.e = e
        self._basis_fn = basis_fn
        self._bases: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def __repr__(self) -> str:
        return f"ProjType(obj={self.obj}, label={self.label})"

    def basis(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        """(B, pivots): rows of B span P^c e (x) inside k[C(c, x)]; B[:, pivots] = I."""
        b = self._get(x)
        return b[0], b[1]

    def pivot_position(self, x: int) -> np.ndarray:
        """For each ambient index, its position among the pivots, or -1."""
        return self._get(x)[2]

    def _get(self, x: int):
        if x not in self._bases:
            B, piv = self._basis_fn(x)
            pos = np.full(self.cat.hom_size(self.obj, x), -1, dtype=np.int64)
            pos[piv] = np.arange(len(piv))
            self._bases[x] = (B, np.asarray(piv, dtype=np.int64), pos)
        return self._bases[x]

    def dim(self, x: int) -> int:
        return self.basis(x)[0].shape[0]

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.e)

    @property
    def is_full(self) -> bool:
        """True when e is the identity, i.e. this is the whole standard projective."""
        return self.label == ("full",)


def full_type(cat: FiniteCategory, field: Field, c: int) -> ProjType:
    e = field.zeros(cat.hom_size(c, c))
    e[cat.identity(c)] = field.one

    def basis(x):
        n = cat.hom_size(c, x)
        return field.eye(n), np.arange(n)

    return ProjType(cat, field, c, ("full",), e, basis)


# ---------------------------------------------------------------------------
# idempotents of the multiplicative monoid algebra k[(R, *)]


def _convolve(ring: FiniteRing, field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = field.zeros(ring.size)
    for r in np.flatnonzero(a):
        for s in np.flatnonzero(b):
            t = ring.mul_table[r, s]
            out[t] = out[t] + a[r] * b[s]
    return field.array(out) if field.char else out


def _same(u, v, p: int) -> bool:
    return (u - v) % p == 0 if p else u == v


def _unit_characters(ring: FiniteRing, field: Field) -> tuple[list[int], list[dict[int, object]]]:
    """Units of order prime to char k, and their characters with values in k."""
    n, one, mul = ring.size, ring.one, ring.mul_table
    units = [u for u in range(n) if one in mul[u]]

    def order(u):
        k, x = 1, u
        while x != one:
            x = mul[x, u]
            k += 1
        return k

    p = field.char
    T = [u for u in units if p == 0 or gcd(order(u), p) == 1]
    # roots of unity available in k
    if p == 0:
        roots = [field.one, -field.one]
    else:
        roots = list(range(1, p))

    def rpow(z, k):
        return pow(z, k, p) if p else z ** k

    gens: list[int] = []
    span = {one}
    for u in T:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = int(mul[s, g])
                    if t not in span:
                        span.add(t)
                        nxt.append(t)
            frontier = nxt
    chars = []
    for vals in product(*[[z for z in roots if rpow(z, order(g)) == (1 if p else field.one)] for g in gens]):
        chi = {one: field.one}
        ok = True
        frontier = [one]
        while frontier and ok:
            nxt = []
            for s in frontier:
                for g, z in zip(gens, vals):
                    t = int(mul[s, g])
                    v = chi[s] * z
                    v = v % p if p else v
                    if t in chi:
                        if chi[t] != v:
                            ok = False
                            break
                    else:
                        chi[t] = v
                        nxt.append(t)
                if not ok:
                    break
            frontier = nxt
        if ok and all(_same(chi[a] * chi[b], chi[int(mul[a, b])], p) for a in T for b in T):
            chars.append(chi)
    return T, chars


def coordinate_idempotents(ring: FiniteRing, field: Field) -> list[np.ndarray]:
    """Orthogonal idempotents of k[(R, *)] summing to [1], built from ring idempotents
    (Moebius inversion on their semilattice) and characters of p'-units."""
    n, mul = ring.size, ring.mul_table
    idem = [r for r in range(n) if mul[r, r] == r]
    m = len(idem)
    zeta = np.array([[int(mul[s, r] == s) for r in idem] for s in idem], dtype=np.int64)
    # integer inverse of the (unitriangular after sorting) zeta matrix
    order = sorted(range(m), key=lambda i: sum(zeta[:, i]))
    mob = np.zeros((m, m), dtype=np.int64)
    for ri in order:
        # e_r = [r] - sum_{s < r} e_s
        mob[ri, ri] = 1
        for si in order:
            if si != ri and zeta[si, ri]:
                mob[:, ri] -= mob[:, si]
    prim = []
    for ri in range(m):
        v = field.zeros(n)
        for si in range(m):
            if mob[si, ri]:
                v[idem[si]] = field.array([mob[si, ri]])[0] if field.char else field.one * int(mob[si, ri])
        prim.append(v)
    T, chars = _unit_characters(ring, field)
    inv_t = field.one / len(T) if not field.char else pow(len(T), -1, field.char)
    echi = []
    for chi in chars:
        v = field.zeros(n)
        for t in T:
            z = chi[t]
            zinv = pow(int(z), -1, field.char) if field.char else 1 / z
            v[t] = (zinv * inv_t) % field.char if field.char else zinv * inv_t
        echi.append(v)
    out = []
    for a in prim:
        for b in echi:
            c = _convolve(ring, field, a, b)
            if np.any(c != 0):
                out.append(c)
    total = field.zeros(n)
    for c in out:
        total = total + c
    rest = field.zeros(n)
    rest[ring.one] = field.one
    rest = rest - total
    if field.char:
        rest = field.array(rest)
    if np.any(rest != 0):
        out.append(rest)
    _check_family(ring, field, out)
    return out


def _check_family(ring: FiniteRing, field: Field, es: list[np.ndarray]) -> None:
    one = field.zeros(ring.size)
    one[ring.one] = field.one
    total = field.zeros(ring.size)
    for i, a in enumerate(es):
        for j, b in enumerate(es):
            c = _convolve(ring, field, a, b)
            want = a if i == j else field.zeros(ring.size)
            if not np.array_equal(c, want):
                raise StructuralError("idempotent family is not orthogonal")
        total = total + a
    if field.char:
        total = field.array(total)
    if not np.array_equal(total, one):
        raise StructuralError("idempotent family does not sum to 1")


@lru_cache(maxsize=None)
def _coordinate_family(moduli: tuple, field: Field) -> tuple:
    return tuple(coordinate_idempotents(FiniteRing(moduli), field))


def _vector_basis(ring: FiniteRing, field: Field, e: np.ndarray, x: int) -> tuple[np.ndarray, list[int]]:
    """Basis of k[R^x] e where R acts on R^x by scalar multiplication."""
    n = ring.size ** x
    if x == 0:
        rows = field.zeros((1, 1))
        rows[0, 0] = sum(e.tolist()) if not field.char else int(np.sum(e)) % field.char
        if rows[0, 0] == 0:
            return field.zeros((0, 1)), []
        return field.eye(1), [0]
    pos = ring.size ** np.arange(x - 1, -1, -1, dtype=np.int64)
    digits = (np.arange(n, dtype=np.int64)[:, None] // pos) % ring.size  # (n, x)
    M = field.zeros((n, n))
    for r in np.flatnonzero(e):
        img = (ring.mul_table[digits, r] * pos).sum(axis=1)
        M[np.arange(n), img] = M[np.arange(n), img] + e[r]
    if field.char:
        M = field.array(M)
    return field.rref(M)


def _kron_basis(field: Field, parts: list[tuple[np.ndarray, list[int]]], sizes: list[int]):
    B = field.eye(1)
    piv = np.zeros(1, dtype=np.int64)
    for (b, p), s in zip(parts, sizes):
        B = np.kron(B, b)
        if field.char:
            B %= field.char
        piv = (piv[:, None] * s + np.asarray(p, dtype=np.int64)[None, :]).reshape(-1)
    return B, piv


def _trunc_types(cat: FiniteCategory, base: TruncCat, field: Field, op: bool) -> dict[int, list[ProjType]]:
    ring = base.ring
    fam = _coordinate_family(ring.moduli, field)
    R = ring.size
    out = {}
    for c in cat.objects():
        if c == 0:
            out[c] = [full_type(cat, field, 0)]
            continue
        types = []
        diag_idx = {}
        for rs in product(range(R), repeat=c):
            m = np.zeros((c, c), dtype=np.int64)
            m[np.arange(c), np.arange(c)] = rs
            diag_idx[rs] = base.index_of(c, c, m)
        for lab in product(range(len(fam)), repeat=c):
            e = field.zeros(cat.hom_size(c, c))
            supports = [np.flatnonzero(fam[t]) for t in lab]
            for rs in product(*supports):
                coef = field.one
                for t, r in zip(lab, rs):
                    coef = coef * fam[t][r]
                e[diag_idx[rs]] = (e[diag_idx[rs]] + coef) % field.char if field.char else e[diag_idx[rs]] + coef

            def basis(x, lab=lab, c=c):
                parts = [_vector_basis(ring, field, fam[t], x) for t in lab]
                B, piv = _kron_basis(field, parts, [R ** x] * c)
                if op or x == 0:
                    return B, piv
                # tuple of columns -> morphism index (x by c matrices, row-major)
                n = R ** (x * c)
                pos = R ** np.arange(x * c - 1, -1, -1, dtype=np.int64)
                digits = (np.arange(n, dtype=np.int64)[:, None] // pos) % R  # (n, x*c)
                d = digits.reshape(n, x, c)
                colpos = R ** np.arange(x - 1, -1, -1, dtype=np.int64)
                codes = (d * colpos[None, :, None]).sum(axis=1)  # (n, c)
                tpos = (R ** x) ** np.arange(c - 1, -1, -1, dtype=np.int64)
                t_of_m = (codes * tpos).sum(axis=1)
                m_of_t = np.empty(n, dtype=np.int64)
                m_of_t[t_of_m] = np.arange(n)
                return B[:, t_of_m], m_of_t[piv]

            types.append(ProjType(cat, field, c, lab, e, basis))
        out[c] = types
    return out


def _product_types(cat: ProductCat, field: Field, refine: bool) -> dict[int, list[ProjType]]:
    left = projective_types(cat.left, field, refine)
    right = projective_types(cat.right, field, refine)
    out = {}
    for c in cat.objects():
        i, j = cat.split(c)
        types = []
        for tl in left[i]:
            for tr in right[j]:
                e = np.kron(tl.e, tr.e)
                if field.char:
                    e %= field.char

                def basis(x, tl=tl, tr=tr):
                    xi, xj = cat.split(x)
                    Bl, pl = tl.basis(xi)
                    Br, pr = tr.basis(xj)
                    return _kron_basis(field, [(Bl, pl), (Br, pr)], [Bl.shape[1], Br.shape[1]])

                lab = ("full",) if tl.is_full and tr.is_full else (tl.label, tr.label)
                types.append(ProjType(cat, field, c, lab, e, basis))
        out[c] = types
    return out


_TYPE_CACHE: dict = {}


def projective_types(cat: FiniteCategory, field: Field, refine: bool = True) -> dict[int, list[ProjType]]:
    """Per object c, projectives P^c e_1, ..., P^c e_m with P^c = (+) P^c e_i."""
    key = (cat, field, refine)
    if key in _TYPE_CACHE:
        return _TYPE_CACHE[key]
    if refine and isinstance(cat, TruncCat):
        out = _trunc_types(cat, cat, field, op=False)
    elif refine and isinstance(cat, OppositeCat) and isinstance(cat.base, TruncCat):
        out = _trunc_types(cat, cat.base, field, op=True)
    elif isinstance(cat, ProductCat):
        out = _product_types(cat, field, refine)
    else:
        out = {c: [full_type(cat, field, c)] for c in cat.objects()}
    _TYPE_CACHE[key] = out
    return out


def apply_idempotent(e: np.ndarray, images: np.ndarray, field: Field) -> np.ndarray:
    """sum_d e[d] * images[d] for images of one vector under every endomorphism d."""
    sup = np.flatnonzero(e)
    if len(sup) == 0:
        return field.zeros(images.shape[1:])
    if field.char:
        return np.mod(np.tensordot(e[sup], images[sup], axes=(0, 0)), field.char)
    return np.tensordot(e[sup], images[sup], axes=(0, 0))
