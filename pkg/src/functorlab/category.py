"""Finite commutative rings, truncated matrix categories and additive functors between them.

Morphisms i -> j of the truncated category over R are the j x i matrices over R.
They are numbered by the row-major lexicographic order of their entry codes, so the
index of a matrix is its list of entry codes read as a base-|R| numeral.
"""
from __future__ import annotations

import os
from functools import cached_property
from math import gcd, prod
from typing import Sequence

import numpy as np

from .linalg import Field, StructuralError

DEFAULT_CAP = 2**16


class TruncationError(StructuralError):
    """A biproduct or tuple would exceed the truncation bound N."""


class SizingError(RuntimeError):
    """An enumeration or complex would exceed the configured cap."""

    def __init__(self, msg: str, estimates: dict | None = None):
        super().__init__(msg)
        self.estimates = estimates or {}


def enumeration_cap() -> int:
    env = os.environ.get("FUNCTORLAB_CAP")
    return int(env) if env else DEFAULT_CAP


# ---------------------------------------------------------------------------
# rings


class FiniteRing:
    """A finite product ZZ/m_1 x ... x ZZ/m_t with elements coded 0..|R|-1.

    The code of (r_1, ..., r_t) is the mixed-radix numeral with r_1 most significant.
    """

    def __init__(self, moduli: Sequence[int]):
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 2 for m in moduli):
            raise ValueError("each factor must be ZZ/m with m >= 2")
        self.moduli = moduli
        self.size = prod(moduli)
        radix = []
        r = 1
        for m in reversed(moduli):
            radix.append(r)
            r *= m
        self._radix = np.array(radix[::-1], dtype=np.int64)
        res = self.residues(np.arange(self.size))
        self.add_table = self.encode_residues((res[:, None, :] + res[None, :, :]) % np.array(moduli))
        self.mul_table = self.encode_residues((res[:, None, :] * res[None, :, :]) % np.array(moduli))
        self.zero = 0
        self.one = int(self.encode_residues(np.ones(len(moduli), dtype=np.int64)))

    @classmethod
    def cyclic(cls, m: int) -> "FiniteRing":
        return cls((m,))

    @property
    def name(self) -> str:
        return " x ".join(f"Z/{m}" for m in self.moduli)

    def __repr__(self) -> str:
        return f"FiniteRing({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteRing) and other.moduli == self.moduli

    def __hash__(self) -> int:
        return hash(self.moduli)

    @property
    def characteristic(self) -> int:
        out = 1
        for m in self.moduli:
            out = out * m // gcd(out, m)
        return out

    def residues(self, codes) -> np.ndarray:
        """codes (any shape) -> residues with a trailing axis of length t."""
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._radix) % np.array(self.moduli)

    def encode_residues(self, res) -> np.ndarray:
        res = np.asarray(res, dtype=np.int64)
        return (res * self._radix).sum(axis=-1)

    def additive_invariants(self) -> list[int]:
        """Cyclic orders of the additive group, one per factor."""
        return list(self.moduli)

    def is_field(self) -> bool:
        from .linalg import is_prime

        return len(self.moduli) == 1 and is_prime(self.moduli[0])

    def is_semisimple(self) -> bool:
        """Finite product of prime fields."""
        from .linalg import is_prime

        return all(is_prime(m) for m in self.moduli)

    def check_axioms(self) -> None:
        a, m = self.add_table, self.mul_table
        n = self.size
        idx = np.arange(n)
        if not (np.array_equal(a, a.T) and np.array_equal(m, m.T)):
            raise StructuralError("ring tables are not commutative")
        if not np.array_equal(a[a[:, :, None], idx[None, None, :]], a[idx[:, None, None], a[None, :, :]]):
            raise StructuralError("addition is not associative")
        if not np.array_equal(m[m[:, :, None], idx[None, None, :]], m[idx[:, None, None], m[None, :, :]]):
            raise StructuralError("multiplication is not associative")
        lhs = m[idx[:, None, None], a[idx[None, :, None], idx[None, None, :]]]
        rhs = a[m[idx[:, None, None], idx[None, :, None]], m[idx[:, None, None], idx[None, None, :]]]
        if not np.array_equal(lhs, rhs):
            raise StructuralError("multiplication does not distribute")
        if not (np.array_equal(m[self.one], idx) and np.array_equal(a[self.zero], idx)):
            raise StructuralError("unit laws fail")


class RingMap:
    """A ring homomorphism R -> S given by its table on element codes."""

    def __init__(self, src: FiniteRing, dst: FiniteRing, table: Sequence[int]):
        self.src, self.dst = src, dst
        self.table = np.asarray(table, dtype=np.int64)
        if self.table.shape != (src.size,):
            raise StructuralError("ring map table has the wrong length")
        t = self.table
        if t[src.one] != dst.one:
            raise StructuralError("ring map does not preserve 1")
        if not np.array_equal(t[src.add_table], dst.add_table[t[:, None], t[None, :]]):
            raise StructuralError("ring map is not additive")
        if not np.array_equal(t[src.mul_table], dst.mul_table[t[:, None], t[None, :]]):
            raise StructuralError("ring map is not multiplicative")

    @classmethod
    def canonical(cls, src: FiniteRing, dst: FiniteRing) -> "RingMap":
        """The unique map out of a cyclic ring ZZ/m (n mod m |-> n * 1)."""
        if len(src.moduli) != 1:
            raise StructuralError("canonical map needs a cyclic source ring")
        m = src.moduli[0]
        if m % dst.characteristic:
            raise StructuralError(f"no ring map Z/{m} -> {dst.name}")
        res = np.array([[n % d for d in dst.moduli] for n in range(m)], dtype=np.int64)
        return cls(src, dst, dst.encode_residues(res))

    @classmethod
    def projection(cls, src: FiniteRing, factors: Sequence[int]) -> "RingMap":
        dst = FiniteRing([src.moduli[i] for i in factors])
        res = src.residues(np.arange(src.size))[:, list(factors)]
        return cls(src, dst, dst.encode_residues(res))

    def is_surjective(self) -> bool:
        return len(set(self.table.tolist())) == self.dst.size

    def is_identity(self) -> bool:
        return self.src == self.dst and np.array_equal(self.table, np.arange(self.src.size))

    def kernel_size(self) -> int:
        return int(np.sum(self.table == self.dst.zero))


def lemma_char_invertible(r: FiniteRing, s: FiniteRing) -> dict:
    """For finite rings with R (x) S = 0 the characteristic of R is a unit in S.

    R (x)_ZZ S is the sum of ZZ/gcd(m_i, n_j); returns both sides of the implication.
    """
    tensor_zero = all(gcd(m, n) == 1 for m in r.moduli for n in s.moduli)
    char_unit = all(gcd(r.characteristic, n) == 1 for n in s.moduli)
    return {"tensor_zero": tensor_zero, "char_invertible": char_unit, "holds": (not tensor_zero) or char_unit}


# ---------------------------------------------------------------------------
# categories


class FiniteCategory:
    """Interface shared by truncated categories, products and opposites."""

    n_obj: int

    def hom_size(self, a: int, b: int) -> int:
        raise NotImplementedError

    def identity(self, a: int) -> int:
        raise NotImplementedError

    def compose_many(self, a: int, b: int, c: int, us, hs) -> np.ndarray:
        """out[i, j] = index of hs[j] o us[i]  (us in hom(a,b), hs in hom(b,c))."""
        raise NotImplementedError

    @property
    def generators(self) -> list[tuple[int, int, int]]:
        raise NotImplementedError

    def object_label(self, a: int):
        return a

    def objects(self) -> range:
        return range(self.n_obj)

    # derived -------------------------------------------------------------
    def compose_table(self, a: int, b: int, c: int) -> np.ndarray:
        key = (a, b, c)
        cache = self.__dict__.setdefault("_ctab", {})
        if key not in cache:
            cache[key] = self.compose_many(a, b, c, np.arange(self.hom_size(a, b)), np.arange(self.hom_size(b, c)))
        return cache[key]

    def compose(self, a: int, b: int, c: int, u: int, h: int) -> int:
        return int(self.compose_many(a, b, c, [u], [h])[0, 0])

    def post_gen(self, gen: int, a: int) -> np.ndarray:
        """hom(a, s) -> hom(a, t), f |-> g o f, for generator g : s -> t."""
        cache = self.__dict__.setdefault("_post", {})
        key = (gen, a)
        if key not in cache:
            s, t, g = self.generators[gen]
            cache[key] = self.compose_many(a, s, t, np.arange(self.hom_size(a, s)), [g])[:, 0]
        return cache[key]

    def pre_gen(self, gen: int, c: int) -> np.ndarray:
        """hom(t, c) -> hom(s, c), f |-> f o g, for generator g : s -> t."""
        cache = self.__dict__.setdefault("_pre", {})
        key = (gen, c)
        if key not in cache:
            s, t, g = self.generators[gen]
            cache[key] = self.compose_many(s, t, c, [g], np.arange(self.hom_size(t, c)))[0, :]
        return cache[key]

    def gens_from(self, a: int) -> list[int]:
        cache = self.__dict__.setdefault("_gens_from", {})
        if a not in cache:
            cache[a] = [i for i, (s, _, _) in enumerate(self.generators) if s == a]
        return cache[a]

    def tree(self, a: int) -> dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """Breadth-first words for every morphism out of ``a``.

        Returns {x: (order, parent_obj, parent_idx, gen)} style arrays per target x:
        ``parent[x][f] = (y, h, g)`` with f = gen_g o h and h in hom(a, y); the identity
        has g = -1.  Also returns the global visiting order.
        """
        cache = self.__dict__.setdefault("_tree", {})
        if a in cache:
            return cache[a]
        pobj = {x: np.full(self.hom_size(a, x), -2, dtype=np.int64) for x in self.objects()}
        pidx = {x: np.full(self.hom_size(a, x), -1, dtype=np.int64) for x in self.objects()}
        pgen = {x: np.full(self.hom_size(a, x), -1, dtype=np.int64) for x in self.objects()}
        ida = self.identity(a)
        pobj[a][ida] = -1
        order: list[tuple[int, np.ndarray]] = []
        frontier = {a: np.array([ida])}
        order.append((a, np.array([ida])))
        while frontier:
            new: dict[int, list[np.ndarray]] = {}
            for y, fs in frontier.items():
                for gi in self.gens_from(y):
                    _, t, _ = self.generators[gi]
                    imgs = self.post_gen(gi, a)[fs]
                    fresh = pobj[t][imgs] == -2
                    if not fresh.any():
                        continue
                    imgs_f, src_f = imgs[fresh], fs[fresh]
                    imgs_u, first = np.unique(imgs_f, return_index=True)
                    still = pobj[t][imgs_u] == -2
                    imgs_u, first = imgs_u[still], first[still]
                    pobj[t][imgs_u] = y
                    pidx[t][imgs_u] = src_f[first]
                    pgen[t][imgs_u] = gi
                    new.setdefault(t, []).append(imgs_u)
            frontier = {t: np.concatenate(v) for t, v in new.items()}
            for t in sorted(frontier):
                order.append((t, frontier[t]))
        for x in self.objects():
            if (pobj[x] == -2).any():
                raise StructuralError(f"generators do not reach all of hom({a},{x})")
        cache[a] = (order, pobj, pidx, pgen)
        return cache[a]

    def word(self, a: int, x: int, f: int) -> list[int]:
        """Generator ids g_1, ..., g_r with f = g_r o ... o g_1."""
        _, pobj, pidx, pgen = self.tree(a)
        out = []
        while pobj[x][f] != -1:
            out.append(int(pgen[x][f]))
            x, f = int(pobj[x][f]), int(pidx[x][f])
        return out[::-1]

    def check_axioms(self, exhaustive_limit: int = 3_000_000) -> None:
        """Associativity and identity laws, exhaustively when the triple count is small."""
        objs = list(self.objects())
        for a in objs:
            for b in objs:
                ids = self.compose_many(a, a, b, [self.identity(a)], np.arange(self.hom_size(a, b)))[0]
                if not np.array_equal(ids, np.arange(self.hom_size(a, b))):
                    raise StructuralError(f"right identity fails on hom({a},{b})")
                idb = self.compose_many(a, b, b, np.arange(self.hom_size(a, b)), [self.identity(b)])[:, 0]
                if not np.array_equal(idb, np.arange(self.hom_size(a, b))):
                    raise StructuralError(f"left identity fails on hom({a},{b})")
        rng = np.random.default_rng(0)
        for a in objs:
            for b in objs:
                for c in objs:
                    for d in objs:
                        n1, n2, n3 = self.hom_size(a, b), self.hom_size(b, c), self.hom_size(c, d)
                        if n1 * n2 * n3 <= exhaustive_limit:
                            u, h, w = np.arange(n1), np.arange(n2), np.arange(n3)
                        else:
                            u, h, w = (rng.integers(0, n, size=min(n, 40)) for n in (n1, n2, n3))
                        hu = self.compose_many(a, b, c, u, h)  # (u, h)
                        wh = self.compose_many(b, c, d, h, w)  # (h, w)
                        left = np.stack([self.compose_many(a, c, d, hu[:, j], w) for j in range(len(h))], axis=1)
                        right = np.stack([self.compose_many(a, b, d, u, wh[j, :]) for j in range(len(h))], axis=1)
                        if not np.array_equal(left, right):
                            raise StructuralError(f"composition not associative on {a}->{b}->{c}->{d}")


class TruncCat(FiniteCategory):
    """P_R^{<=N}: objects 0..N (ranks), hom(i, j) = j x i matrices over R."""

    def __init__(self, ring: FiniteRing, N: int, cap: int | None = None):
        if N < 0:
            raise ValueError("N must be nonnegative")
        cap = enumeration_cap() if cap is None else cap
        biggest = ring.size ** (N * N)
        if biggest > cap:
            raise SizingError(f"instance too large: |hom({N},{N})| = {biggest} exceeds cap {cap}",
                              {"hom_size": biggest, "cap": cap})
        self.ring = ring
        self.N = N
        self.n_obj = N + 1
        self._mats: dict[tuple[int, int], np.ndarray] = {}
        self._pos: dict[tuple[int, int], np.ndarray] = {}

    def __repr__(self) -> str:
        return f"TruncCat({self.ring.name}, N={self.N})"

    @property
    def key(self):
        return ("trunc", self.ring.moduli, self.N)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncCat) and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def hom_size(self, a: int, b: int) -> int:
        return self.ring.size ** (a * b)

    def _positions(self, a: int, b: int) -> np.ndarray:
        if (a, b) not in self._pos:
            n = a * b
            self._pos[(a, b)] = self.ring.size ** np.arange(n - 1, -1, -1, dtype=np.int64)
        return self._pos[(a, b)]

    def matrices(self, a: int, b: int) -> np.ndarray:
        """All of hom(a, b) as residues, shape (|hom|, t, b, a)."""
        if (a, b) not in self._mats:
            n = self.hom_size(a, b)
            codes = (np.arange(n, dtype=np.int64)[:, None] // self._positions(a, b)) % self.ring.size
            res = self.ring.residues(codes)  # (n, b*a, t)
            self._mats[(a, b)] = np.ascontiguousarray(
                res.reshape(n, b, a, len(self.ring.moduli)).transpose(0, 3, 1, 2))
        return self._mats[(a, b)]

    def encode(self, a: int, b: int, mats: np.ndarray) -> np.ndarray:
        """Residue arrays (..., t, b, a) -> morphism indices."""
        mats = np.asarray(mats, dtype=np.int64)
        mods = np.array(self.ring.moduli).reshape(-1, 1, 1)
        mats = mats % mods
        codes = self.ring.encode_residues(np.moveaxis(mats, -3, -1))  # (..., b, a)
        flat = codes.reshape(codes.shape[:-2] + (a * b,))
        return (flat * self._positions(a, b)).sum(axis=-1)

    def matrix(self, a: int, b: int, f: int) -> list:
        """Morphism as a nested list of ring element codes (rows of a b x a matrix)."""
        res = self.matrices(a, b)[f]
        codes = self.ring.encode_residues(np.moveaxis(res, 0, -1))
        return codes.tolist()

    def index_of(self, a: int, b: int, codes) -> int:
        """Morphism index of a b x a matrix given by ring element codes."""
        codes = np.asarray(codes, dtype=np.int64).reshape(b, a)
        res = np.moveaxis(self.ring.residues(codes), -1, 0)
        return int(self.encode(a, b, res))

    def identity(self, a: int) -> int:
        return self.index_of(a, a, np.eye(a, dtype=np.int64) * self.ring.one)

    def zero(self, a: int, b: int) -> int:
        return 0

    def compose_many(self, a, b, c, us, hs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        hs = np.asarray(hs, dtype=np.int64)
        if a == 0 or b == 0 or c == 0:
            # the composite factors through the zero object, whose index is 0
            return np.zeros((len(us), len(hs)), dtype=np.int64)
        U = self.matrices(a, b)[us]  # (nu, t, b, a)
        H = self.matrices(b, c)[hs]  # (nh, t, c, b)
        out = np.empty((len(us), len(hs)), dtype=np.int64)
        step = max(1, 2_000_000 // max(1, len(hs) * c * a * len(self.ring.moduli)))
        for s in range(0, len(us), step):
            prodm = np.matmul(H[None, :, :, :, :], U[s:s + step, None, :, :, :])
            out[s:s + step] = self.encode(a, c, prodm)
        return out

    def add(self, a: int, b: int, f, g) -> np.ndarray:
        m = self.matrices(a, b)
        return self.encode(a, b, m[np.asarray(f)] + m[np.asarray(g)])

    def scale(self, a: int, b: int, r: int, f) -> np.ndarray:
        """r * f entrywise for a ring element code r."""
        m = self.matrices(a, b)[np.asarray(f)]
        rr = self.ring.residues(r).reshape(-1, 1, 1)
        return self.encode(a, b, m * rr)

    def hom_group_invariants(self, a: int, b: int) -> list[int]:
        return [m for m in self.ring.moduli for _ in range(a * b)]

    def exponent(self, a: int, b: int) -> int:
        return self.ring.characteristic if a * b else 1

    # distinguished morphisms ------------------------------------------
    def injection(self, i: int, j: int, which: int) -> int:
        """Canonical injection of summand ``which`` (0 or 1) into i + j."""
        s = self.biproduct(i, j)
        m = np.zeros((s, i if which == 0 else j), dtype=np.int64)
        off = 0 if which == 0 else i
        for t in range(m.shape[1]):
            m[off + t, t] = self.ring.one
        return self.index_of(m.shape[1], s, m)

    def projection(self, i: int, j: int, which: int) -> int:
        s = self.biproduct(i, j)
        m = np.zeros((i if which == 0 else j, s), dtype=np.int64)
        off = 0 if which == 0 else i
        for t in range(m.shape[0]):
            m[t, off + t] = self.ring.one
        return self.index_of(s, m.shape[0], m)

    def biproduct(self, i: int, j: int) -> int:
        if i + j > self.N:
            raise TruncationError(f"{i} (+) {j} = {i + j} exceeds truncation N = {self.N}; raise N")
        return i + j

    def block_matrix(self, rows: Sequence[int], cols: Sequence[int], blocks) -> np.ndarray:
        """Assemble a block matrix of ring codes; blocks[r][c] is a code matrix or 0."""
        out = np.zeros((sum(rows), sum(cols)), dtype=np.int64)
        ro = np.cumsum([0] + list(rows))
        co = np.cumsum([0] + list(cols))
        for r in range(len(rows)):
            for c in range(len(cols)):
                blk = blocks[r][c]
                if isinstance(blk, int) and blk == 0:
                    continue
                out[ro[r]:ro[r + 1], co[c]:co[c + 1]] = np.asarray(blk)
        return out

    @cached_property
    def generators(self) -> list[tuple[int, int, int]]:
        """A generating set found greedily.

        Adjacent inclusions and projections come first; then, rank by rank, candidate
        endomorphisms (diagonal scalings, elementary matrices, transpositions, then all
        matrices in index order) are added whenever they are not yet composites.
        """
        gens: list[tuple[int, int, int]] = []
        for i in range(self.N):
            gens.append((i, i + 1, self.injection(i, 1, 0)))
            gens.append((i + 1, i, self.projection(i, 1, 0)))
        for n in range(1, self.N + 1):
            reach = self._closure_end(n, gens)
            for f in self._candidates(n):
                if reach.all():
                    break
                if reach[f]:
                    continue
                gens.append((n, n, f))
                reach = self._closure_end(n, gens)
        return gens

    def _candidates(self, n: int):
        one = self.ring.one
        eye = np.eye(n, dtype=np.int64) * one
        for r in range(self.ring.size):
            m = eye.copy()
            m[0, 0] = r
            yield self.index_of(n, n, m)
        for i in range(n):
            for j in range(n):
                if i != j:
                    m = eye.copy()
                    m[i, j] = one
                    yield self.index_of(n, n, m)
        if n > 1:
            m = np.roll(eye, 1, axis=0)
            yield self.index_of(n, n, m)
        yield from range(self.hom_size(n, n))

    def _closure_end(self, n: int, gens) -> np.ndarray:
        """Which endomorphisms of n are composites of the given generators."""
        seen = {x: np.zeros(self.hom_size(n, x), dtype=bool) for x in range(self.N + 1)}
        ident = self.identity(n)
        seen[n][ident] = True
        frontier = {n: np.array([ident])}
        while frontier:
            new: dict[int, list] = {}
            for y, fs in frontier.items():
                for (s, t, g) in gens:
                    if s != y:
                        continue
                    imgs = np.unique(self.compose_many(n, s, t, fs, [g])[:, 0])
                    fresh = imgs[~seen[t][imgs]]
                    if len(fresh):
                        seen[t][fresh] = True
                        new.setdefault(t, []).append(fresh)
            frontier = {t: np.unique(np.concatenate(v)) for t, v in new.items()}
        return seen[n]


class ProductCat(FiniteCategory):
    """C x D with object (i, j) numbered i * |ob D| + j."""

    def __init__(self, left: FiniteCategory, right: FiniteCategory):
        self.left, self.right = left, right
        self.n_obj = left.n_obj * right.n_obj

    def __repr__(self) -> str:
        return f"Product({self.left!r}, {self.right!r})"

    @property
    def key(self):
        return ("product", self.left.key, self.right.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductCat) and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def split(self, a: int) -> tuple[int, int]:
        return divmod(a, self.right.n_obj)

    def pair(self, i: int, j: int) -> int:
        return i * self.right.n_obj + j

    def object_label(self, a: int):
        return self.split(a)

    def hom_size(self, a, b) -> int:
        (a1, a2), (b1, b2) = self.split(a), self.split(b)
        return self.left.hom_size(a1, b1) * self.right.hom_size(a2, b2)

    def split_mor(self, a, b, f):
        (a2, b2) = self.split(a)[1], self.split(b)[1]
        return np.divmod(np.asarray(f), self.right.hom_size(a2, b2))

    def pair_mor(self, a, b, f1, f2):
        a2, b2 = self.split(a)[1], self.split(b)[1]
        return np.asarray(f1) * self.right.hom_size(a2, b2) + np.asarray(f2)

    def identity(self, a) -> int:
        a1, a2 = self.split(a)
        return int(self.pair_mor(a, a, self.left.identity(a1), self.right.identity(a2)))

    def compose_many(self, a, b, c, us, hs) -> np.ndarray:
        (a1, a2), (b1, b2), (c1, c2) = self.split(a), self.split(b), self.split(c)
        u1, u2 = self.split_mor(a, b, us)
        h1, h2 = self.split_mor(b, c, hs)
        l1 = self._uniq_compose(self.left, a1, b1, c1, u1, h1)
        l2 = self._uniq_compose(self.right, a2, b2, c2, u2, h2)
        return l1 * self.right.hom_size(a2, c2) + l2

    @staticmethod
    def _uniq_compose(cat, a, b, c, us, hs):
        uu, ui = np.unique(np.asarray(us, dtype=np.int64), return_inverse=True)
        hh, hi = np.unique(np.asarray(hs, dtype=np.int64), return_inverse=True)
        tab = cat.compose_many(a, b, c, uu, hh)
        return tab[ui.reshape(-1)[:, None], hi.reshape(-1)[None, :]]

    @cached_property
    def generators(self) -> list[tuple[int, int, int]]:
        out = []
        for (s, t, g) in self.left.generators:
            for j in self.right.objects():
                out.append((self.pair(s, j), self.pair(t, j),
                            int(self.pair_mor(self.pair(s, j), self.pair(t, j), g, self.right.identity(j)))))
        for (s, t, g) in self.right.generators:
            for i in self.left.objects():
                out.append((self.pair(i, s), self.pair(i, t),
                            int(self.pair_mor(self.pair(i, s), self.pair(i, t), self.left.identity(i), g))))
        return out


class OppositeCat(FiniteCategory):
    def __init__(self, base: FiniteCategory):
        self.base = base
        self.n_obj = base.n_obj

    def __repr__(self) -> str:
        return f"Opposite({self.base!r})"

    @property
    def key(self):
        return ("op", self.base.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, OppositeCat) and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def object_label(self, a: int):
        return self.base.object_label(a)

    def hom_size(self, a, b) -> int:
        return self.base.hom_size(b, a)

    def identity(self, a) -> int:
        return self.base.identity(a)

    def compose_many(self, a, b, c, us, hs) -> np.ndarray:
        # h o_op u = u o h in the base, with h : c -> b and u : b -> a there
        return self.base.compose_many(c, b, a, hs, us).T

    @cached_property
    def generators(self) -> list[tuple[int, int, int]]:
        return [(t, s, g) for (s, t, g) in self.base.generators]

    def post_gen(self, gen, a):
        return self.base.pre_gen(gen, a)

    def pre_gen(self, gen, c):
        return self.base.post_gen(gen, c)


def opposite(cat: FiniteCategory) -> FiniteCategory:
    return cat.base if isinstance(cat, OppositeCat) else OppositeCat(cat)


def make_trunc_cat(ring: FiniteRing, N: int, cap: int | None = None) -> TruncCat:
    return TruncCat(ring, N, cap)


def biproduct(cat: TruncCat, i: int, j: int) -> int:
    return cat.biproduct(i, j)


# ---------------------------------------------------------------------------
# functors between categories


class CatFunctor:
    """An additive functor between finite categories, given on objects and hom-sets."""

    src: FiniteCategory
    dst: FiniteCategory
    kind: str = "functor"

    def obj(self, x: int) -> int:
        raise NotImplementedError

    def hom_map(self, a: int, b: int) -> np.ndarray:
        """Array sending hom_src(a, b) indices to hom_dst(obj a, obj b) indices."""
        raise NotImplementedError

    def mor(self, a: int, b: int, f):
        return self.hom_map(a, b)[np.asarray(f)]

    def describe(self) -> dict:
        return {"kind": self.kind, "src": repr(self.src), "dst": repr(self.dst)}

    def check_functorial(self, exhaustive_limit: int = 2_000_000) -> None:
        src = self.src
        rng = np.random.default_rng(1)
        for a in src.objects():
            if self.mor(a, a, src.identity(a)) != self.dst.identity(self.obj(a)):
                raise StructuralError(f"functor does not preserve the identity of {a}")
            for b in src.objects():
                for c in src.objects():
                    n1, n2 = src.hom_size(a, b), src.hom_size(b, c)
                    if n1 * n2 <= exhaustive_limit:
                        us, hs = np.arange(n1), np.arange(n2)
                    else:
                        us, hs = rng.integers(0, n1, 300), rng.integers(0, n2, 300)
                    lhs = self.mor(a, c, src.compose_many(a, b, c, us, hs))
                    fa, fb, fc = self.obj(a), self.obj(b), self.obj(c)
                    rhs = self.dst.compose_many(fa, fb, fc, self.mor(a, b, us), self.mor(b, c, hs))
                    if not np.array_equal(lhs, rhs):
                        raise StructuralError(f"functor not compatible with composition on {a}->{b}->{c}")


class IdentityFunctor(CatFunctor):
    kind = "identity"

    def __init__(self, cat: FiniteCategory):
        self.src = self.dst = cat

    def obj(self, x):
        return x

    def hom_map(self, a, b):
        return np.arange(self.src.hom_size(a, b))


class QuotientFunctor(CatFunctor):
    """Entrywise application of a surjective ring map; identity on objects."""

    kind = "quotient"

    def __init__(self, src: TruncCat, ringmap: RingMap, dst: TruncCat | None = None):
        if ringmap.src != src.ring:
            raise StructuralError("ring map source differs from the category's ring")
        if not ringmap.is_surjective():
            raise StructuralError("quotient functors need a surjective ring map")
        self.src = src
        self.ringmap = ringmap
        self.dst = dst if dst is not None else TruncCat(ringmap.dst, src.N)
        if self.dst.ring != ringmap.dst or self.dst.N != src.N:
            raise StructuralError("target category must be over the image ring with the same N")
        self._maps: dict = {}

    def obj(self, x):
        return x

    def hom_map(self, a, b):
        if (a, b) not in self._maps:
            mats = self.src.matrices(a, b)
            codes = self.src.ring.encode_residues(np.moveaxis(mats, 1, -1))
            img = self.ringmap.table[codes]
            res = np.moveaxis(self.dst.ring.residues(img), -1, 1)
            self._maps[(a, b)] = self.dst.encode(a, b, res)
        return self._maps[(a, b)]

    def describe(self) -> dict:
        return {"kind": "quotient", "src": repr(self.src), "dst": repr(self.dst),
                "ring_map": f"{self.ringmap.src.name} -> {self.ringmap.dst.name}"}


def quotient_functor(src: TruncCat, ringmap: RingMap, dst: TruncCat | None = None) -> CatFunctor:
    if ringmap.is_identity():
        return IdentityFunctor(src)
    return QuotientFunctor(src, ringmap, dst)


class DiagonalFunctor(CatFunctor):
    kind = "diagonal"

    def __init__(self, cat: FiniteCategory):
        self.src = cat
        self.dst = ProductCat(cat, cat)

    def obj(self, x):
        return self.dst.pair(x, x)

    def hom_map(self, a, b):
        f = np.arange(self.src.hom_size(a, b))
        return self.dst.pair_mor(self.obj(a), self.obj(b), f, f)


class SumFunctor(CatFunctor):
    """(x, y) |-> x + y and (f, g) |-> block diagonal, into a truncation with N' >= 2N."""

    kind = "sum"

    def __init__(self, cat: TruncCat, target: TruncCat | None = None):
        self.base = cat
        self.src = ProductCat(cat, cat)
        self.dst = target if target is not None else TruncCat(cat.ring, 2 * cat.N)
        if self.dst.ring != cat.ring or self.dst.N < 2 * cat.N:
            raise TruncationError(f"sum functor needs truncation >= {2 * cat.N}")
        self._maps: dict = {}

    def obj(self, x):
        i, j = self.src.split(x)
        return i + j

    def hom_map(self, a, b):
        if (a, b) not in self._maps:
            (a1, a2), (b1, b2) = self.src.split(a), self.src.split(b)
            f1, f2 = self.src.split_mor(a, b, np.arange(self.src.hom_size(a, b)))
            m1 = self.base.matrices(a1, b1)[f1]
            m2 = self.base.matrices(a2, b2)[f2]
            n, t = len(f1), len(self.base.ring.moduli)
            big = np.zeros((n, t, b1 + b2, a1 + a2), dtype=np.int64)
            big[:, :, :b1, :a1] = m1
            big[:, :, b1:, a1:] = m2
            self._maps[(a, b)] = self.dst.encode(a1 + a2, b1 + b2, big)
        return self._maps[(a, b)]


class InclusionFunctor(CatFunctor):
    """P_R^{<=N} into P_R^{<=N'} for N <= N'."""

    kind = "inclusion"

    def __init__(self, src: TruncCat, dst: TruncCat):
        if src.ring != dst.ring or src.N > dst.N:
            raise StructuralError("inclusion needs the same ring and N <= N'")
        self.src, self.dst = src, dst

    def obj(self, x):
        return x

    def hom_map(self, a, b):
        return np.arange(self.src.hom_size(a, b))


class CompositeFunctor(CatFunctor):
    """second o first."""

    kind = "composite"

    def __init__(self, first: CatFunctor, second: CatFunctor):
        if first.dst != second.src:
            raise StructuralError("composite functor: categories do not match")
        self.first, self.second = first, second
        self.src, self.dst = first.src, second.dst

    def obj(self, x):
        return self.second.obj(self.first.obj(x))

    def hom_map(self, a, b):
        return self.second.hom_map(self.first.obj(a), self.first.obj(b))[self.first.hom_map(a, b)]


class OppositeFunctor(CatFunctor):
    kind = "opposite"

    def __init__(self, phi: CatFunctor):
        self.phi = phi
        self.src = opposite(phi.src)
        self.dst = opposite(phi.dst)

    def obj(self, x):
        return self.phi.obj(x)

    def hom_map(self, a, b):
        return self.phi.hom_map(b, a)


def diagonal_morphism(cat: TruncCat, x: int) -> int:
    """delta_x : x -> x (+) x, the matrix [I; I]."""
    big = cat.biproduct(x, x)
    one = cat.ring.one
    m = np.concatenate([np.eye(x, dtype=np.int64), np.eye(x, dtype=np.int64)], axis=0) * one
    return cat.index_of(x, big, m)


def sum_morphism(cat: TruncCat, x: int) -> int:
    """sigma_x : x (+) x -> x, the matrix [I I]."""
    big = cat.biproduct(x, x)
    one = cat.ring.one
    m = np.concatenate([np.eye(x, dtype=np.int64), np.eye(x, dtype=np.int64)], axis=1) * one
    return cat.index_of(big, x, m)


# ---------------------------------------------------------------------------
# k-triviality


def check_k_trivial(cat: TruncCat, k: Field) -> tuple[bool, tuple[int, int] | None]:
    """k (x)_ZZ hom(x, y) = 0 for all x, y; otherwise a failing pair."""
    for x in cat.objects():
        for y in cat.objects():
            e = cat.exponent(x, y)
            if e == 1:
                continue
            if k.char != 0 and e % k.char == 0:
                return False, (x, y)
    return True, None


def tensor_field_dim(invariants: Sequence[int], k: Field) -> int:
    """dim k (x)_ZZ (sum of ZZ/d)."""
    if k.char == 0:
        return sum(1 for d in invariants if d == 0)
    return sum(1 for d in invariants if d == 0 or d % k.char == 0)


def tor1_field_dim(invariants: Sequence[int], k: Field) -> int:
    if k.char == 0:
        return 0
    return sum(1 for d in invariants if d != 0 and d % k.char == 0)
