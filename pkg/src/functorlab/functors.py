"""Functors from a finite category to finite dimensional vector spaces.

A FunctorRep stores one matrix per generator of the category; the value on any
other morphism is the product along a breadth-first word.  Functors coming from
maps of sets (standard projectives, linearizations) also keep the index maps,
which makes pushing vectors around cheap and lets large values stay implicit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .category import (
    CatFunctor,
    FiniteCategory,
    OppositeCat,
    ProductCat,
    SizingError,
    TruncCat,
    opposite,
)
from .linalg import Field, StructuralError

ACTION_CAP = 20_000_000


def _batched(field: Field, m: np.ndarray, x: np.ndarray) -> np.ndarray:
    """m @ x[i] for every i; m is (p, q), x is (n, q, r)."""
    if x.shape[0] == 0 or m.shape[0] == 0 or x.shape[2] == 0:
        return field.zeros((x.shape[0], m.shape[0], x.shape[2]))
    if m.shape[1] == 0:
        return field.zeros((x.shape[0], m.shape[0], x.shape[2]))
    n, q, r = x.shape
    flat = np.moveaxis(x, 0, 1).reshape(q, n * r)
    out = field.matmul(m, flat).reshape(m.shape[0], n, r)
    return np.moveaxis(out, 0, 1)


class FunctorRep:
    """A functor cat -> field-Vect with named bases.

    ``gens[i]`` is the matrix of generator i (shape dims[t] x dims[s]); ``set_maps[i]``
    optionally gives it as a map of basis indices.  At least one of the two is needed.
    """

    def __init__(self, cat: FiniteCategory, field: Field, dims: Sequence[int],
                 gens: Sequence[np.ndarray] | None = None, set_maps: Sequence[np.ndarray] | None = None,
                 labels: Sequence[Sequence] | None = None, name: str = "", validate: bool = True):
        self.cat = cat
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != cat.n_obj:
            raise StructuralError("one dimension per object is required")
        if gens is None and set_maps is None:
            raise StructuralError("need generator matrices or set maps")
        self._gens = None if gens is None else [field.array(g).reshape(self.dims[t], self.dims[s])
                                                for g, (s, t, _) in zip(gens, cat.generators)]
        self.set_maps = None if set_maps is None else [np.asarray(m, dtype=np.int64) for m in set_maps]
        self.labels = None if labels is None else [list(l) for l in labels]
        self.name = name
        self._push_cache: dict = {}
        self._action_cache: dict = {}
        n = len(cat.generators)
        if (self._gens is not None and len(self._gens) != n) or (self.set_maps is not None and len(self.set_maps) != n):
            raise StructuralError("one matrix per category generator is required")
        if self.set_maps is not None:
            for m, (s, t, _) in zip(self.set_maps, cat.generators):
                if m.shape != (self.dims[s],) or (len(m) and (m.min() < 0 or m.max() >= self.dims[t])):
                    raise StructuralError("set map has the wrong shape or range")
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"FunctorRep({self.name or '?'}, dims={self.dims})"

    # basic data ----------------------------------------------------------
    def dim(self, x: int) -> int:
        return self.dims[x]

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return not any(self.dims)

    def gen_matrix(self, i: int) -> np.ndarray:
        if self._gens is None:
            self._gens = [None] * len(self.cat.generators)
        if self._gens[i] is None:
            s, t, _ = self.cat.generators[i]
            m = self.field.zeros((self.dims[t], self.dims[s]))
            m[self.set_maps[i], np.arange(self.dims[s])] = self.field.one
            self._gens[i] = m
        return self._gens[i]

    @property
    def gens(self) -> list[np.ndarray]:
        return [self.gen_matrix(i) for i in range(len(self.cat.generators))]

    def mor(self, a: int, b: int, f: int) -> np.ndarray:
        """Matrix of F(f) for f in hom(a, b)."""
        m = self.field.eye(self.dims[a])
        for g in self.cat.word(a, b, int(f)):
            m = self.field.matmul(self.gen_matrix(g), m)
        return m

    def set_mor(self, a: int, b: int, f: int) -> np.ndarray:
        """Index map of F(f) for set-like functors."""
        m = np.arange(self.dims[a])
        for g in self.cat.word(a, b, int(f)):
            m = self.set_maps[g][m]
        return m

    # actions on all morphisms ----------------------------------------------
    def push(self, a: int, V: np.ndarray, targets=None) -> dict[int, np.ndarray]:
        """Images of the columns of V (dims[a] x r) under every morphism out of ``a``.

        Returns {x: array (|hom(a,x)|, dims[x], r)}.
        """
        V = self.field.array(V)
        if V.ndim == 1:
            V = V.reshape(-1, 1)
        r = V.shape[1]
        cat, field = self.cat, self.field
        order, pobj, pidx, pgen = cat.tree(a)
        out = {x: field.zeros((cat.hom_size(a, x), self.dims[x], r)) for x in cat.objects()}
        out[a][cat.identity(a)] = V
        for t, fs in order[1:]:
            gens = pgen[t][fs]
            for g in np.unique(gens):
                sel = fs[gens == g]
                s = cat.generators[g][0]
                src = out[s][pidx[t][sel]]
                if self.set_maps is not None:
                    new = field.zeros((len(sel), self.dims[t], r))
                    np.add.at(new, (slice(None), self.set_maps[g]), src)
                    out[t][sel] = field.array(new) if field.char else new
                else:
                    out[t][sel] = _batched(field, self.gen_matrix(g), src)
        return out

    def action(self, a: int) -> dict[int, np.ndarray]:
        """{x: array of all F(f), f in hom(a, x)}, shape (|hom|, dims[x], dims[a])."""
        if a not in self._action_cache:
            size = sum(self.cat.hom_size(a, x) * self.dims[x] for x in self.cat.objects()) * self.dims[a]
            if size > ACTION_CAP:
                raise SizingError(f"action arrays out of object {a} would hold {size} entries")
            self._action_cache[a] = self.push(a, self.field.eye(self.dims[a]))
        return self._action_cache[a]

    def validate(self) -> None:
        """F(g o f) = F(g) F(f) for every generator g and every morphism f.

        Together with F(id) = id (the empty word) this is equivalent to functoriality
        on all composable pairs.
        """
        cat, field = self.cat, self.field
        for a in cat.objects():
            if self.dims[a] == 0:
                continue
            if self.set_maps is not None:
                for gi, (s, t, _) in enumerate(cat.generators):
                    imgs = self._set_push(a)
                    lhs = imgs[t][cat.post_gen(gi, a)]
                    rhs = self.set_maps[gi][imgs[s]]
                    if not np.array_equal(lhs, rhs):
                        raise StructuralError(f"set maps are not functorial at generator {gi}")
                continue
            act = self.action(a)
            for gi, (s, t, _) in enumerate(cat.generators):
                lhs = act[t][cat.post_gen(gi, a)]
                rhs = _batched(field, self.gen_matrix(gi), act[s])
                if not np.array_equal(lhs, rhs):
                    raise StructuralError(f"not functorial: generator {gi} from object {a}")

    def _set_push(self, a: int) -> dict[int, np.ndarray]:
        """Index images of all basis vectors: {x: (|hom(a,x)|, dims[a])}."""
        key = ("set", a)
        if key in self._push_cache:
            return self._push_cache[key]
        cat = self.cat
        order, pobj, pidx, pgen = cat.tree(a)
        out = {x: np.full((cat.hom_size(a, x), self.dims[a]), -1, dtype=np.int64) for x in cat.objects()}
        out[a][cat.identity(a)] = np.arange(self.dims[a])
        for t, fs in order[1:]:
            gens = pgen[t][fs]
            for g in np.unique(gens):
                sel = fs[gens == g]
                s = cat.generators[g][0]
                out[t][sel] = self.set_maps[g][out[s][pidx[t][sel]]]
        self._push_cache[key] = out
        return out

    def describe(self) -> dict:
        return {"name": self.name, "dims": list(self.dims), "field": self.field.tag}


# ---------------------------------------------------------------------------
# group-valued functors and linearization


@dataclass
class AbGroupFunctor:
    """A functor to finite abelian groups, elements numbered per object.

    ``maps[i]`` sends element indices along generator i; ``add[x]`` is the addition
    table of G(x) (optional, used for additivity checks); ``zero[x]`` the neutral element.
    """

    cat: FiniteCategory
    sizes: tuple[int, ...]
    maps: list[np.ndarray]
    zero: tuple[int, ...]
    add: list[np.ndarray] | None = None
    labels: list | None = None
    name: str = ""


def hom_group_functor(cat: TruncCat, a: int) -> AbGroupFunctor:
    """Hom(a, -) with entrywise addition."""
    sizes = tuple(cat.hom_size(a, x) for x in cat.objects())
    maps = [cat.post_gen(g, a) for g in range(len(cat.generators))]
    adds = []
    for x in cat.objects():
        n = sizes[x]
        idx = np.arange(n)
        adds.append(cat.add(a, x, idx[:, None], idx[None, :]) if n <= 4096 else None)
    return AbGroupFunctor(cat, sizes, maps, tuple(0 for _ in sizes), adds, name=f"Hom({a},-)")


def hom_quotient_functor(phi: CatFunctor, a: int) -> AbGroupFunctor:
    """x |-> Hom_D(a, phi x) on the source of phi."""
    src, dst = phi.src, phi.dst
    sizes = tuple(dst.hom_size(a, phi.obj(x)) for x in src.objects())
    maps = []
    for (s, t, g) in src.generators:
        pg = int(phi.mor(s, t, g))
        fs, ft = phi.obj(s), phi.obj(t)
        maps.append(dst.compose_many(a, fs, ft, np.arange(dst.hom_size(a, fs)), [pg])[:, 0])
    return AbGroupFunctor(src, sizes, maps, tuple(0 for _ in sizes), name=f"Hom({a},phi(-))")


def constant_group_functor(cat: FiniteCategory, size: int = 1) -> AbGroupFunctor:
    maps = [np.arange(size) for _ in cat.generators]
    return AbGroupFunctor(cat, tuple(size for _ in cat.objects()), maps, tuple(0 for _ in cat.objects()))


def linearize(G: AbGroupFunctor, field: Field, validate: bool = True) -> FunctorRep:
    labels = [[("elt", x, i) for i in range(n)] for x, n in enumerate(G.sizes)]
    return FunctorRep(G.cat, field, G.sizes, set_maps=G.maps, labels=labels,
                      name=f"k[{G.name}]", validate=validate)


# ---------------------------------------------------------------------------
# constructors


def standard_projective(cat: FiniteCategory, c: int, field: Field, validate: bool = True) -> FunctorRep:
    """P^c = k[cat(c, -)]; basis at x labelled by morphisms c -> x."""
    dims = [cat.hom_size(c, x) for x in cat.objects()]
    maps = [cat.post_gen(g, c) for g in range(len(cat.generators))]
    labels = [[("mor", c, x, f) for f in range(n)] for x, n in enumerate(dims)]
    return FunctorRep(cat, field, dims, set_maps=maps, labels=labels, name=f"P^{cat.object_label(c)}",
                      validate=validate)


def standard_projective_op(cat: FiniteCategory, c: int, field: Field, validate: bool = True) -> FunctorRep:
    """k[cat(-, c)] as a functor on the opposite category."""
    F = standard_projective(opposite(cat), c, field, validate=validate)
    F.name = f"P^{cat.object_label(c)}_op"
    return F


def constant(cat: FiniteCategory, field: Field, dim: int = 1) -> FunctorRep:
    maps = [np.arange(dim) for _ in cat.generators]
    return FunctorRep(cat, field, [dim] * cat.n_obj, set_maps=maps, name="const" if dim == 1 else f"const^{dim}")


def zero_functor(cat: FiniteCategory, field: Field) -> FunctorRep:
    return FunctorRep(cat, field, [0] * cat.n_obj, set_maps=[np.zeros(0, dtype=np.int64) for _ in cat.generators],
                      name="0")


def additive_standard(cat: TruncCat, a: int, field: Field) -> FunctorRep:
    """h^a = k (x)_ZZ cat(a, -).

    With hom(a, x) = R^{x a} and R = prod ZZ/m_i, the value is the sum over factors
    with char k | m_i of (F_p)^{x a}; a morphism f acts on each factor by (f mod p) (x) I_a.
    """
    p = field.char
    factors = [i for i, m in enumerate(cat.ring.moduli) if p and m % p == 0]
    dims = [len(factors) * x * a for x in cat.objects()]
    gens = []
    for (s, t, g) in cat.generators:
        mats = cat.matrices(s, t)[g]  # (factors, t, s)
        blocks = [np.kron(mats[i] % p, np.eye(a, dtype=np.int64)) for i in factors]
        m = field.zeros((dims[t], dims[s]))
        for j, blk in enumerate(blocks):
            m[j * t * a:(j + 1) * t * a, j * s * a:(j + 1) * s * a] = blk
        gens.append(m)
    labels = [[("entry", i, r, c) for i in factors for r in range(x) for c in range(a)] for x in cat.objects()]
    return FunctorRep(cat, field, dims, gens=gens, labels=labels, name=f"h^{a}")


@dataclass
class ReducedSplit:
    functor: FunctorRep
    inclusion: list[np.ndarray]   # F^red(x) -> F(x)
    projection: list[np.ndarray]  # F(x) -> F^red(x)
    constant_dim: int


def reduced_part(F: FunctorRep) -> ReducedSplit:
    """F^red(x) = ker(F(x -> 0)), with inclusions and the projection along F(0 -> x)."""
    cat, field = F.cat, F.field
    zero_obj = _zero_object(cat)
    incl, proj = [], []
    for x in cat.objects():
        to0 = F.mor(x, zero_obj, _zero_mor(cat, x, zero_obj))
        ker = field.nullspace(to0) if F.dims[x] else field.zeros((0, 0))
        incl.append(ker)
    for x in cat.objects():
        # projection: solve ker * P = (I - F(0->x) F(x->0))
        to0 = F.mor(x, zero_obj, _zero_mor(cat, x, zero_obj))
        from0 = F.mor(zero_obj, x, _zero_mor(cat, zero_obj, x))
        e = field.eye(F.dims[x])
        idem = (e - field.matmul(from0, to0)) % field.char if field.char else e - field.matmul(from0, to0)
        if incl[x].shape[1] == 0:
            proj.append(field.zeros((0, F.dims[x])))
            continue
        sol = field.solve(incl[x], idem)
        if sol is None:
            raise StructuralError("reduced part does not split")
        proj.append(sol)
    gens = []
    for gi, (s, t, _) in enumerate(cat.generators):
        img = field.matmul(F.gen_matrix(gi), incl[s]) if incl[s].size else field.zeros((F.dims[t], incl[s].shape[1]))
        gens.append(field.matmul(proj[t], img) if proj[t].size and img.size else
                    field.zeros((incl[t].shape[1], incl[s].shape[1])))
    dims = [k.shape[1] for k in incl]
    red = FunctorRep(cat, field, dims, gens=gens, name=f"{F.name}^red")
    return ReducedSplit(red, incl, proj, F.dims[zero_obj])


def _zero_object(cat: FiniteCategory) -> int:
    if isinstance(cat, TruncCat):
        return 0
    if isinstance(cat, OppositeCat):
        return _zero_object(cat.base)
    if isinstance(cat, ProductCat):
        return cat.pair(_zero_object(cat.left), _zero_object(cat.right))
    raise StructuralError("category has no known zero object")


def _zero_mor(cat: FiniteCategory, a: int, b: int) -> int:
    """The zero morphism a -> b; it is the unique map when either end is the zero object."""
    if cat.hom_size(a, b) == 1:
        return 0
    raise StructuralError("zero morphism requested away from the zero object")


def pointwise_tensor(F: FunctorRep, G: FunctorRep) -> FunctorRep:
    if F.cat != G.cat or F.field != G.field:
        raise StructuralError("pointwise tensor needs the same category and field")
    dims = [a * b for a, b in zip(F.dims, G.dims)]
    labels = None
    if F.labels and G.labels:
        labels = [[(u, v) for u in F.labels[x] for v in G.labels[x]] for x in F.cat.objects()]
    if F.set_maps is not None and G.set_maps is not None:
        maps = []
        for i, (s, t, _) in enumerate(F.cat.generators):
            mf, mg = F.set_maps[i], G.set_maps[i]
            maps.append((mf[:, None] * G.dims[t] + mg[None, :]).reshape(-1))
        return FunctorRep(F.cat, F.field, dims, set_maps=maps, labels=labels, name=f"({F.name} (x) {G.name})",
                          validate=False)
    gens = [np.kron(F.gen_matrix(i), G.gen_matrix(i)) % F.field.char if F.field.char else
            np.kron(F.gen_matrix(i), G.gen_matrix(i)) for i in range(len(F.cat.generators))]
    return FunctorRep(F.cat, F.field, dims, gens=gens, labels=labels, name=f"({F.name} (x) {G.name})",
                      validate=False)


def external_tensor(F: FunctorRep, G: FunctorRep) -> FunctorRep:
    """F boxtimes G on the product category: (x, y) |-> F(x) (x) G(y)."""
    if F.field != G.field:
        raise StructuralError("external tensor needs the same field")
    cat = ProductCat(F.cat, G.cat)
    field = F.field
    dims = [F.dims[i] * G.dims[j] for i in F.cat.objects() for j in G.cat.objects()]
    labels = None
    if F.labels and G.labels:
        labels = [[(u, v) for u in F.labels[i] for v in G.labels[j]] for i in F.cat.objects() for j in G.cat.objects()]
    if F.set_maps is not None and G.set_maps is not None:
        maps = []
        for gi, (s, t, _) in enumerate(F.cat.generators):
            for j in G.cat.objects():
                m = (F.set_maps[gi][:, None] * G.dims[j] + np.arange(G.dims[j])[None, :]).reshape(-1)
                maps.append(m)
        for gi, (s, t, _) in enumerate(G.cat.generators):
            for i in F.cat.objects():
                m = (np.arange(F.dims[i])[:, None] * G.dims[t] + G.set_maps[gi][None, :]).reshape(-1)
                maps.append(m)
        return FunctorRep(cat, field, dims, set_maps=maps, labels=labels, name=f"({F.name} [x] {G.name})",
                          validate=False)
    gens = []
    for gi in range(len(F.cat.generators)):
        for j in G.cat.objects():
            gens.append(np.kron(F.gen_matrix(gi), field.eye(G.dims[j])))
    for gi in range(len(G.cat.generators)):
        for i in F.cat.objects():
            gens.append(np.kron(field.eye(F.dims[i]), G.gen_matrix(gi)))
    gens = [field.array(g) for g in gens]
    return FunctorRep(cat, field, dims, gens=gens, labels=labels, name=f"({F.name} [x] {G.name})", validate=False)


def restrict(phi: CatFunctor, F: FunctorRep, validate: bool = False) -> FunctorRep:
    """phi^* F = F o phi."""
    if phi.dst != F.cat:
        raise StructuralError("restriction: functor lands in a different category")
    src = phi.src
    dims = [F.dims[phi.obj(x)] for x in src.objects()]
    labels = [F.labels[phi.obj(x)] for x in src.objects()] if F.labels else None
    name = f"{phi.kind}^*{F.name}"
    if F.set_maps is not None:
        maps = [F.set_mor(phi.obj(s), phi.obj(t), int(phi.mor(s, t, g))) for (s, t, g) in src.generators]
        return FunctorRep(src, F.field, dims, set_maps=maps, labels=labels, name=name, validate=validate)
    gens = [F.mor(phi.obj(s), phi.obj(t), int(phi.mor(s, t, g))) for (s, t, g) in src.generators]
    return FunctorRep(src, F.field, dims, gens=gens, labels=labels, name=name, validate=validate)


def dual(F: FunctorRep) -> FunctorRep:
    """D F = Hom_k(F(-), k) on the opposite category."""
    gens = [F.gen_matrix(i).T.copy() for i in range(len(F.cat.generators))]
    return FunctorRep(opposite(F.cat), F.field, F.dims, gens=gens, labels=F.labels, name=f"D{F.name}", validate=False)


def direct_sum(F: FunctorRep, G: FunctorRep) -> FunctorRep:
    if F.cat != G.cat or F.field != G.field:
        raise StructuralError("direct sum needs the same category and field")
    field = F.field
    dims = [a + b for a, b in zip(F.dims, G.dims)]
    gens = []
    for i, (s, t, _) in enumerate(F.cat.generators):
        m = field.zeros((dims[t], dims[s]))
        m[:F.dims[t], :F.dims[s]] = F.gen_matrix(i)
        m[F.dims[t]:, F.dims[s]:] = G.gen_matrix(i)
        gens.append(m)
    return FunctorRep(F.cat, field, dims, gens=gens, name=f"({F.name} + {G.name})", validate=False)


def functors_equal(F: FunctorRep, G: FunctorRep) -> bool:
    """Same dims and same generator matrices (equality, not isomorphism)."""
    if F.cat != G.cat or F.dims != G.dims:
        return False
    return all(np.array_equal(F.gen_matrix(i), G.gen_matrix(i)) for i in range(len(F.cat.generators)))


# ---------------------------------------------------------------------------
# natural transformations and tensor products over the category


@dataclass
class HomSpace:
    dim: int
    basis: list[list[np.ndarray]]  # each element: one matrix per object


def hom_space(F: FunctorRep, G: FunctorRep, all_morphisms: bool = False) -> HomSpace:
    """Natural transformations F -> G as the kernel of the naturality equations.

    By default the squares are imposed for the generators only; ``all_morphisms``
    imposes every square (slower, used to cross-check).
    """
    if F.cat != G.cat or F.field != G.field:
        raise StructuralError("hom_space needs the same category and field")
    cat, field = F.cat, F.field
    offs = np.cumsum([0] + [G.dims[x] * F.dims[x] for x in cat.objects()])
    nvar = int(offs[-1])
    blocks = []

    def square(s, t, Fg, Gg):
        # G(g) T_s - T_t F(g), row-major vectorization
        rows = G.dims[t] * F.dims[s]
        if rows == 0:
            return
        blk = field.zeros((rows, nvar))
        if G.dims[s] * F.dims[s]:
            blk[:, offs[s]:offs[s + 1]] += np.kron(Gg, field.eye(F.dims[s]))
        if G.dims[t] * F.dims[t]:
            blk[:, offs[t]:offs[t + 1]] -= np.kron(field.eye(G.dims[t]), Fg.T)
        blocks.append(field.array(blk) if field.char else blk)

    if all_morphisms:
        for a in cat.objects():
            fa, ga = F.action(a), G.action(a)
            for b in cat.objects():
                for f in range(cat.hom_size(a, b)):
                    square(a, b, fa[b][f], ga[b][f])
    else:
        for i, (s, t, _) in enumerate(cat.generators):
            square(s, t, F.gen_matrix(i), G.gen_matrix(i))
    if nvar == 0:
        return HomSpace(0, [])
    system = np.concatenate(blocks, axis=0) if blocks else field.zeros((0, nvar))
    ker = field.nullspace(system) if system.shape[0] else field.eye(nvar)
    basis = []
    for j in range(ker.shape[1]):
        v = ker[:, j]
        basis.append([v[offs[x]:offs[x + 1]].reshape(G.dims[x], F.dims[x]) for x in cat.objects()])
    return HomSpace(ker.shape[1], basis)


@dataclass
class CoendQuotient:
    """(+)_x F(x) (x) G(x) modulo the relations; basis = non-pivot coordinates."""

    dim: int
    offsets: np.ndarray
    basis_labels: list[tuple[int, int, int]]  # (object, index in F(x), index in G(x))
    _reduced: np.ndarray
    _pivots: list[int]
    _free: list[int]
    field: Field

    def coords(self, v: np.ndarray) -> np.ndarray:
        """Coordinates in the quotient basis of a vector of the direct sum."""
        v = self.field.array(v).copy()
        for i, p in enumerate(self._pivots):
            if v[p]:
                v = v - v[p] * self._reduced[i]
                if self.field.char:
                    v %= self.field.char
        return v[self._free]


def tensor_over_cat(F: FunctorRep, G: FunctorRep) -> CoendQuotient:
    """F (x)_{k[C]} G for F on C^op and G on C."""
    if opposite(F.cat) != G.cat or F.field != G.field:
        raise StructuralError("tensor_over_cat needs F on C^op and G on C")
    cat, field = G.cat, G.field
    sizes = [F.dims[x] * G.dims[x] for x in cat.objects()]
    offs = np.cumsum([0] + sizes)
    total = int(offs[-1])
    rels = []
    for i, (s, t, _) in enumerate(cat.generators):
        # generator g : s -> t of C; F(g) : F(t) -> F(s)
        n = F.dims[t] * G.dims[s]
        if n == 0:
            continue
        blk = field.zeros((total, n))
        if sizes[s]:
            blk[offs[s]:offs[s + 1]] += np.kron(F.gen_matrix(i), field.eye(G.dims[s]))
        if sizes[t]:
            blk[offs[t]:offs[t + 1]] -= np.kron(field.eye(F.dims[t]), G.gen_matrix(i))
        rels.append(field.array(blk) if field.char else blk)
    rel = np.concatenate(rels, axis=1) if rels else field.zeros((total, 0))
    reduced, pivots = field.rref(rel.T) if rel.shape[1] else (field.zeros((0, total)), [])
    free = [j for j in range(total) if j not in set(pivots)]
    labels = []
    for j in free:
        x = int(np.searchsorted(offs, j, side="right") - 1)
        u, v = divmod(j - int(offs[x]), G.dims[x])
        labels.append((x, u, v))
    return CoendQuotient(len(free), offs, labels, reduced, list(pivots), free, field)


def yoneda_map(c: int, G: FunctorRep, q: CoendQuotient) -> np.ndarray:
    """The map k[C(-, c)] (x)_{k[C]} G -> G(c), [f (x) t] |-> G(f) t, on the quotient basis.

    Returned as a dim G(c) x dim(quotient) matrix.
    """
    field = G.field
    cols = []
    for (x, f, t) in q.basis_labels:
        cols.append(G.mor(x, c, f)[:, t])
    if not cols:
        return field.zeros((G.dims[c], 0))
    return np.stack(cols, axis=1)


def yoneda_kills_relations(c: int, G: FunctorRep) -> bool:
    """The pairing [f (x) t] |-> G(f) t vanishes on every generator relation."""
    cat, field = G.cat, G.field
    for (s, t, g) in cat.generators:
        for f in range(cat.hom_size(t, c)):
            fg = cat.compose(s, t, c, g, f)
            # relation: (f o g) (x) v  -  f (x) G(g) v  for v in G(s)
            lhs = G.mor(s, c, fg)
            rhs = field.matmul(G.mor(t, c, f), G.mor(s, t, g))
            if not np.array_equal(lhs, rhs):
                return False
    return True
