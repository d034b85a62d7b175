"""Projective resolutions of functors over a finite category, built one generator at a time.

A free module here is a sum of projectives P^{c_j} e_j (see ``projectives``); with
the trivial idempotent these are the standard projectives k[C(c_j, -)].  A resolution
stores, for each degree n and each generator j of P_n, the image of that generator
under d_n: an element of P_{n-1}(c_j), or of F(c_j) for n = 0, fixed by e_j.
Everything else (values, differentials at an object, Hom and tensor complexes) is
derived from these images.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .category import FiniteCategory, SizingError
from .functors import FunctorRep
from .linalg import Field, StructuralError
from .projectives import ProjType, apply_idempotent, projective_types

RESOLUTION_DIM_CAP = 60_000


class FreeModule:
    """(+)_j P^{c_j} e_j with generator types listed in ``types``."""

    def __init__(self, cat: FiniteCategory, field: Field, types: list[ProjType]):
        self.cat, self.field = cat, field
        self.types = list(types)

    @property
    def objs(self) -> list[int]:
        return [t.obj for t in self.types]

    def dim(self, x: int) -> int:
        return sum(t.dim(x) for t in self.types)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.dim(x) for x in self.cat.objects())

    def offsets(self, x: int) -> np.ndarray:
        return np.cumsum([0] + [t.dim(x) for t in self.types])

    def generator_vector(self, j: int) -> np.ndarray:
        """The element e_j of P^{c_j} e_j (c_j) inside P(c_j)."""
        t = self.types[j]
        c = t.obj
        v = self.field.zeros(self.dim(c))
        _, piv = t.basis(c)
        o = self.offsets(c)[j]
        v[o:o + len(piv)] = t.e[piv]
        return v

    def lift(self, j: int, x: int, coords: np.ndarray) -> np.ndarray:
        """Block j of a vector of P(x) (coordinates) as an element of k[C(c_j, x)]."""
        B, _ = self.types[j].basis(x)
        return self.field.matmul(np.asarray(coords).reshape(1, -1), B).reshape(-1) if B.shape[0] else \
            self.field.zeros(B.shape[1])

    def push(self, a: int, V: np.ndarray, targets=None) -> dict[int, np.ndarray]:
        """Images of the columns of V under every morphism a -> x.

        Returns {x: (|hom(a,x)|, dim(x), r)}.
        """
        field, cat = self.field, self.cat
        V = field.array(V)
        if V.ndim == 1:
            V = V.reshape(-1, 1)
        r = V.shape[1]
        offa = self.offsets(a)
        lifted = []
        for j, t in enumerate(self.types):
            blk = V[offa[j]:offa[j + 1]]
            if not blk.any():
                lifted.append(None)
                continue
            B, _ = t.basis(a)
            lifted.append(blk if t.is_full else field.matmul(B.T, blk))
        out = {}
        for x in (cat.objects() if targets is None else targets):
            nf = cat.hom_size(a, x)
            offx = self.offsets(x)
            res = field.zeros((nf, self.dim(x), r))
            fs = np.arange(nf)
            for j, t in enumerate(self.types):
                W = lifted[j]
                if W is None:
                    continue
                hs = np.flatnonzero(np.any(W != 0, axis=1))
                if len(hs) == 0:
                    continue
                tab = cat.compose_many(t.obj, a, x, hs, fs)  # (len(hs), nf)
                pos = t.pivot_position(x)[tab]
                keep = pos >= 0
                if not keep.any():
                    continue
                hh, ff = np.nonzero(keep)
                cols = offx[j] + pos[hh, ff]
                for col in range(r):
                    vals = W[hs[hh], col]
                    nz = vals != 0
                    if nz.any():
                        np.add.at(res[:, :, col], (ff[nz], cols[nz]), vals[nz])
            if field.char:
                res %= field.char
            out[x] = res
        return out


class _Span:
    """Row space kept in reduced echelon form."""

    def __init__(self, field: Field, n: int):
        self.field, self.n = field, n
        self.rows = field.zeros((0, n))
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, vecs: np.ndarray) -> None:
        if vecs.shape[0] == 0:
            return
        vecs = self.residual(vecs)
        keep = np.any(vecs != 0, axis=1)
        if not keep.any():
            return
        stacked = np.concatenate([self.rows, vecs[keep]], axis=0)
        self.rows, self.pivots = self.field.rref(stacked)

    def residual(self, vecs: np.ndarray) -> np.ndarray:
        """vecs minus their projection onto the span along the pivot coordinates."""
        if not self.pivots or vecs.shape[0] == 0:
            return vecs
        f = self.field
        coef = vecs[:, self.pivots]
        return f.array(vecs - f.matmul(coef, self.rows)) if f.char else vecs - f.matmul(coef, self.rows)


@dataclass
class Resolution:
    """P_n -> ... -> P_0 -> F with P_n free on ``modules[n].types`` and d(e_j) = ``images[n][j]``."""

    target: FunctorRep
    n_top: int
    modules: list[FreeModule] = dc_field(default_factory=list)
    images: list[list[np.ndarray]] = dc_field(default_factory=list)
    timings: list[float] = dc_field(default_factory=list)

    @property
    def cat(self) -> FiniteCategory:
        return self.target.cat

    @property
    def field(self) -> Field:
        return self.target.field

    def ranks(self) -> list[tuple[int, ...]]:
        """Generator count per object, per degree."""
        return [tuple(m.objs.count(x) for x in self.cat.objects()) for m in self.modules]

    def range_module(self, n: int):
        return self.target if n == 0 else self.modules[n - 1]

    def diff_at(self, n: int, x: int) -> np.ndarray:
        """Matrix of d_n at object x (P_0 -> F for n = 0)."""
        return differential_at(self.modules[n], self.range_module(n), self.images[n], x)


def differential_at(src: FreeModule, dst, images: list[np.ndarray], x: int) -> np.ndarray:
    field = src.field
    cols = []
    for j, t in enumerate(src.types):
        img = dst.push(t.obj, images[j].reshape(-1, 1), targets=[x])[x][:, :, 0]  # (|hom(c,x)|, dim dst(x))
        B, _ = t.basis(x)
        cols.append(img.T if t.is_full else field.matmul(B, img).T)
    if not cols:
        return field.zeros((dst.dim(x), 0))
    return np.concatenate(cols, axis=1)


def _choose_generators(field: Field, cat: FiniteCategory, module, kernel_at, kernel_dims: dict[int, int],
                       types: dict[int, list[ProjType]]) -> tuple[list[ProjType], list[np.ndarray]]:
    """Generators of a submodule K of ``module``, processing objects in ascending order.

    ``kernel_dims[x]`` is dim K(x); ``kernel_at(x)`` returns a basis of K(x) as columns
    and is only called when the generators found so far do not already span K(x).
    A missing vector v is split as v = sum_t e_t v and one component outside the span
    becomes a generator of type P^x e_t.
    """
    objects = list(cat.objects())
    spans = {x: _Span(field, module.dim(x)) for x in objects}
    pending: dict[int, list[np.ndarray]] = {x: [] for x in objects}
    chosen, vecs = [], []
    for pos, x in enumerate(objects):
        if pending[x]:
            spans[x].add(np.concatenate(pending[x], axis=0))
            pending[x] = []
        need = kernel_dims[x]
        if spans[x].rank > need:
            raise StructuralError("span exceeds the kernel dimension")
        if spans[x].rank == need:
            continue
        K = kernel_at(x)
        if K.shape[1] != need:
            raise StructuralError("kernel dimension disagrees with exactness count")
        later = objects[pos + 1:]
        tx = types[x]
        while spans[x].rank < need:
            res = spans[x].residual(K.T)
            nz = np.flatnonzero(np.any(res != 0, axis=1))
            if len(nz) == 0:
                raise StructuralError("generator search stalled")
            v = res[nz[0]]
            if len(tx) == 1:
                t, comp = tx[0], v
            else:
                endo = module.push(x, v.reshape(-1, 1), targets=[x])[x][:, :, 0]
                t = comp = None
                for cand in tx:
                    c = apply_idempotent(cand.e, endo, field)
                    if spans[x].residual(c.reshape(1, -1)).any():
                        t, comp = cand, c
                        break
                if t is None:
                    raise StructuralError("idempotent components all lie in the span")
            chosen.append(t)
            vecs.append(comp)
            imgs = module.push(x, comp.reshape(-1, 1), targets=[x] + later)
            spans[x].add(imgs[x][:, :, 0])
            for y in later:
                pending[y].append(imgs[y][:, :, 0])
    return chosen, vecs


def _budget(module: FreeModule, cap: int) -> None:
    total = sum(module.dims)
    if total > cap:
        raise SizingError(f"free module of total dimension {total} exceeds cap {cap}", {"dim": total, "cap": cap})


def resolve(F: FunctorRep, n_top: int, cap: int = RESOLUTION_DIM_CAP, refine: bool = True) -> Resolution:
    """Projective resolution P_0, ..., P_{n_top} of F.

    Generators are chosen greedily with objects ascending.  With ``refine`` the
    projectives are the idempotent summands from ``projective_types``; otherwise the
    whole standard projectives.
    """
    cat, field = F.cat, F.field
    types = projective_types(cat, field, refine)
    res = Resolution(F, n_top)
    t0 = time.perf_counter()
    chosen, vecs = _choose_generators(field, cat, F, lambda x: field.eye(F.dims[x]),
                                      {x: F.dims[x] for x in cat.objects()}, types)
    res.modules.append(FreeModule(cat, field, chosen))
    res.images.append(vecs)
    res.timings.append(time.perf_counter() - t0)
    prev_ker = {x: F.dims[x] for x in cat.objects()}
    for n in range(1, n_top + 1):
        t0 = time.perf_counter()
        P = res.modules[n - 1]
        _budget(P, cap)
        # exactness: dim ker d_{n-1}(x) = dim P_{n-1}(x) - dim ker d_{n-2}(x)
        kdims = {x: P.dim(x) - prev_ker[x] for x in cat.objects()}

        def kernel_at(x, n=n):
            D = res.diff_at(n - 1, x)
            return field.nullspace(D) if D.shape[1] else field.zeros((0, 0))

        chosen, vecs = _choose_generators(field, cat, P, kernel_at, kdims, types)
        res.modules.append(FreeModule(cat, field, chosen))
        res.images.append(vecs)
        res.timings.append(time.perf_counter() - t0)
        prev_ker = kdims
    return res
