"""Truncated simplicial abelian groups, Eilenberg-MacLane objects, linearization and Hurewicz maps.

A simplicial object here stops at a top degree T: faces out of degree T are known but
nothing maps in from degree T + 1, so homotopy is certified only in degrees <= T - 1.
Groups are finite, written as sums of cyclic groups Z/o_1 + ... + Z/o_r, and all
structure maps are integer matrices acting on coordinate vectors.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations, product
from math import comb, prod

import numpy as np

from .abgroups import (
    GroupComplex,
    SubquotientHomology,
    cyclic_orders_rel,
    hom_is_injective,
    hom_is_surjective,
    integer_kernel,
    lattice_basis,
)
from .category import SizingError, TruncationError, tensor_field_dim, tor1_field_dim
from .linalg import ZZ, Field, HomologyGroup, HomologySummary, StructuralError
from .theorems import Check, DegreeRow, Hypothesis, TheoremReport, _finish, _guard

LINEARIZE_CAP = 8192


def linearize_cap() -> int:
    env = os.environ.get("FUNCTORLAB_SIMPLICIAL_CAP")
    return int(env) if env else LINEARIZE_CAP


# ---------------------------------------------------------------------------
# the simplex category


def coface(m: int, i: int) -> tuple[int, ...]:
    """delta_i : [m-1] -> [m], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(m))


def codegeneracy(m: int, j: int) -> tuple[int, ...]:
    """sigma_j : [m+1] -> [m], hitting j twice."""
    return tuple(k if k <= j else k - 1 for k in range(m + 2))


def surjections(m: int, n: int) -> list[tuple[int, ...]]:
    """Order-preserving surjections [m] -> [n] as value tuples, in lexicographic order."""
    if n > m or n < 0:
        return []
    out = []
    for steps in combinations(range(1, m + 1), n):
        v, s, cur = [], set(steps), 0
        for k in range(m + 1):
            if k in s:
                cur += 1
            v.append(cur)
        out.append(tuple(v))
    return sorted(out)


def _operator_matrix(sources: list[tuple[int, ...]], targets: list[tuple[int, ...]],
                     theta: tuple[int, ...]) -> np.ndarray:
    """theta^* on the Dold-Kan summands: summand sigma goes to sigma o theta when that is onto."""
    pos = {t: i for i, t in enumerate(targets)}
    m = np.zeros((len(targets), len(sources)), dtype=np.int64)
    for j, sigma in enumerate(sources):
        t = tuple(sigma[x] for x in theta)
        if t in pos:
            m[pos[t], j] = 1
    return m


# ---------------------------------------------------------------------------
# simplicial abelian groups


def _mod(v: np.ndarray, orders: tuple[int, ...]) -> np.ndarray:
    if not orders:
        return v[:0]
    o = np.asarray(orders, dtype=np.int64).reshape((-1,) + (1,) * (v.ndim - 1))
    return v % o


class SimplicialAbGroup:
    """X_0, ..., X_T with X_m = sum of Z/o for o in ``orders[m]``.

    ``faces[m][i]`` (m >= 1) is d_i : X_m -> X_{m-1}; ``degens[m][j]`` (m < T) is
    s_j : X_m -> X_{m+1}; both are integer matrices on coordinate vectors.
    """

    def __init__(self, orders, faces, degens, name: str = "X", validate: bool = True):
        self.orders = [tuple(int(o) for o in x) for x in orders]
        self.faces = [[np.asarray(d, dtype=np.int64).reshape(len(self.orders[m - 1]), len(self.orders[m]))
                       for d in fl] if m else [] for m, fl in enumerate(faces)]
        self.degens = [[np.asarray(s, dtype=np.int64).reshape(len(self.orders[m + 1]), len(self.orders[m]))
                        for s in sl] for m, sl in enumerate(degens)]
        self.name = name
        if any(o < 2 for x in self.orders for o in x):
            raise StructuralError("cyclic orders must be >= 2 (drop trivial summands)")
        if validate:
            self.validate()

    @property
    def T(self) -> int:
        return len(self.orders) - 1

    def rank(self, m: int) -> int:
        return len(self.orders[m])

    def size(self, m: int) -> int:
        return prod(self.orders[m])

    def face(self, m: int, i: int) -> np.ndarray:
        return self.faces[m][i]

    def degen(self, m: int, j: int) -> np.ndarray:
        return self.degens[m][j]

    def apply(self, mat: np.ndarray, target: int, v: np.ndarray) -> np.ndarray:
        return _mod(mat @ v, self.orders[target])

    def validate(self) -> None:
        """Well-definedness of every structure map and every simplicial identity."""
        T = self.T
        if len(self.faces) != T + 1 or len(self.degens) != T:
            raise StructuralError("need faces for degrees 1..T and degeneracies for degrees 0..T-1")
        for m in range(1, T + 1):
            if len(self.faces[m]) != m + 1:
                raise StructuralError(f"degree {m} needs {m + 1} faces")
        for m in range(T):
            if len(self.degens[m]) != m + 1:
                raise StructuralError(f"degree {m} needs {m + 1} degeneracies")
        for m in range(T + 1):
            rel = np.diag(np.asarray(self.orders[m], dtype=np.int64)) if self.orders[m] else None
            maps = [(d, m - 1) for d in (self.faces[m] if m else [])]
            maps += [(s, m + 1) for s in (self.degens[m] if m < T else [])]
            for mat, tgt in maps:
                if rel is not None and mat.size and self.apply(mat, tgt, rel).any():
                    raise StructuralError(f"a structure map out of degree {m} is not well defined")

        def same(a, b, tgt, what):
            if not np.array_equal(_mod(a, self.orders[tgt]), _mod(b, self.orders[tgt])):
                raise StructuralError(f"simplicial identity fails: {what}")

        F, S = self.faces, self.degens
        for m in range(2, T + 1):
            for j in range(m + 1):
                for i in range(j):
                    same(F[m - 1][i] @ F[m][j], F[m - 1][j - 1] @ F[m][i], m - 2, f"d{i} d{j} in degree {m}")
        for m in range(T):
            eye = np.eye(self.rank(m), dtype=np.int64)
            for j in range(m + 1):
                same(F[m + 1][j] @ S[m][j], eye, m, f"d{j} s{j} in degree {m}")
                same(F[m + 1][j + 1] @ S[m][j], eye, m, f"d{j + 1} s{j} in degree {m}")
                for i in range(m + 2):
                    if i < j:
                        same(F[m + 1][i] @ S[m][j], S[m - 1][j - 1] @ F[m][i], m, f"d{i} s{j} in degree {m}")
                    elif i > j + 1:
                        same(F[m + 1][i] @ S[m][j], S[m - 1][j] @ F[m][i - 1], m, f"d{i} s{j} in degree {m}")
        for m in range(T - 1):
            for j in range(m + 1):
                for i in range(j + 1):
                    same(S[m + 1][i] @ S[m][j], S[m + 1][j + 1] @ S[m][i], m + 2, f"s{i} s{j} in degree {m}")

    def elements(self, m: int) -> np.ndarray:
        """All elements of X_m as rows, in mixed-radix order (last coordinate fastest)."""
        o = self.orders[m]
        if not o:
            return np.zeros((1, 0), dtype=np.int64)
        return np.array(list(product(*[range(x) for x in o])), dtype=np.int64).reshape(-1, len(o))

    def index_of(self, m: int, rows: np.ndarray) -> np.ndarray:
        o = self.orders[m]
        if not o:
            return np.zeros(rows.shape[0], dtype=np.int64)
        w = np.cumprod((list(o[1:]) + [1])[::-1])[::-1]
        return rows @ w

    def boundary(self, m: int) -> np.ndarray:
        """Alternating sum of faces X_m -> X_{m-1} (unreduced integer matrix)."""
        out = np.zeros((self.rank(m - 1), self.rank(m)), dtype=np.int64)
        for i, d in enumerate(self.faces[m]):
            out += d if i % 2 == 0 else -d
        return out

    def moore_lattice(self, m: int) -> list[list[int]]:
        """Generators of the preimage in ZZ^{r_m} of N_m = ker d_1 ∩ ... ∩ ker d_m."""
        r = self.rank(m)
        if m == 0 or r == 0:
            return [[int(i == j) for i in range(r)] for j in range(r)]
        prev = self.orders[m - 1]
        if not prev:
            return [[int(i == j) for i in range(r)] for j in range(r)]
        rel = np.diag(np.asarray(prev, dtype=np.int64))
        blocks = []
        for i in range(1, m + 1):
            row = [np.zeros_like(rel)] * m
            row[i - 1] = rel
            blocks.append(np.concatenate([self.faces[m][i]] + row, axis=1))
        big = np.concatenate(blocks, axis=0)
        ker = integer_kernel([[int(x) for x in row] for row in big], big.shape[1])
        return lattice_basis([k[:r] for k in ker], r)

    def group_complex(self, top: int, normalized: bool = True) -> GroupComplex:
        r = {m: self.rank(m) for m in range(top + 1)}
        d = {m: (self.faces[m][0] if normalized else self.boundary(m)) for m in range(1, top + 1)}
        rel = {m: cyclic_orders_rel(self.orders[m]) for m in range(top + 1)}
        lat = {m: self.moore_lattice(m) for m in range(top + 1)} if normalized else None
        return GroupComplex(0, top, r, d, rel, lat)

    def __repr__(self) -> str:
        return f"SimplicialAbGroup({self.name}, T={self.T}, ranks={[len(o) for o in self.orders]})"


def constant_simplicial(orders, T: int, name: str | None = None) -> SimplicialAbGroup:
    """The constant simplicial group on A = sum Z/o."""
    orders = tuple(int(o) for o in orders if int(o) != 1)
    r = len(orders)
    eye = np.eye(r, dtype=np.int64)
    faces = [[]] + [[eye] * (m + 1) for m in range(1, T + 1)]
    degens = [[eye] * (m + 1) for m in range(T)]
    return SimplicialAbGroup([orders] * (T + 1), faces, degens, name or f"const({_label(orders)})")


def _label(orders) -> str:
    return "+".join(f"Z/{o}" for o in orders) or "0"


def em_space(orders, n: int, T: int, cap: int | None = None) -> SimplicialAbGroup:
    """K(A, n) as the Dold-Kan Gamma of A placed in degree n.

    Degree m is A^{#surjections [m] -> [n]}: one copy of A for each surjection, and a
    simplicial operator theta sends the copy indexed by sigma identically to the copy
    indexed by sigma o theta when that is still onto, and to zero otherwise.
    """
    orders = tuple(int(o) for o in orders if int(o) != 1)
    cap = linearize_cap() * 64 if cap is None else cap
    a = prod(orders)
    for m in range(T + 1):
        if a ** comb(m, n) > cap:
            raise SizingError(f"K(A,{n}) in degree {m} has {a}^{comb(m, n)} elements, above cap {cap}",
                              {"degree": m, "log_size": comb(m, n), "base": a, "cap": cap})
    r = len(orders)
    surj = [surjections(m, n) for m in range(T + 1)]
    eye = np.eye(r, dtype=np.int64)

    def lift(p: np.ndarray) -> np.ndarray:
        return np.kron(p, eye)

    faces = [[]] + [[lift(_operator_matrix(surj[m], surj[m - 1], coface(m, i))) for i in range(m + 1)]
                    for m in range(1, T + 1)]
    degens = [[lift(_operator_matrix(surj[m], surj[m + 1], codegeneracy(m, j))) for j in range(m + 1)]
              for m in range(T)]
    ords = [orders * len(surj[m]) for m in range(T + 1)]
    return SimplicialAbGroup(ords, faces, degens, f"K({_label(orders)},{n})")


def nerve_model(orders, T: int) -> SimplicialAbGroup:
    """The bar construction of A: X_m = A^m, d_0 and d_m drop an end, inner faces add neighbours."""
    orders = tuple(int(o) for o in orders if int(o) != 1)
    r = len(orders)
    eye = np.eye(r, dtype=np.int64)

    def blockmat(rows: int, cols: int, entries) -> np.ndarray:
        m = np.zeros((rows * r, cols * r), dtype=np.int64)
        for a, b in entries:
            m[a * r:(a + 1) * r, b * r:(b + 1) * r] = eye
        return m

    faces = [[]]
    for m in range(1, T + 1):
        fl = []
        for i in range(m + 1):
            if i == 0:
                ent = [(a, a + 1) for a in range(m - 1)]
            elif i == m:
                ent = [(a, a) for a in range(m - 1)]
            else:
                ent = [(a, a) for a in range(i - 1)] + [(i - 1, i - 1), (i - 1, i)] + \
                      [(a - 1, a) for a in range(i + 1, m)]
            fl.append(blockmat(m - 1, m, ent))
        faces.append(fl)
    degens = []
    for m in range(T):
        sl = []
        for j in range(m + 1):
            ent = [(a if a < j else a + 1, a) for a in range(m)]
            sl.append(blockmat(m + 1, m, ent))
        degens.append(sl)
    return SimplicialAbGroup([orders * m for m in range(T + 1)], faces, degens, f"B({_label(orders)})")


@dataclass
class SimplicialMap:
    """Degreewise homomorphisms commuting with all faces and degeneracies (validated)."""

    src: SimplicialAbGroup
    dst: SimplicialAbGroup
    mats: list[np.ndarray]

    def __post_init__(self):
        X, Y = self.src, self.dst
        if X.T != Y.T:
            raise StructuralError("source and target must have the same truncation")
        self.mats = [np.asarray(f, dtype=np.int64).reshape(Y.rank(m), X.rank(m)) for m, f in enumerate(self.mats)]
        for m in range(X.T + 1):
            f = self.mats[m]
            if X.orders[m] and Y.orders[m] and Y.apply(f, m, np.diag(np.asarray(X.orders[m]))).any():
                raise StructuralError(f"degree {m} map is not well defined")
            for i in range(m + 1 if m else 0):
                if not np.array_equal(Y.apply(Y.face(m, i) @ f, m - 1, np.eye(X.rank(m), dtype=np.int64)),
                                      Y.apply(self.mats[m - 1] @ X.face(m, i), m - 1,
                                              np.eye(X.rank(m), dtype=np.int64))):
                    raise StructuralError(f"map does not commute with d{i} in degree {m}")
            for j in range(m + 1 if m < X.T else 0):
                if not np.array_equal(Y.apply(Y.degen(m, j) @ f, m + 1, np.eye(X.rank(m), dtype=np.int64)),
                                      Y.apply(self.mats[m + 1] @ X.degen(m, j), m + 1,
                                              np.eye(X.rank(m), dtype=np.int64))):
                    raise StructuralError(f"map does not commute with s{j} in degree {m}")


def em_map(hom, src_orders, dst_orders, n: int, T: int) -> SimplicialMap:
    """K(f, n) : K(A, n) -> K(B, n) for a homomorphism f given on generators (columns)."""
    X, Y = em_space(src_orders, n, T), em_space(dst_orders, n, T)
    rs = len([o for o in src_orders if int(o) != 1])
    rd = len([o for o in dst_orders if int(o) != 1])
    h = np.asarray(hom, dtype=np.int64).reshape(rd, rs)
    mats = [np.kron(np.eye(comb(m, n), dtype=np.int64), h) for m in range(T + 1)]
    return SimplicialMap(X, Y, mats)


# ---------------------------------------------------------------------------
# linearization


class SimplicialKModule:
    """k[S] for a degreewise finite simplicial set S, with structure maps as index maps.

    ``labels[m]`` lists the simplices of degree m; ``face_idx[m][i][x]`` is the index
    of d_i x.  Matrices are produced on demand by :meth:`face_matrix`.
    """

    def __init__(self, ring, labels, face_idx, degen_idx, name: str = "k[X]", validate: bool = True):
        self.ring = ring
        self.labels = labels
        self.face_idx = face_idx
        self.degen_idx = degen_idx
        self.name = name
        self.degenerate = [np.zeros(len(labels[0]), dtype=bool)]
        for m in range(1, len(labels)):
            mask = np.zeros(len(labels[m]), dtype=bool)
            for s in degen_idx[m - 1]:
                mask[s] = True
            self.degenerate.append(mask)
        if validate:
            self.validate()

    @property
    def T(self) -> int:
        return len(self.labels) - 1

    def rank(self, m: int) -> int:
        return len(self.labels[m])

    def face_matrix(self, m: int, i: int) -> np.ndarray:
        M = np.zeros((self.rank(m - 1), self.rank(m)), dtype=np.int64)
        M[self.face_idx[m][i], np.arange(self.rank(m))] = 1
        return M

    def degen_matrix(self, m: int, j: int) -> np.ndarray:
        M = np.zeros((self.rank(m + 1), self.rank(m)), dtype=np.int64)
        M[self.degen_idx[m][j], np.arange(self.rank(m))] = 1
        return M

    def validate(self) -> None:
        F, S, T = self.face_idx, self.degen_idx, self.T

        def same(a, b, what):
            if not np.array_equal(a, b):
                raise StructuralError(f"simplicial identity fails: {what}")

        for m in range(2, T + 1):
            for j in range(m + 1):
                for i in range(j):
                    same(F[m - 1][i][F[m][j]], F[m - 1][j - 1][F[m][i]], f"d{i} d{j} in degree {m}")
        for m in range(T):
            ident = np.arange(self.rank(m))
            for j in range(m + 1):
                same(F[m + 1][j][S[m][j]], ident, f"d{j} s{j}")
                same(F[m + 1][j + 1][S[m][j]], ident, f"d{j + 1} s{j}")
                for i in range(m + 2):
                    if i < j:
                        same(F[m + 1][i][S[m][j]], S[m - 1][j - 1][F[m][i]], f"d{i} s{j} in degree {m}")
                    elif i > j + 1:
                        same(F[m + 1][i][S[m][j]], S[m - 1][j][F[m][i - 1]], f"d{i} s{j} in degree {m}")
        for m in range(T - 1):
            for j in range(m + 1):
                for i in range(j + 1):
                    same(S[m + 1][i][S[m][j]], S[m + 1][j + 1][S[m][i]], f"s{i} s{j} in degree {m}")

    def boundary(self, m: int, normalized: bool) -> np.ndarray:
        """Alternating face sum; normalized keeps only nondegenerate simplices on both sides."""
        M = np.zeros((self.rank(m - 1), self.rank(m)), dtype=np.int64)
        cols = np.arange(self.rank(m))
        for i, f in enumerate(self.face_idx[m]):
            np.add.at(M, (f, cols), 1 if i % 2 == 0 else -1)
        if normalized:
            M = M[~self.degenerate[m - 1]][:, ~self.degenerate[m]]
        return M

    def chain_rank(self, m: int, normalized: bool) -> int:
        return int((~self.degenerate[m]).sum()) if normalized else self.rank(m)

    def __repr__(self) -> str:
        return f"SimplicialKModule({self.name}, T={self.T}, ranks={[self.rank(m) for m in range(self.T + 1)]})"


def linearize_simplicial(X: SimplicialAbGroup, ring=ZZ, cap: int | None = None) -> SimplicialKModule:
    """k[X]: degree m is free on the underlying set of X_m."""
    cap = linearize_cap() if cap is None else cap
    for m in range(X.T + 1):
        if X.size(m) > cap:
            raise SizingError(f"|X_{m}| = {X.size(m)} exceeds the linearization cap {cap}",
                              {"degree": m, "size": X.size(m), "cap": cap})
    elems = [X.elements(m) for m in range(X.T + 1)]
    faces = [[]]
    for m in range(1, X.T + 1):
        faces.append([X.index_of(m - 1, X.apply(d, m - 1, elems[m].T).T) for d in X.faces[m]])
    degens = [[X.index_of(m + 1, X.apply(s, m + 1, elems[m].T).T) for s in X.degens[m]] for m in range(X.T)]
    labels = [[tuple(int(v) for v in row) for row in e] for e in elems]
    tag = getattr(ring, "tag", str(ring))
    return SimplicialKModule(ring, labels, faces, degens, name=f"{tag}[{X.name}]")


# ---------------------------------------------------------------------------
# homotopy


def _certify(T: int, max_i: int | None) -> int:
    top = T - 1 if max_i is None else max_i
    if top > T - 1:
        raise TruncationError(f"pi_{top} needs degree {top + 1}; the object stops at T = {T} (certified <= {T - 1})")
    if top < 0:
        raise TruncationError("need T >= 1 to certify any homotopy group")
    return top


def _field_complex_dims(field: Field, Y: SimplicialKModule, top: int, normalized: bool) -> dict[int, int]:
    ranks = [Y.chain_rank(m, normalized) for m in range(top + 2)]
    rk = {0: 0}
    for m in range(1, top + 2):
        D = Y.boundary(m, normalized)
        rk[m] = field.rank(field.array(D)) if D.size else 0
    return {m: ranks[m] - rk[m] - rk[m + 1] for m in range(top + 1)}


def _kmodule_group_complex(Y: SimplicialKModule, top: int, normalized: bool) -> GroupComplex:
    r = {m: Y.chain_rank(m, normalized) for m in range(top + 2)}
    d = {m: Y.boundary(m, normalized) for m in range(1, top + 2)}
    return GroupComplex(0, top + 1, r, d, {})


def homotopy_groups(X, max_i: int | None = None, normalized: bool = True) -> HomologySummary:
    """pi_i for 0 <= i <= max_i (default T - 1) as homology of the Moore complex.

    For a simplicial abelian group the Moore complex is ker d_1 ∩ ... ∩ ker d_m with
    differential d_0; for k[S] it is the quotient by degenerate simplices.  With
    ``normalized=False`` the full alternating-face complex is used instead.
    Integral results come from Smith forms.
    """
    top = _certify(X.T, max_i)
    if isinstance(X, SimplicialAbGroup):
        gc = X.group_complex(top + 1, normalized)
        return HomologySummary(ZZ, {n: gc.homology(n).group for n in range(top + 1)})
    if isinstance(X.ring, Field):
        dims = _field_complex_dims(X.ring, X, top, normalized)
        return HomologySummary(X.ring, {n: HomologyGroup(v) for n, v in dims.items()})
    gc = _kmodule_group_complex(X, top, normalized)
    return HomologySummary(ZZ, {n: gc.homology(n).group for n in range(top + 1)})


# ---------------------------------------------------------------------------
# Hurewicz


@dataclass
class HurewiczDegree:
    degree: int
    src: HomologyGroup
    dst: HomologyGroup
    h: list[list[int]]  # columns: images of the generators of pi_i X
    r: list[list[int]]  # columns: images of the generators of pi_i Z[X] under the retraction
    split: bool
    injective: bool
    iso: bool

    def as_json(self) -> dict:
        return {"degree": self.degree, "pi_X": str(self.src), "pi_ZX": str(self.dst), "h": self.h, "r": self.r,
                "split_injective": self.split, "injective": self.injective, "iso": self.iso}


@dataclass
class HurewiczReport:
    name: str
    T: int
    degrees: list[HurewiczDegree]

    @property
    def split_injective(self) -> bool:
        return all(d.split and d.injective for d in self.degrees)

    def as_json(self) -> dict:
        return {"object": self.name, "T": self.T, "certified": [0, self.T - 1],
                "degrees": [d.as_json() for d in self.degrees], "split_injective": self.split_injective}


def _pi0_hurewicz(X: SimplicialAbGroup, hX: SubquotientHomology, ZX: SimplicialKModule,
                  hZ: SubquotientHomology) -> HurewiczDegree:
    """h_0 is the set map pi_0 X -> Z[pi_0 X]; checked injective on all of pi_0 X."""
    elems = X.elements(0)
    reps: dict[tuple, int] = {}
    for idx, x in enumerate(elems):
        reps.setdefault(hX.coords(list(x)), idx)
    seen, inj = set(), True
    for c, idx in reps.items():
        v = [0] * ZX.rank(0)
        v[idx] = 1
        img = hZ.coords(v)
        inj &= img not in seen
        seen.add(img)
    # the retraction sends the class of [x] back to the class of x
    split = all(hX.coords(list(elems[idx])) == c for c, idx in reps.items())
    src, dst = hX.group, hZ.group
    return HurewiczDegree(0, src, dst, [], [], split, inj, inj and dst.free_rank == len(reps) and not dst.torsion)


def hurewicz_map(X: SimplicialAbGroup, max_i: int | None = None) -> HurewiczReport:
    """h_i : pi_i X -> pi_i Z[X] and the retraction r_i induced by Z[X] -> X.

    Both are computed on the unnormalized complexes: a cycle x of X goes to [x] - [0],
    and sum n_x [x] goes to sum n_x x.  Split injectivity is certified by r_i h_i = id
    on generators; injectivity of h_i is also checked on its own from the matrix.
    """
    top = _certify(X.T, max_i)
    ZX = linearize_simplicial(X, ZZ)
    gX = X.group_complex(top + 1, normalized=False)
    gZ = _kmodule_group_complex(ZX, top, normalized=False)
    out = []
    for i in range(top + 1):
        hX, hZ = gX.homology(i), gZ.homology(i)
        if i == 0:
            out.append(_pi0_hurewicz(X, hX, ZX, hZ))
            continue
        zero = int(X.index_of(i, np.zeros((1, X.rank(i)), dtype=np.int64))[0])

        def h(g):
            x = _mod(np.asarray(g, dtype=np.int64), X.orders[i]).reshape(1, -1)
            v = [0] * ZX.rank(i)
            v[int(X.index_of(i, x)[0])] += 1
            v[zero] -= 1
            return v

        elems = X.elements(i)

        def r(chain):
            return [int(v) for v in np.asarray(chain, dtype=np.int64) @ elems]

        H = [list(hZ.coords(h(g))) for g in hX.generators]
        R = [list(hX.coords(r(g))) for g in hZ.generators]
        src, dst = hX.group, hZ.group
        # r_* h_* on each generator of pi_i X
        split = True
        for j, col in enumerate(H):
            img = [0] * len(hX.orders)
            for t, c in enumerate(col):
                for s in range(len(img)):
                    img[s] += c * R[t][s]
            want = [int(s == j) for s in range(len(img))]
            split &= all((a - b) % o == 0 if o else a == b for a, b, o in zip(img, want, hX.orders))
        inj = hom_is_injective(hX.orders, hZ.orders, H) if hX.orders else True
        iso = inj and src.order() is not None and src.order() == dst.order()
        out.append(HurewiczDegree(i, src, dst, H, R, split, inj, iso))
    return HurewiczReport(X.name, X.T, out)


# ---------------------------------------------------------------------------
# k-local statements


def k_negligible(orders, k: Field) -> bool:
    """Tor_1(k, A) = 0 = k (x) A for A = sum Z/o."""
    inv = [int(o) for o in orders if int(o) != 1]
    return tensor_field_dim(inv, k) == 0 and tor1_field_dim(inv, k) == 0


def _invariants(g: HomologyGroup) -> list[int]:
    return [0] * g.free_rank + list(g.torsion)


def _window(T: int) -> dict:
    return {"T": T, "degrees": [0, T - 1], "label": "certified range"}


def check_em_vanishing(orders, n: int, k: Field, T: int) -> TheoremReport:
    """pi_i k[K(A, n)] = 0 for 0 < i <= T - 1 when A is k-negligible."""
    orders = tuple(int(o) for o in orders if int(o) != 1)
    instance = {"A": _label(orders), "n": n, "field": k.tag, "T": T}
    window = _window(T)

    def body():
        X = em_space(orders, n, T)
        hyps = [Hypothesis("A is k-negligible", k_negligible(orders, k),
                           {"k_tensor_A": tensor_field_dim(orders, k), "tor1_k_A": tor1_field_dim(orders, k)})]
        pi = homotopy_groups(linearize_simplicial(X, k))
        piX = homotopy_groups(X)
        rows = [DegreeRow("pi k[K(A,n)]", i, "zero", pi[i].dim, 0) for i in range(1, T)]
        checks = [Check("pi_* K(A,n) is A in degree n", all(
            _invariants(piX[i]) == (sorted(orders) if i == n else []) for i in range(T)),
            {str(i): str(piX[i]) for i in range(T)}),
            Check("pi_0 k[K(A,n)] is k[pi_0]", pi[0].dim == (piX[0].order() or 0), pi[0].dim)]
        extra = {"pi_k": {str(i): pi[i].dim for i in range(T)}}
        return _finish("em_vanishing", instance, hyps, rows, checks, window, extra)

    return _guard("em_vanishing", instance, window, body)


def local_hurewicz_condition(pi: HomologySummary, k: Field, e: int) -> tuple[bool, dict]:
    """k (x) pi_i X = 0 for 0 < i <= e and Tor_1(k, pi_j X) = 0 for 0 < j < e."""
    tens = {i: tensor_field_dim(_invariants(pi[i]), k) for i in range(1, e + 1)}
    tors = {j: tor1_field_dim(_invariants(pi[j]), k) for j in range(1, e)}
    return all(v == 0 for v in tens.values()) and all(v == 0 for v in tors.values()), \
        {"k_tensor_pi": tens, "tor1_k_pi": tors}


def check_local_hurewicz(X: SimplicialAbGroup, k: Field, e: int) -> TheoremReport:
    """The k-local Hurewicz statements for X in degrees up to e + 1, plus the vanishing biconditional.

    Checks pi_0 k[X] = k[pi_0 X] by dimension, pi_i k[X] = 0 for 0 < i <= e, and
    dim pi_{e+1} k[X] >= |pi_0 X| * (dim k (x) pi_{e+1} X + dim Tor_1(k, pi_e X)).
    """
    instance = {"X": X.name, "field": k.tag, "e": e, "T": X.T}
    window = _window(X.T)

    def body():
        if e + 1 > X.T - 1:
            raise TruncationError(f"need T >= e + 2 = {e + 2}, have T = {X.T}")
        piX = homotopy_groups(X, e + 1)
        pik = homotopy_groups(linearize_simplicial(X, k), e + 1)
        cond, wit = local_hurewicz_condition(piX, k, e)
        hyps = [Hypothesis("k (x) pi_i X = 0 (0 < i <= e) and Tor_1(k, pi_j X) = 0 (0 < j < e)", cond, wit)]
        rows = [DegreeRow("pi k[X]", i, "zero", pik[i].dim, 0) for i in range(1, e + 1)]
        pi0 = piX[0].order()
        bound = (pi0 or 0) * (tensor_field_dim(_invariants(piX[e + 1]), k)
                              + tor1_field_dim(_invariants(piX[e]), k))
        lhs = all(pik[i].dim == 0 for i in range(1, e + 1))
        checks = [
            Check("pi_0 k[X] = k[pi_0 X]", pi0 is not None and pik[0].dim == pi0,
                  {"dim_pi0_kX": pik[0].dim, "order_pi0_X": pi0}),
            Check("direct summand bound in degree e + 1", pik[e + 1].dim >= bound,
                  {"dim": pik[e + 1].dim, "summand_dim": bound}),
            Check("vanishing iff the condition on pi_* X", lhs == cond, {"vanishing": lhs, "condition": cond}),
        ]
        extra = {"pi_X": {str(i): str(piX[i]) for i in range(e + 2)},
                 "pi_kX": {str(i): pik[i].dim for i in range(e + 2)}}
        return _finish("local_hurewicz", instance, hyps, rows, checks, window, extra)

    return _guard("local_hurewicz", instance, window, body)


def vanishing_biconditional(X: SimplicialAbGroup, k: Field, e: int) -> tuple[bool, bool]:
    """(pi_i k[X] = 0 for 0 < i <= e, the condition on pi_* X); the two should agree."""
    piX = homotopy_groups(X, e)
    pik = homotopy_groups(linearize_simplicial(X, k), e)
    return all(pik[i].dim == 0 for i in range(1, e + 1)), local_hurewicz_condition(piX, k, e)[0]


# ---------------------------------------------------------------------------
# connectivity of maps


def _field_map_ranks(field: Field, f: SimplicialMap, top: int) -> dict[int, tuple[bool, bool]]:
    """(injective, surjective) for pi_i k[f], from ranks on the normalized complexes."""
    X, Y = f.src, f.dst
    kX, kY = linearize_simplicial(X, field), linearize_simplicial(Y, field)
    out = {}
    for i in range(top + 1):
        img = Y.index_of(i, Y.apply(f.mats[i], i, X.elements(i).T).T)
        ndX, ndY = ~kX.degenerate[i], ~kY.degenerate[i]
        pos = -np.ones(kY.rank(i), dtype=np.int64)
        pos[ndY] = np.arange(int(ndY.sum()))
        phi = np.zeros((int(ndY.sum()), int(ndX.sum())), dtype=np.int64)
        for c, x in enumerate(np.flatnonzero(ndX)):
            if pos[img[x]] >= 0:
                phi[pos[img[x]], c] = 1
        Dx = kX.boundary(i, True) if i else np.zeros((0, phi.shape[1]), dtype=np.int64)
        Z = field.nullspace(field.array(Dx)) if Dx.shape[0] else field.eye(phi.shape[1])
        Dy_next = field.array(kY.boundary(i + 1, True))
        B = field.colspace(Dy_next) if Dy_next.size else field.zeros((phi.shape[0], 0))
        Bx_next = field.array(kX.boundary(i + 1, True))
        rB = B.shape[1]
        rank = field.rank(np.concatenate([field.matmul(field.array(phi), Z), B], axis=1)) - rB if Z.shape[1] else 0
        dx = Z.shape[1] - (field.rank(Bx_next) if Bx_next.size else 0)
        dy = (field.nullspace(field.array(kY.boundary(i, True))).shape[1] if i else int(ndY.sum())) - rB
        out[i] = (rank == dx, rank == dy)
    return out


def connectivity(flags: dict[int, tuple[bool, bool]]) -> int:
    """Largest e with pi_i iso for i < e and onto at e; -1 if pi_0 is not onto."""
    e = -1
    for i in sorted(flags):
        inj, surj = flags[i]
        if not surj:
            return e
        e = i
        if not inj:
            return e
    return e


def map_connectivity(f: SimplicialMap, k: Field, max_i: int | None = None) -> dict:
    """Connectivity of pi_* f (over ZZ) and of pi_* k[f], in the certified range."""
    top = _certify(f.src.T, max_i)
    gX = f.src.group_complex(top + 1)
    gY = f.dst.group_complex(top + 1)
    flags = {}
    for i in range(top + 1):
        hx, hy = gX.homology(i), gY.homology(i)
        cols = [list(hy.coords([int(v) for v in f.mats[i] @ np.asarray(g, dtype=np.int64)])) for g in hx.generators]
        flags[i] = (hom_is_injective(hx.orders, hy.orders, cols) if hx.orders else True,
                    hom_is_surjective(hy.orders, cols))
    return {"pi": connectivity(flags), "k_linearized": connectivity(_field_map_ranks(k, f, top)),
            "certified": [0, top]}
