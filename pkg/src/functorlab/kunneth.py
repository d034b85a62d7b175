"""Ext and Tor over a product category C1 x C2 for external tensor products.

Everything is assembled from the two factors so that no hom-set of the product
category is ever enumerated: if P resolves B1 over C1 and Q resolves B2 over C2, the
total complex of P (boxtimes) Q resolves B1 (boxtimes) B2, and

    Hom(P (boxtimes) Q, C1 (boxtimes) C2) = Hom(P, C1) (x) Hom(Q, C2),
    (F1' (boxtimes) F2') (x) (P (boxtimes) Q) = (F1' (x) P) (x) (F2' (x) Q)

as total complexes (sign (-1)^a on the second factor in bidegree (a, b)).  The
restriction along the diagonal is computed by lifting the identity of the pointwise
tensor B1 (x) B2 to a chain map into Delta^*(P (boxtimes) Q), using only the actions
of P and Q.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import opposite
from .functors import FunctorRep, pointwise_tensor
from .homology import (
    ComparisonResult,
    DenseComplex,
    hom_complex,
    induced_map,
    lift_chain_map,
    tensor_complex,
    tensor_pairing,
    hom_pairing,
)
from .linalg import Field, StructuralError
from .resolution import Resolution, resolve


def _kron(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.kron(a, b)
    return np.mod(out, field.char) if field.char else out


def _mod(field: Field, a: np.ndarray) -> np.ndarray:
    return np.mod(a, field.char) if field.char else a


class ProductResolution:
    """Total complex of P (boxtimes) Q, degrees 0..n_top, read at pairs of objects.

    The value in degree n at (x1, x2) is (+)_{a+b=n} P_a(x1) (x) Q_b(x2), blocks in
    increasing a, each in Kronecker order.
    """

    def __init__(self, P: Resolution, Q: Resolution):
        if P.field != Q.field:
            raise StructuralError("factor resolutions need the same field")
        self.P, self.Q = P, Q
        self.field = P.field
        self.n_top = min(P.n_top, Q.n_top)
        self._act: dict = {}

    def blocks(self, n: int, x1: int, x2: int) -> list[tuple[int, int, int, int]]:
        """(a, offset, dim P_a(x1), dim Q_b(x2)) for a = 0..n."""
        out, pos = [], 0
        for a in range(n + 1):
            p, q = self.P.modules[a].dim(x1), self.Q.modules[n - a].dim(x2)
            out.append((a, pos, p, q))
            pos += p * q
        return out

    def dim(self, n: int, x1: int, x2: int) -> int:
        return sum(p * q for _, _, p, q in self.blocks(n, x1, x2))

    def diff_at(self, n: int, x1: int, x2: int) -> np.ndarray:
        """d_n at (x1, x2); for n = 0 the augmentation onto B1(x1) (x) B2(x2)."""
        f = self.field
        if n == 0:
            return _kron(f, self.P.diff_at(0, x1), self.Q.diff_at(0, x2))
        src = self.blocks(n, x1, x2)
        dst = self.blocks(n - 1, x1, x2)
        D = f.zeros((self.dim(n - 1, x1, x2), self.dim(n, x1, x2)))
        for a, off, p, q in src:
            b = n - a
            if p * q == 0:
                continue
            if a >= 1:
                _, o2, p2, q2 = dst[a - 1]
                if p2 * q2:
                    D[o2:o2 + p2 * q2, off:off + p * q] = _kron(f, self.P.diff_at(a, x1), f.eye(q))
            if b >= 1:
                _, o2, p2, q2 = dst[a]
                if p2 * q2:
                    blk = _kron(f, f.eye(p), self.Q.diff_at(b, x2))
                    D[o2:o2 + p2 * q2, off:off + p * q] = _mod(f, -blk) if a % 2 else blk
        return D

    def _actions(self, side: str, deg: int, c: int, x: int) -> np.ndarray:
        """All matrices of P_deg (or Q_deg) along morphisms c -> x: (|hom|, dim x, dim c)."""
        key = (side, deg, c, x)
        if key not in self._act:
            mod = (self.P if side == "P" else self.Q).modules[deg]
            self._act[key] = mod.push(c, self.field.eye(mod.dim(c)), targets=[x])[x]
        return self._act[key]

    def push_diagonal(self, n: int, c: int, v: np.ndarray, x: int) -> np.ndarray:
        """Images of v in degree n at (c, c) under (u, u) for every u : c -> x (C1 = C2)."""
        f = self.field
        nh = self.P.cat.hom_size(c, x)
        out = f.zeros((nh, self.dim(n, x, x)))
        dst = self.blocks(n, x, x)
        for (a, off, p, q), (_, o2, p2, q2) in zip(self.blocks(n, c, c), dst):
            if p * q == 0 or p2 * q2 == 0:
                continue
            V = v[off:off + p * q].reshape(p, q)
            if not V.any():
                continue
            b = n - a
            if p * p2 <= q * q2:
                # cache the P actions, push V^T through Q
                AP = self._actions("P", a, c, x)  # (nh, p2, p)
                X = self.Q.modules[b].push(c, V.T, targets=[x])[x]  # (nh, q2, p)
                img = np.einsum("uij,ukj->uik", AP, X)
            else:
                AQ = self._actions("Q", b, c, x)  # (nh, q2, q)
                X = self.P.modules[a].push(c, V, targets=[x])[x]  # (nh, p2, q)
                img = np.einsum("uij,ukj->uik", X, AQ)
            out[:, o2:o2 + p2 * q2] = out[:, o2:o2 + p2 * q2] + img.reshape(nh, -1)
        return _mod(f, out)


class _DiagonalTarget:
    """Delta^*(P (boxtimes) Q) as a lifting target over C."""

    def __init__(self, pr: ProductResolution):
        self.pr = pr

    def dim(self, n: int, c: int) -> int:
        return self.pr.dim(n, c, c)

    def push(self, n: int, c: int, v: np.ndarray, x: int) -> np.ndarray:
        return self.pr.push_diagonal(n, c, v, x)

    def solve(self, n: int, c: int, Y: np.ndarray) -> np.ndarray:
        X = self.pr.field.solve(self.pr.diff_at(n, c, c), Y)
        if X is None:
            raise StructuralError(f"lifting into the product resolution failed in degree {n} at {c}")
        return X


def total_cochain_complex(A: DenseComplex, B: DenseComplex, top: int) -> tuple[DenseComplex, list[list[int]]]:
    """Tensor product of cochain complexes in degrees 0..top; also block offsets per degree."""
    f = A.field
    dims, offs = [], []
    for n in range(top + 1):
        o, pos = [], 0
        for a in range(n + 1):
            o.append(pos)
            pos += A.dims[a] * B.dims[n - a]
        dims.append(pos)
        offs.append(o)
    maps = {}
    for n in range(top):
        D = f.zeros((dims[n + 1], dims[n]))
        for a in range(n + 1):
            b = n - a
            s0, sz = offs[n][a], A.dims[a] * B.dims[b]
            if sz == 0:
                continue
            if A.dims[a + 1] * B.dims[b]:
                t0 = offs[n + 1][a + 1]
                D[t0:t0 + A.dims[a + 1] * B.dims[b], s0:s0 + sz] = _kron(f, A.maps[a], f.eye(B.dims[b]))
            if A.dims[a] * B.dims[b + 1]:
                t0 = offs[n + 1][a]
                blk = _kron(f, f.eye(A.dims[a]), B.maps[b])
                D[t0:t0 + A.dims[a] * B.dims[b + 1], s0:s0 + sz] = _mod(f, -blk) if a % 2 else blk
        maps[n] = D
    return DenseComplex(f, "cochain", dims, maps), offs


def total_chain_complex(A: DenseComplex, B: DenseComplex, top: int) -> tuple[DenseComplex, list[list[int]]]:
    """Tensor product of chain complexes in degrees 0..top; also block offsets per degree."""
    f = A.field
    dims, offs = [], []
    for n in range(top + 1):
        o, pos = [], 0
        for a in range(n + 1):
            o.append(pos)
            pos += A.dims[a] * B.dims[n - a]
        dims.append(pos)
        offs.append(o)
    maps = {}
    for n in range(1, top + 1):
        D = f.zeros((dims[n - 1], dims[n]))
        for a in range(n + 1):
            b = n - a
            s0, sz = offs[n][a], A.dims[a] * B.dims[b]
            if sz == 0:
                continue
            if a >= 1 and A.dims[a - 1] * B.dims[b]:
                t0 = offs[n - 1][a - 1]
                D[t0:t0 + A.dims[a - 1] * B.dims[b], s0:s0 + sz] = _kron(f, A.maps[a], f.eye(B.dims[b]))
            if b >= 1 and A.dims[a] * B.dims[b - 1]:
                t0 = offs[n - 1][a]
                blk = _kron(f, f.eye(A.dims[a]), B.maps[b])
                D[t0:t0 + A.dims[a] * B.dims[b - 1], s0:s0 + sz] = _mod(f, -blk) if a % 2 else blk
        maps[n] = D
    return DenseComplex(f, "chain", dims, maps), offs


@dataclass
class KunnethResult:
    """Comparison along the diagonal plus the Kunneth bookkeeping."""

    comparison: ComparisonResult
    product_dims: dict[int, int]
    factor_dims: tuple[dict[int, int], dict[int, int]]
    diagonal_dims: dict[int, int]

    def kunneth_dims(self) -> dict[int, int]:
        d1, d2 = self.factor_dims
        return {n: sum(d1[a] * d2[n - a] for a in range(n + 1)) for n in self.product_dims}

    def product_factorizes(self) -> bool:
        """Ext (or Tor) over C x C has the Kunneth dimensions of the factors."""
        k = self.kunneth_dims()
        return all(k[n] == self.product_dims[n] for n in self.product_dims)

    def diagonal_factorizes(self) -> bool:
        """Ext (or Tor) over C of the pointwise tensors has the Kunneth dimensions."""
        k = self.kunneth_dims()
        return all(k[n] == self.diagonal_dims[n] for n in self.diagonal_dims)

    def as_json(self) -> dict:
        return {
            "comparison": self.comparison.as_json(),
            "product_dims": {str(n): v for n, v in sorted(self.product_dims.items())},
            "kunneth_dims": {str(n): v for n, v in sorted(self.kunneth_dims().items())},
            "diagonal_dims": {str(n): v for n, v in sorted(self.diagonal_dims.items())},
            "product_factorizes": self.product_factorizes(),
            "diagonal_factorizes": self.diagonal_factorizes(),
        }


def _unit_columns(field: Field, d: int) -> list[np.ndarray]:
    eye = field.eye(d)
    return [eye[:, p] for p in range(d)]


def _eval_hom(G: FunctorRep, res: Resolution, bases, n: int, c: int, cache: dict) -> np.ndarray:
    """E[p, :, i]: value at the unit vector e_p of P_n(c) of the i-th basis cochain."""
    key = ("hom", id(res), n, c)
    if key not in cache:
        mod = res.modules[n]
        d = mod.dim(c)
        gd = G.dims[c]
        eye = (G.field.eye(gd), np.arange(gd))
        M = hom_pairing(G, mod, _unit_columns(G.field, d), [c] * d, bases[n], [eye] * d)
        cache[key] = M.reshape(d, gd, -1)
    return cache[key]


def _eval_tensor(Fop: FunctorRep, res: Resolution, bases, n: int, c: int, cache: dict) -> np.ndarray:
    """E[:, p, s]: coordinates of s (x) e_p, for e_p a unit vector of P_n(c) and s in F'(c)."""
    key = ("tensor", id(res), n, c)
    if key not in cache:
        mod = res.modules[n]
        d = mod.dim(c)
        fd = Fop.dims[c]
        eye = (Fop.field.eye(fd), np.arange(fd))
        M = tensor_pairing(Fop, mod, _unit_columns(Fop.field, d), [c] * d, [eye] * d, bases[n])
        cache[key] = M.reshape(M.shape[0], d, fd)
    return cache[key]


def diagonal_comparison(B1: FunctorRep, B2: FunctorRep, C1: FunctorRep, C2: FunctorRep, n_max: int,
                        variance: str = "ext", refine: bool = True) -> KunnethResult:
    """res^Delta : Ext_{CxC}(B1 [x] B2, C1 [x] C2) -> Ext_C(B1 (x) B2, C1 (x) C2)   ("ext"), or
    res_Delta : Tor^C(C1 (x) C2, B1 (x) B2) -> Tor^{CxC}(C1 [x] C2, B1 [x] B2)     ("tor",
    C1, C2 on C^op).
    """
    cat = B1.cat
    if not (B2.cat == cat and (C1.cat == C2.cat)):
        raise StructuralError("diagonal comparison needs all factors over one category")
    field = B1.field
    top = n_max + 1
    P, Q = resolve(B1, top, refine=refine), resolve(B2, top, refine=refine)
    pr = ProductResolution(P, Q)
    diag = pointwise_tensor(B1, B2)
    R = resolve(diag, top, refine=refine)
    lifts = lift_chain_map(R, _DiagonalTarget(pr), lambda c, v: v, top)
    cache: dict = {}
    if variance == "ext":
        if C1.cat != cat:
            raise StructuralError("Ext targets must live on C")
        H1, H2 = hom_complex(P, C1), hom_complex(Q, C2)
        tot, offs = total_cochain_complex(H1.complex, H2.complex, top)
        small = hom_complex(R, pointwise_tensor(C1, C2))
        maps = {}
        for n in range(top + 1):
            rows = []
            for i, t in enumerate(R.modules[n].types):
                c = t.obj
                U, piv = small.bases[n][i]
                if U.shape[1] == 0:
                    continue
                blk = field.zeros((U.shape[1], tot.dims[n]))
                w = lifts[n][i]
                for a, off, p, q in pr.blocks(n, c, c):
                    b = n - a
                    h1, h2 = H1.complex.dims[a], H2.complex.dims[b]
                    if p * q == 0 or h1 * h2 == 0:
                        continue
                    K = w[off:off + p * q].reshape(p, q)
                    if not K.any():
                        continue
                    E1 = _eval_hom(C1, P, H1.bases, a, c, cache)  # (p, dC1, h1)
                    E2 = _eval_hom(C2, Q, H2.bases, b, c, cache)  # (q, dC2, h2)
                    T = np.einsum("pq,pai->qai", K, E1)
                    val = np.einsum("qai,qbj->abij", T, E2).reshape(E1.shape[1] * E2.shape[1], h1 * h2)
                    val = _mod(field, val)
                    blk[:, offs[n][a]:offs[n][a] + h1 * h2] = _mod(field, blk[:, offs[n][a]:offs[n][a] + h1 * h2]
                                                                   + val[piv])
                rows.append(blk)
            maps[n] = np.concatenate(rows, axis=0) if rows else field.zeros((0, tot.dims[n]))
        verdicts = induced_map(tot, small.complex, maps, n_max)
        comp = ComparisonResult("ext", verdicts, "kunneth", tot, small.complex, maps)
        factor = (H1.complex.summary(n_max).dims(), H2.complex.summary(n_max).dims())
        return KunnethResult(comp, tot.summary(n_max).dims(), factor, small.complex.summary(n_max).dims())
    if variance == "tor":
        if C1.cat != opposite(cat):
            raise StructuralError("Tor coefficients must live on C^op")
        T1, T2 = tensor_complex(C1, P), tensor_complex(C2, Q)
        tot, offs = total_chain_complex(T1.complex, T2.complex, top)
        small = tensor_complex(pointwise_tensor(C1, C2), R)
        maps = {}
        for n in range(top + 1):
            cols = []
            for i, t in enumerate(R.modules[n].types):
                c = t.obj
                S, _ = small.bases[n][i]
                if S.shape[1] == 0:
                    continue
                blk = field.zeros((tot.dims[n], S.shape[1]))
                w = lifts[n][i]
                S3 = S.reshape(C1.dims[c], C2.dims[c], -1)
                for a, off, p, q in pr.blocks(n, c, c):
                    b = n - a
                    h1, h2 = T1.complex.dims[a], T2.complex.dims[b]
                    if p * q == 0 or h1 * h2 == 0:
                        continue
                    K = w[off:off + p * q].reshape(p, q)
                    if not K.any():
                        continue
                    E1 = _eval_tensor(C1, P, T1.bases, a, c, cache)  # (h1, p, dC1)
                    E2 = _eval_tensor(C2, Q, T2.bases, b, c, cache)  # (h2, q, dC2)
                    X = _mod(field, np.einsum("jqt,str->jqsr", E2, S3))  # (h2, q, dC1, r)
                    Y = _mod(field, np.einsum("pq,jqsr->pjsr", K, X))
                    val = np.einsum("ips,pjsr->ijr", E1, Y).reshape(h1 * h2, -1)
                    blk[offs[n][a]:offs[n][a] + h1 * h2] = _mod(field, blk[offs[n][a]:offs[n][a] + h1 * h2] + val)
                cols.append(blk)
            maps[n] = np.concatenate(cols, axis=1) if cols else field.zeros((tot.dims[n], 0))
        verdicts = induced_map(small.complex, tot, maps, n_max)
        comp = ComparisonResult("tor", verdicts, "kunneth", small.complex, tot, maps)
        factor = (T1.complex.summary(n_max).dims(), T2.complex.summary(n_max).dims())
        return KunnethResult(comp, tot.summary(n_max).dims(), factor, small.complex.summary(n_max).dims())
    raise ValueError("variance must be 'ext' or 'tor'")
