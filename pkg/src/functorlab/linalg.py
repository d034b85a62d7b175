"""Exact linear algebra over ZZ, QQ and GF(p), plus homology of bounded complexes.

Dense work happens on numpy arrays (int64 residues for GF(p), object arrays of
Fractions for QQ, Python ints for ZZ).  Row reduction over fields is delegated to
python-flint; the Smith normal form over ZZ is implemented here with minimal
absolute value pivoting so that transforms are available.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

import flint
import numpy as np


class StructuralError(ValueError):
    """Raised when an input violates a structural invariant (shape, d^2, functoriality)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# rings and scalars


class IntegerRing:
    tag = "ZZ"
    char = 0
    is_field = False

    def canonical(self, v) -> int:
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise ValueError(f"{v} is not an integer")
            return int(v.numerator)
        return int(v)

    def __repr__(self) -> str:
        return "ZZ"

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerRing)

    def __hash__(self) -> int:
        return hash("ZZ")


class Field:
    """Common interface for the coefficient fields QQ and GF(p)."""

    tag: str
    char: int
    is_field = True

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.tag == self.tag

    def __hash__(self) -> int:
        return hash(self.tag)

    def __repr__(self) -> str:
        return self.tag

    # array helpers -----------------------------------------------------
    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _to_flint(self, a: np.ndarray):
        raise NotImplementedError

    def _from_flint(self, m, shape) -> np.ndarray:
        raise NotImplementedError

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form: (nonzero rows, pivot columns)."""
        a = self.array(a)
        rows, cols = a.shape
        if rows == 0 or cols == 0:
            return self.zeros((0, cols)), []
        red, rank = self._to_flint(a).rref()
        r = self._from_flint(red, (rows, cols))[:rank]
        pivots = [int(np.flatnonzero(r[i] != 0)[0]) for i in range(rank)]
        return r, pivots

    def rank(self, a: np.ndarray) -> int:
        a = np.asarray(a)
        if a.size == 0:
            return 0
        return int(self._to_flint(self.array(a)).rank())

    def nullspace(self, a: np.ndarray) -> np.ndarray:
        """Columns spanning {x : a x = 0}; shape (cols, nullity)."""
        a = self.array(a)
        cols = a.shape[1]
        r, pivots = self.rref(a)
        free = [j for j in range(cols) if j not in set(pivots)]
        out = self.zeros((cols, len(free)))
        for t, f in enumerate(free):
            out[f, t] = self.one
            for i, p in enumerate(pivots):
                out[p, t] = self.neg(r[i, f])
        return out

    def colspace(self, a: np.ndarray) -> np.ndarray:
        """Basis (as columns) of the column space, in reduced form."""
        r, _ = self.rref(self.array(a).T)
        return r.T.copy()

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Some x with a x = b (b may be a matrix), or None when inconsistent."""
        a = self.array(a)
        b = self.array(b)
        vec = b.ndim == 1
        if vec:
            b = b.reshape(-1, 1)
        rows, cols = a.shape
        aug = np.concatenate([a, b], axis=1) if rows else self.zeros((0, cols + b.shape[1]))
        r, pivots = self.rref(aug)
        if any(p >= cols for p in pivots):
            return None
        x = self.zeros((cols, b.shape[1]))
        for i, p in enumerate(pivots):
            x[p] = r[i, cols:]
        return x[:, 0] if vec else x

    def inverse(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        x = self.solve(a, self.eye(n))
        if x is None or self.rank(a) != n:
            raise StructuralError("matrix is not invertible")
        return x

    def neg(self, v):
        raise NotImplementedError


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.tag = f"GF({p})"
        self.one = 1

    def canonical(self, v) -> int:
        if isinstance(v, Fraction):
            return int(v.numerator) * pow(int(v.denominator), -1, self.p) % self.p
        return int(v) % self.p

    def neg(self, v):
        return (-v) % self.p

    def array(self, data) -> np.ndarray:
        a = np.asarray(data)
        if a.dtype == object:
            a = np.vectorize(self.canonical, otypes=[np.int64])(a) if a.size else a.astype(np.int64)
        return np.mod(a.astype(np.int64, copy=False), self.p)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.ndim == 2 and b.ndim == 2 and min(a.shape + b.shape) > 0 and a.shape[0] * a.shape[1] * b.shape[1] > 200_000:
            prod = self._to_flint(a) * self._to_flint(b)
            return self._from_flint(prod, (a.shape[0], b.shape[1]))
        if a.shape[-1] * (self.p - 1) ** 2 < 2**62:
            return np.mod(a @ b, self.p)
        return self.array(a.astype(object) @ b.astype(object))

    def _to_flint(self, a: np.ndarray):
        return flint.nmod_mat(a.shape[0], a.shape[1], a.ravel().tolist(), self.p)

    def _from_flint(self, m, shape) -> np.ndarray:
        return np.fromiter((int(x) for x in m.entries()), dtype=np.int64, count=shape[0] * shape[1]).reshape(shape)

    def rank(self, a: np.ndarray) -> int:
        a = np.asarray(a)
        if a.size == 0:
            return 0
        return int(self._to_flint(self.array(a)).rank())


class RationalField(Field):
    def __init__(self):
        self.char = 0
        self.tag = "QQ"
        self.one = Fraction(1)

    def canonical(self, v) -> Fraction:
        return Fraction(v)

    def neg(self, v):
        return -v

    def array(self, data) -> np.ndarray:
        a = np.asarray(data, dtype=object)
        if a.size == 0:
            return a.astype(object)
        return np.vectorize(Fraction, otypes=[object])(a)

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        out = a @ b
        if isinstance(out, np.ndarray):
            if out.size and a.shape[-1] == 0:
                return self.zeros(out.shape)
            return out
        return Fraction(out)

    def _to_flint(self, a: np.ndarray):
        return flint.fmpq_mat(a.shape[0], a.shape[1], [flint.fmpq(x.numerator, x.denominator) for x in a.ravel()])

    def _from_flint(self, m, shape) -> np.ndarray:
        vals = [Fraction(int(x.p), int(x.q)) for x in m.entries()]
        out = np.empty(len(vals), dtype=object)
        out[:] = vals
        return out.reshape(shape)


ZZ = IntegerRing()
QQ = RationalField()
_FIELDS: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _FIELDS:
        _FIELDS[p] = PrimeField(p)
    return _FIELDS[p]


def ring_from_tag(tag: str):
    """Parse 'ZZ', 'QQ', 'GF(p)' or 'F_p'."""
    t = tag.strip()
    if t in ("ZZ", "Z"):
        return ZZ
    if t in ("QQ", "Q"):
        return QQ
    for pre in ("GF(", "F("):
        if t.startswith(pre) and t.endswith(")"):
            return GF(int(t[len(pre):-1]))
    if t.startswith("F_") or t.startswith("GF"):
        return GF(int(t.lstrip("GF_")))
    raise ValueError(f"unknown ring tag {tag!r}")


@dataclass(frozen=True)
class Scalar:
    ring: object
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.canonical(self.value))


# ---------------------------------------------------------------------------
# sparse matrices


@dataclass(frozen=True)
class Matrix:
    """Sparse matrix; entries hold only nonzero canonical values."""

    ring: object
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in sorted(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise StructuralError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            v = self.ring.canonical(v)
            if v != 0:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, ring, data) -> "Matrix":
        a = np.asarray(data, dtype=object)
        if a.ndim != 2:
            a = a.reshape(len(data), -1) if len(data) else a.reshape(0, 0)
        rows, cols = a.shape
        nz = {(int(i), int(j)): a[i, j] for i, j in zip(*np.nonzero(a != 0))}
        return cls(ring, rows, cols, nz)

    @classmethod
    def identity(cls, ring, n: int) -> "Matrix":
        return cls(ring, n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, ring, rows: int, cols: int) -> "Matrix":
        return cls(ring, rows, cols, {})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        if isinstance(self.ring, Field):
            out = self.ring.zeros((self.rows, self.cols))
        else:
            out = np.zeros((self.rows, self.cols), dtype=object)
            out.fill(0)
        for (i, j), v in self.entries.items():
            out[i, j] = v
        return out

    def to_lists(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise StructuralError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, object]]] = {}
        for (i, j), v in other.entries.items():
            by_row.setdefault(i, []).append((j, v))
        acc: dict[tuple[int, int], object] = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        return Matrix(self.ring, self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self.entries


# ---------------------------------------------------------------------------
# Smith normal form over ZZ


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple[int, ...]
    rank: int
    left: tuple | None = None
    right: tuple | None = None
    left_inv: tuple | None = None


def _as_int_lists(m) -> list[list[int]]:
    if isinstance(m, Matrix):
        return m.to_lists()
    return [[int(x) for x in row] for row in m]


def smith_normal_form(m, transforms: bool = False) -> SmithForm:
    """Smith form of an integer matrix.

    With ``transforms`` the result carries unimodular L, R with L*m*R diagonal,
    and L^{-1} (handy for reading off lattice bases).
    """
    a = _as_int_lists(m)
    rows = len(a)
    cols = len(a[0]) if rows else (m.cols if isinstance(m, Matrix) else 0)
    L = [[int(i == j) for j in range(rows)] for i in range(rows)] if transforms else None
    Li = [[int(i == j) for j in range(rows)] for i in range(rows)] if transforms else None
    R = [[int(i == j) for j in range(cols)] for i in range(cols)] if transforms else None

    def row_op(dst, src, q):  # row_dst -= q * row_src
        if q == 0:
            return
        ra, rs = a[dst], a[src]
        for j in range(cols):
            if rs[j]:
                ra[j] -= q * rs[j]
        if L is not None:
            ld, ls = L[dst], L[src]
            for j in range(rows):
                if ls[j]:
                    ld[j] -= q * ls[j]
            # inverse: column_src += q * column_dst
            for r in Li:
                if r[dst]:
                    r[src] += q * r[dst]

    def col_op(dst, src, q):  # col_dst -= q * col_src
        if q == 0:
            return
        for r in a:
            if r[src]:
                r[dst] -= q * r[src]
        if R is not None:
            for r in R:
                if r[src]:
                    r[dst] -= q * r[src]

    def swap_rows(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]
            for r in Li:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i == j:
            return
        for r in a:
            r[i], r[j] = r[j], r[i]
        if R is not None:
            for r in R:
                r[i], r[j] = r[j], r[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if L is not None:
            L[i] = [-x for x in L[i]]
            for r in Li:
                r[i] = -r[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    row_op(i, t, a[i][t] // p)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t + 1, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, "r")
                for j in range(t + 1, cols):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), j, "c")
                if best[0] < abs(p):
                    if best[2] == "r":
                        swap_rows(t, best[1])
                    else:
                        swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    diag = tuple(a[i][i] for i in range(t))
    if transforms:
        return SmithForm(diag, len(diag), tuple(map(tuple, L)), tuple(map(tuple, R)), tuple(map(tuple, Li)))
    return SmithForm(diag, len(diag))


# ---------------------------------------------------------------------------
# field kernels


def rank_kernel_cokernel(m: Matrix) -> tuple[int, list[tuple], int]:
    if not isinstance(m.ring, Field):
        raise StructuralError("rank_kernel_cokernel needs a field; use smith_normal_form over ZZ")
    f = m.ring
    if m.rows == 0 or m.cols == 0:
        basis = f.eye(m.cols)
        return 0, [tuple(basis[:, j]) for j in range(m.cols)], m.rows
    a = m.to_dense()
    rank = f.rank(a)
    ker = f.nullspace(a)
    return rank, [tuple(ker[:, j]) for j in range(ker.shape[1])], m.rows - rank


# ---------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True)
class ChainComplex:
    """Bounded complex C_lo .. C_hi with d_n : C_n -> C_{n-1}."""

    ring: object
    lo: int
    hi: int
    ranks: Mapping[int, int]
    diffs: Mapping[int, Matrix]

    def __post_init__(self):
        ranks = {n: int(self.ranks.get(n, 0)) for n in range(self.lo, self.hi + 1)}
        object.__setattr__(self, "ranks", ranks)
        diffs = {}
        for n in range(self.lo, self.hi + 1):
            d = self.diffs.get(n)
            want = (self.rank(n - 1), self.rank(n))
            if d is None:
                d = Matrix.zero(self.ring, *want)
            elif not isinstance(d, Matrix):
                d = Matrix.from_dense(self.ring, d) if np.asarray(d).size else Matrix.zero(self.ring, *want)
            if d.shape != want:
                raise StructuralError(f"d_{n} has shape {d.shape}, expected {want}")
            diffs[n] = d
        object.__setattr__(self, "diffs", diffs)
        for n in range(self.lo + 1, self.hi + 1):
            if not (diffs[n - 1] @ diffs[n]).is_zero():
                raise StructuralError(f"d_{n - 1} o d_{n} != 0")

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0) if self.lo <= n <= self.hi else 0

    def d(self, n: int) -> Matrix:
        if self.lo <= n <= self.hi:
            return self.diffs[n]
        return Matrix.zero(self.ring, self.rank(n - 1), self.rank(n))

    def shift(self, s: int) -> "ChainComplex":
        """C[s]_n = C_{n-s}, same differentials."""
        return ChainComplex(self.ring, self.lo + s, self.hi + s,
                            {n + s: r for n, r in self.ranks.items()},
                            {n + s: d for n, d in self.diffs.items()})


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return self.free_rank

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologySummary:
    ring: object
    groups: Mapping[int, HomologyGroup]

    def __getitem__(self, n: int) -> HomologyGroup:
        return self.groups.get(n, HomologyGroup(0))

    def dims(self) -> dict[int, int]:
        return {n: g.free_rank for n, g in self.groups.items()}

    def degrees(self) -> list[int]:
        return sorted(self.groups)

    def as_json(self) -> dict:
        if isinstance(self.ring, Field):
            return {str(n): g.free_rank for n, g in sorted(self.groups.items())}
        return {str(n): {"free": g.free_rank, "torsion": list(g.torsion)} for n, g in sorted(self.groups.items())}


def _matrix_rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    if isinstance(m.ring, Field):
        return m.ring.rank(m.to_dense())
    return smith_normal_form(m).rank


def homology(c: ChainComplex) -> HomologySummary:
    groups = {}
    ranks = {n: _matrix_rank(c.d(n)) for n in range(c.lo, c.hi + 2)}
    for n in range(c.lo, c.hi + 1):
        free = c.rank(n) - ranks[n] - ranks[n + 1]
        if isinstance(c.ring, Field):
            groups[n] = HomologyGroup(free)
        else:
            nxt = c.d(n + 1)
            factors = smith_normal_form(nxt).invariant_factors if not nxt.is_zero() else ()
            groups[n] = HomologyGroup(free, tuple(d for d in factors if d > 1))
    return HomologySummary(c.ring, groups)


def universal_coefficients(h: HomologySummary, k) -> tuple[dict[int, int], dict[int, int]]:
    """dim k (x) H_n and dim Tor_1(k, H_n) for each degree of an integral summary."""
    if isinstance(h.ring, Field):
        raise StructuralError("universal_coefficients expects integral homology")
    if not isinstance(k, Field):
        raise StructuralError("coefficient ring must be a field")
    tensor, tor = {}, {}
    for n, g in h.groups.items():
        if k.char == 0:
            tensor[n], tor[n] = g.free_rank, 0
        else:
            t = sum(1 for d in g.torsion if d % k.char == 0)
            tensor[n], tor[n] = g.free_rank + t, t
    return tensor, tor


def summary_from_invariants(ring, data: Mapping[int, Iterable[int] | int]) -> HomologySummary:
    """Build a summary from {degree: dim} (field) or {degree: invariant list with 0 = ZZ}."""
    groups = {}
    for n, v in data.items():
        if isinstance(v, int):
            groups[n] = HomologyGroup(v)
        else:
            v = list(v)
            groups[n] = HomologyGroup(sum(1 for x in v if x == 0), tuple(sorted(x for x in v if x > 1)))
    return HomologySummary(ring, groups)


def field_complex_homology(field: Field, diffs: Sequence[np.ndarray], ranks: Sequence[int]) -> list[int]:
    """Homology dims of a complex given by dense matrices d_i : C_i -> C_{i-1}, i = 0..len-1."""
    rk = [field.rank(d) if np.asarray(d).size else 0 for d in diffs] + [0]
    return [ranks[i] - rk[i] - rk[i + 1] for i in range(len(ranks))]


def vec_gcd(vals: Iterable[int]) -> int:
    g = 0
    for v in vals:
        g = gcd(g, int(v))
    return g
