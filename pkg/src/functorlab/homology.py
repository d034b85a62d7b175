"""Ext and Tor over category algebras k[C], maps between them, and ring-level Tor.

Two independent routes compute the same groups:

* projective resolutions (``resolution.resolve``), giving Hom(P_*, G) and F' (x) P_*;
  this is the default because it stays small on the larger truncations;
* two-sided bar complexes, normalized or not, which are the textbook definition and
  serve as the oracle on small instances.

Comparison maps res^phi (Ext) and res_phi (Tor) are computed on both routes: by
lifting the identity of phi^*F to a chain map between resolutions, or by applying phi
to every arrow of a bar chain.  Verdicts come from ranks of the induced maps on
(co)homology, never from comparing dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct

import numpy as np

from .abgroups import GroupComplex, Lattice, cyclic_orders_rel, integer_kernel
from .category import CatFunctor, FiniteCategory, FiniteRing, OppositeFunctor, RingMap, SizingError, opposite
from .functors import FunctorRep, dual, restrict
from .linalg import (
    ZZ,
    ChainComplex,
    Field,
    HomologyGroup,
    HomologySummary,
    StructuralError,
    universal_coefficients,
)
from .projectives import apply_idempotent
from .resolution import FreeModule, Resolution, resolve

BAR_RANK_CAP = 12_000
DEFAULT_N_MAX = 3


# ---------------------------------------------------------------------------
# dense complexes over a field


@dataclass
class DenseComplex:
    """Complex of finite dimensional spaces in degrees 0..top.

    For ``kind == "cochain"`` maps[n] : C^n -> C^{n+1} (n < top); for "chain"
    maps[n] : C_n -> C_{n-1} (1 <= n <= top, maps[0] unused).  Homology is certified
    in degrees 0..top-1, where both adjacent maps are known.
    """

    field: Field
    kind: str
    dims: list[int]
    maps: dict[int, np.ndarray]
    _ranks: dict = dc_field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def out_map(self, n: int) -> np.ndarray | None:
        if self.kind == "cochain":
            return self.maps.get(n) if n < self.top else None
        return self.maps.get(n) if n >= 1 else None

    def in_map(self, n: int) -> np.ndarray | None:
        if self.kind == "cochain":
            return self.maps.get(n - 1) if n >= 1 else None
        return self.maps.get(n + 1) if n < self.top else None

    def _rank(self, m: np.ndarray | None) -> int:
        if m is None or m.size == 0:
            return 0
        key = id(m)
        if key not in self._ranks:
            self._ranks[key] = self.field.rank(m)
        return self._ranks[key]

    def homology_dim(self, n: int) -> int:
        if not 0 <= n < self.top:
            raise StructuralError(f"degree {n} is outside the certified range 0..{self.top - 1}")
        return self.dims[n] - self._rank(self.out_map(n)) - self._rank(self.in_map(n))

    def summary(self, n_max: int) -> HomologySummary:
        return HomologySummary(self.field, {n: HomologyGroup(self.homology_dim(n)) for n in range(n_max + 1)})

    def cycles(self, n: int) -> np.ndarray:
        m = self.out_map(n)
        if m is None or m.shape[0] == 0:
            return self.field.eye(self.dims[n])
        return self.field.nullspace(m)

    def boundaries(self, n: int) -> np.ndarray:
        m = self.in_map(n)
        if m is None or m.size == 0:
            return self.field.zeros((self.dims[n], 0))
        return self.field.colspace(m)

    def check_d_squared(self) -> None:
        f = self.field
        for n in range(self.top):
            if self.kind == "cochain":
                a, b = self.maps.get(n), self.maps.get(n + 1)
            else:
                a, b = self.maps.get(n + 1), self.maps.get(n)
                a, b = (a, b) if n >= 1 else (None, None)
            if a is None or b is None or a.size == 0 or b.size == 0:
                continue
            if np.any(f.matmul(b, a) != 0):
                raise StructuralError(f"d^2 != 0 at degree {n}")

    def to_chain_complex(self) -> ChainComplex:
        """As a ChainComplex (cochain degree n becomes chain degree -n)."""
        if self.kind == "chain":
            return ChainComplex(self.field, 0, self.top, {n: d for n, d in enumerate(self.dims)},
                                {n: self.maps[n] for n in range(1, self.top + 1) if n in self.maps})
        return ChainComplex(self.field, -self.top, 0, {-n: d for n, d in enumerate(self.dims)},
                            {-n: self.maps[n - 1] for n in range(1, self.top + 1) if (n - 1) in self.maps})


@dataclass
class MapVerdict:
    degree: int
    src_dim: int
    dst_dim: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.src_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.dst_dim

    @property
    def verdict(self) -> str:
        if self.injective and self.surjective:
            return "iso"
        if self.injective:
            return "injective-only"
        if self.surjective:
            return "surjective-only"
        return "neither"

    def as_json(self) -> dict:
        return {"degree": self.degree, "src_dim": self.src_dim, "dst_dim": self.dst_dim, "rank": self.rank,
                "verdict": self.verdict}


def induced_map(src: DenseComplex, dst: DenseComplex, maps: dict[int, np.ndarray], n_max: int,
                check: bool = True) -> list[MapVerdict]:
    """Ranks of the maps induced on homology by a degreewise map src -> dst."""
    f = src.field
    if check:
        _check_chain_map(src, dst, maps, n_max)
    out = []
    for n in range(n_max + 1):
        hs, hd = src.homology_dim(n), dst.homology_dim(n)
        Z = src.cycles(n)
        B = dst.boundaries(n)
        M = maps[n]
        img = f.matmul(M, Z) if Z.shape[1] and M.size else f.zeros((dst.dims[n], Z.shape[1]))
        rB = f.rank(B) if B.size else 0
        both = np.concatenate([img, B], axis=1)
        r = (f.rank(both) if both.size else 0) - rB
        out.append(MapVerdict(n, hs, hd, r))
    return out


def _check_chain_map(src: DenseComplex, dst: DenseComplex, maps: dict[int, np.ndarray], n_max: int) -> None:
    f = src.field
    for n in range(n_max + 1):
        if src.kind == "cochain":
            a, b = src.maps.get(n), dst.maps.get(n)
            if a is None or b is None or n + 1 not in maps:
                continue
            lhs = f.matmul(b, maps[n]) if b.size and maps[n].size else f.zeros((dst.dims[n + 1], src.dims[n]))
            rhs = f.matmul(maps[n + 1], a) if a.size and maps[n + 1].size else f.zeros((dst.dims[n + 1], src.dims[n]))
        else:
            if n == 0:
                continue
            a, b = src.maps.get(n), dst.maps.get(n)
            if a is None or b is None:
                continue
            lhs = f.matmul(b, maps[n]) if b.size and maps[n].size else f.zeros((dst.dims[n - 1], src.dims[n]))
            rhs = f.matmul(maps[n - 1], a) if a.size and maps[n - 1].size else f.zeros((dst.dims[n - 1], src.dims[n]))
        if not np.array_equal(f.array(lhs), f.array(rhs)):
            raise StructuralError(f"not a chain map in degree {n}")


# ---------------------------------------------------------------------------
# Hom and tensor complexes of a resolution


def _image_basis(field: Field, M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Columns spanning the column space of M, with rows ``piv`` forming an identity."""
    r, piv = field.rref(M.T)
    return r.T.copy(), np.asarray(piv, dtype=np.int64)


def _pairing_push(functor: FunctorRep, src_obj: int, U: np.ndarray, dst_obj: int, cache: dict) -> np.ndarray:
    key = (src_obj, id(U), dst_obj)
    if key not in cache:
        cache[key] = functor.push(src_obj, U, targets=[dst_obj])[dst_obj]  # (|hom|, dim dst, r)
    return cache[key]


def _contract(field: Field, w: np.ndarray, pushed: np.ndarray) -> np.ndarray:
    sup = np.flatnonzero(w)
    if len(sup) == 0:
        return field.zeros(pushed.shape[1:])
    out = np.tensordot(w[sup], pushed[sup], axes=(0, 0))
    return np.mod(out, field.char) if field.char else out


def hom_pairing(G: FunctorRep, elem_mod: FreeModule, elements: list[np.ndarray], elem_objs: list[int],
                src_bases: list[tuple[np.ndarray, np.ndarray]], dst_bases: list[tuple[np.ndarray, np.ndarray]],
                cache: dict | None = None) -> np.ndarray:
    """Matrix of f |-> (f(elements[i]))_i from (+)_j G(e_j)G(c_j) to (+)_i (dst space i).

    ``elements[i]`` lies in elem_mod(elem_objs[i]); f is determined by its values on
    the generators of elem_mod (spaces ``src_bases``).
    """
    field = G.field
    cache = {} if cache is None else cache
    rs = [b[0].shape[1] for b in src_bases]
    rd = [b[0].shape[1] for b in dst_bases]
    out = field.zeros((sum(rd), sum(rs)))
    so = np.cumsum([0] + rs)
    do = np.cumsum([0] + rd)
    for i, (w, x) in enumerate(zip(elements, elem_objs)):
        if rd[i] == 0:
            continue
        offs = elem_mod.offsets(x)
        Ud, pd = dst_bases[i]
        for j, t in enumerate(elem_mod.types):
            if rs[j] == 0:
                continue
            blk = w[offs[j]:offs[j + 1]]
            if not np.any(blk):
                continue
            wt = elem_mod.lift(j, x, blk)
            pushed = _pairing_push(G, t.obj, src_bases[j][0], x, cache)
            val = _contract(field, wt, pushed)  # dim G(x) x rs[j]
            out[do[i]:do[i + 1], so[j]:so[j + 1]] = val[pd]
    return out


def tensor_pairing(Fop: FunctorRep, elem_mod: FreeModule, elements: list[np.ndarray], elem_objs: list[int],
                   src_bases: list[tuple[np.ndarray, np.ndarray]], dst_bases: list[tuple[np.ndarray, np.ndarray]],
                   cache: dict | None = None) -> np.ndarray:
    """Matrix of s (x) e_i |-> s (x) elements[i] from (+)_i (src space i) to (+)_j F'(e_j)F'(c_j).

    ``elements[i]`` lies in elem_mod(elem_objs[i]); s runs over ``src_bases[i]``
    inside F'(elem_objs[i]); the target spaces belong to the generators of elem_mod.
    """
    field = Fop.field
    cache = {} if cache is None else cache
    rs = [b[0].shape[1] for b in src_bases]
    rd = [b[0].shape[1] for b in dst_bases]
    out = field.zeros((sum(rd), sum(rs)))
    so = np.cumsum([0] + rs)
    do = np.cumsum([0] + rd)
    for i, (w, x) in enumerate(zip(elements, elem_objs)):
        if rs[i] == 0:
            continue
        offs = elem_mod.offsets(x)
        for j, t in enumerate(elem_mod.types):
            if rd[j] == 0:
                continue
            blk = w[offs[j]:offs[j + 1]]
            if not np.any(blk):
                continue
            wt = elem_mod.lift(j, x, blk)  # over C(c_j, x) = C^op(x, c_j)
            pushed = _pairing_push(Fop, x, src_bases[i][0], t.obj, cache)
            val = _contract(field, wt, pushed)  # dim F'(c_j) x rs[i]
            out[do[j]:do[j + 1], so[i]:so[i + 1]] = val[dst_bases[j][1]]
    return out


def _type_space(functor: FunctorRep, t, obj: int, endo_cache: dict):
    """Basis of functor(e) functor(obj) for the type t = P^obj e, pivot rows forming I."""
    field = functor.field
    d = functor.dims[obj]
    if t.is_full or d == 0:
        return field.eye(d), np.arange(d)
    if obj not in endo_cache:
        endo_cache[obj] = functor.push(obj, field.eye(d), targets=[obj])[obj]
    return _image_basis(field, apply_idempotent(t.e, endo_cache[obj], field))


@dataclass
class ExtComplex:
    resolution: Resolution
    G: FunctorRep
    bases: list[list[tuple[np.ndarray, np.ndarray]]]
    complex: DenseComplex


@dataclass
class TorComplex:
    resolution: Resolution
    Fop: FunctorRep
    bases: list[list[tuple[np.ndarray, np.ndarray]]]
    complex: DenseComplex


def hom_complex(res: Resolution, G: FunctorRep) -> ExtComplex:
    """Hom(P_*, G) in degrees 0..n_top of the resolution."""
    field = G.field
    if res.cat != G.cat:
        raise StructuralError("Hom complex: G lives on a different category")
    endo: dict = {}
    bases = [[_type_space(G, t, t.obj, endo) for t in m.types] for m in res.modules]
    dims = [sum(b[0].shape[1] for b in bs) for bs in bases]
    maps = {}
    cache: dict = {}
    for n in range(res.n_top):
        nxt = res.modules[n + 1]
        maps[n] = hom_pairing(G, res.modules[n], res.images[n + 1], nxt.objs, bases[n], bases[n + 1], cache)
    return ExtComplex(res, G, bases, DenseComplex(field, "cochain", dims, maps))


def tensor_complex(Fop: FunctorRep, res: Resolution) -> TorComplex:
    """F' (x)_{k[C]} P_* in degrees 0..n_top of the resolution."""
    field = Fop.field
    if opposite(res.cat) != Fop.cat:
        raise StructuralError("tensor complex: F' must live on the opposite category")
    endo: dict = {}
    bases = [[_type_space(Fop, t, t.obj, endo) for t in m.types] for m in res.modules]
    dims = [sum(b[0].shape[1] for b in bs) for bs in bases]
    maps = {}
    cache: dict = {}
    for n in range(1, res.n_top + 1):
        src = res.modules[n]
        maps[n] = tensor_pairing(Fop, res.modules[n - 1], res.images[n], src.objs, bases[n], bases[n - 1], cache)
    return TorComplex(res, Fop, bases, DenseComplex(field, "chain", dims, maps))


# ---------------------------------------------------------------------------
# Ext and Tor


def _check_n_max(n_max: int) -> None:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")


def ext_complex(F: FunctorRep, G: FunctorRep, n_max: int, refine: bool = True) -> ExtComplex:
    _check_n_max(n_max)
    if F.cat != G.cat or F.field != G.field:
        raise StructuralError("Ext needs functors on the same category and field")
    return hom_complex(resolve(F, n_max + 1, refine=refine), G)


def tor_complex(Fop: FunctorRep, G: FunctorRep, n_max: int, refine: bool = True) -> TorComplex:
    _check_n_max(n_max)
    if Fop.cat != opposite(G.cat) or Fop.field != G.field:
        raise StructuralError("Tor needs F' on C^op and G on C over the same field")
    return tensor_complex(Fop, resolve(G, n_max + 1, refine=refine))


def ext_over_cat(F: FunctorRep, G: FunctorRep, n_max: int = DEFAULT_N_MAX, method: str = "resolution",
                 refine: bool = True) -> HomologySummary:
    """dim Ext^i_{k[C]}(F, G) for 0 <= i <= n_max."""
    if method == "resolution":
        return ext_complex(F, G, n_max, refine).complex.summary(n_max)
    if method in ("bar", "bar-unnormalized"):
        bc = ext_bar_complex(F, G, n_max + 1, normalized=(method == "bar"))
        return bc.complex.summary(n_max)
    raise ValueError(f"unknown method {method!r}")


def tor_over_cat(Fop: FunctorRep, G: FunctorRep, n_max: int = DEFAULT_N_MAX, method: str = "resolution",
                 refine: bool = True) -> HomologySummary:
    """dim Tor_i^{k[C]}(F', G) for 0 <= i <= n_max."""
    if method == "resolution":
        return tor_complex(Fop, G, n_max, refine).complex.summary(n_max)
    if method in ("bar", "bar-unnormalized"):
        bc = tor_bar_complex(Fop, G, n_max + 1, normalized=(method == "bar"))
        return bc.complex.summary(n_max)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# lifting maps between resolutions


class _TargetResolution:
    """A resolution viewed from the source category of phi (phi^*P for phi != id)."""

    def __init__(self, res: Resolution, phi: CatFunctor | None = None):
        self.res, self.phi = res, phi
        self._solvers: dict = {}

    def obj(self, c: int) -> int:
        return c if self.phi is None else self.phi.obj(c)

    def dim(self, n: int, c: int) -> int:
        return self.res.modules[n].dim(self.obj(c))

    def push(self, n: int, c: int, v: np.ndarray, x: int) -> np.ndarray:
        mod = self.res.modules[n]
        pc, px = self.obj(c), self.obj(x)
        full = mod.push(pc, v.reshape(-1, 1), targets=[px])[px][:, :, 0]
        return full if self.phi is None else full[self.phi.hom_map(c, x)]

    def solve(self, n: int, c: int, Y: np.ndarray) -> np.ndarray:
        """Some T with d_n(c) T = Y (columns)."""
        field = self.res.field
        D = self.res.diff_at(n, self.obj(c))
        X = field.solve(D, Y)
        if X is None:
            raise StructuralError(f"lifting failed in degree {n} at object {c}")
        return X


def lift_chain_map(Q: Resolution, target, alpha, n_top: int) -> list[list[np.ndarray]]:
    """phi_n(q) in T_n for each generator q of Q_n, n <= n_top, over the map ``alpha``.

    ``target`` provides dim(n, c), push(n, c, v, x) (images of v under every morphism
    c -> x of the source category) and solve(n, c, Y).  ``alpha(c, v)`` maps a vector
    of Q's target functor at c to the target functor of T (read at obj(c)).  Each lifted value is made e-fixed for its generator type so the
    assignment defines a map out of P^c e.
    """
    field = Q.field
    lifts: list[list[np.ndarray]] = []
    for n in range(n_top + 1):
        mod = Q.modules[n]
        ys: dict[int, list[tuple[int, np.ndarray]]] = {}
        push_cache: dict = {}
        for i, t in enumerate(mod.types):
            c = t.obj
            w = Q.images[n][i]
            if n == 0:
                y = alpha(c, w)
            else:
                prev = Q.modules[n - 1]
                offs = prev.offsets(c)
                y = field.zeros(target.dim(n - 1, c))
                for j, tj in enumerate(prev.types):
                    blk = w[offs[j]:offs[j + 1]]
                    if not np.any(blk):
                        continue
                    wt = prev.lift(j, c, blk)
                    key = (j, c)
                    if key not in push_cache:
                        push_cache[key] = target.push(n - 1, tj.obj, lifts[n - 1][j], c)
                    y = y + _contract(field, wt, push_cache[key])
                if field.char:
                    y = field.array(y)
            ys.setdefault(c, []).append((i, y))
        vals: list[np.ndarray | None] = [None] * len(mod.types)
        for c, items in ys.items():
            Y = np.stack([y for _, y in items], axis=1)
            X = target.solve(n, c, Y)
            for col, (i, _) in enumerate(items):
                t = mod.types[i]
                v = X[:, col]
                if not t.is_full:
                    v = apply_idempotent(t.e, target.push(n, c, v, c), field)
                vals[i] = v
        lifts.append(vals)
    return lifts


@dataclass
class ComparisonResult:
    variance: str
    degrees: list[MapVerdict]
    method: str
    src_complex: DenseComplex | None = None
    dst_complex: DenseComplex | None = None
    maps: dict | None = None

    def verdicts(self) -> list[str]:
        return [d.verdict for d in self.degrees]

    def all_iso(self) -> bool:
        return all(d.verdict == "iso" for d in self.degrees)

    def as_json(self) -> dict:
        return {"variance": self.variance, "method": self.method, "degrees": [d.as_json() for d in self.degrees]}


def ext_transfer(phi: CatFunctor, P: Resolution, G: FunctorRep, Q: Resolution, pG: FunctorRep, alpha,
                 n_max: int) -> tuple[ExtComplex, ExtComplex, dict[int, np.ndarray]]:
    """Cochain map Hom(P, G) -> Hom(Q, phi^*G) induced by a lift Q -> phi^*P of ``alpha``.

    ``alpha(c, v)`` sends v in the resolved functor of Q at c to the resolved functor of
    P at phi(c); phi^*G has the value spaces of G, so the bases of Hom(Q, pG) serve as
    targets of the pairing.
    """
    dst = hom_complex(P, G)
    src = hom_complex(Q, pG)
    lifts = lift_chain_map(Q, _TargetResolution(P, phi), alpha, n_max + 1)
    maps = {n: hom_pairing(G, P.modules[n], lifts[n], [phi.obj(t.obj) for t in Q.modules[n].types],
                           dst.bases[n], src.bases[n])
            for n in range(n_max + 2)}
    return dst, src, maps


def postcompose_map(src: ExtComplex, dst: ExtComplex, tau: list[np.ndarray]) -> dict[int, np.ndarray]:
    """Cochain map Hom(Q, H) -> Hom(Q, H') of a natural transformation tau : H -> H'.

    Both complexes must be built on the same resolution; tau[x] is the matrix at x.
    """
    if src.resolution is not dst.resolution:
        raise StructuralError("postcomposition needs Hom complexes over one resolution")
    field = src.G.field
    maps = {}
    for n, mod in enumerate(src.resolution.modules):
        blocks = []
        for t, (Bs, _), (_, pd) in zip(mod.types, src.bases[n], dst.bases[n]):
            img = field.matmul(tau[t.obj], Bs) if Bs.size and tau[t.obj].size else \
                field.zeros((dst.G.dims[t.obj], Bs.shape[1]))
            blocks.append(img[pd])
        rd = [len(pd) for _, pd in dst.bases[n]]
        rs = [b[0].shape[1] for b in src.bases[n]]
        M = field.zeros((sum(rd), sum(rs)))
        do, so = np.cumsum([0] + rd), np.cumsum([0] + rs)
        for j, blk in enumerate(blocks):
            M[do[j]:do[j + 1], so[j]:so[j + 1]] = blk
        maps[n] = M
    return maps


def comparison_map(phi: CatFunctor, F: FunctorRep, G: FunctorRep, n_max: int = DEFAULT_N_MAX,
                   variance: str = "ext", method: str = "resolution", refine: bool = True) -> ComparisonResult:
    """res^phi : Ext_D(F, G) -> Ext_C(phi^*F, phi^*G)  (variance "ext"), or
    res_phi : Tor^C(phi^*F, phi^*G) -> Tor^D(F, G) (variance "tor", F on D^op).
    """
    _check_n_max(n_max)
    if method in ("bar", "bar-unnormalized"):
        return _bar_comparison(phi, F, G, n_max, variance, normalized=(method == "bar"))
    if method != "resolution":
        raise ValueError(f"unknown method {method!r}")
    if variance == "ext":
        if F.cat != phi.dst or G.cat != phi.dst:
            raise StructuralError("comparison map: F and G must live on the target of phi")
        pF, pG = restrict(phi, F), restrict(phi, G)
        P = resolve(F, n_max + 1, refine=refine)
        Q = resolve(pF, n_max + 1, refine=refine)
        dst, src, maps = ext_transfer(phi, P, G, Q, pG, lambda c, v: v, n_max)
        verdicts = induced_map(dst.complex, src.complex, maps, n_max)
        return ComparisonResult("ext", verdicts, "resolution", dst.complex, src.complex, maps)
    if variance == "tor":
        if F.cat != opposite(phi.dst) or G.cat != phi.dst:
            raise StructuralError("comparison map: F' must live on D^op and G on D")
        phio = OppositeFunctor(phi)
        pF, pG = restrict(phio, F), restrict(phi, G)
        P = resolve(G, n_max + 1, refine=refine)
        Q = resolve(pG, n_max + 1, refine=refine)
        dst = tensor_complex(F, P)
        src = tensor_complex(pF, Q)
        lifts = lift_chain_map(Q, _TargetResolution(P, phi), lambda c, v: v, n_max + 1)
        maps = {n: tensor_pairing(F, P.modules[n], lifts[n], [phi.obj(t.obj) for t in Q.modules[n].types],
                                  src.bases[n], dst.bases[n])
                for n in range(n_max + 2)}
        verdicts = induced_map(src.complex, dst.complex, maps, n_max)
        return ComparisonResult("tor", verdicts, "resolution", src.complex, dst.complex, maps)
    raise ValueError("variance must be 'ext' or 'tor'")


# ---------------------------------------------------------------------------
# bar complexes


@dataclass
class ChainBlock:
    objs: tuple[int, ...]
    arrows: np.ndarray  # (count, n): arrows[:, i] is f_{i+1} : c_{i+1} -> c_i


def enumerate_chains(cat: FiniteCategory, n: int, normalized: bool) -> list[ChainBlock]:
    """Chains c_0 <- c_1 <- ... <- c_n, ordered by object tuple then arrow indices."""
    blocks = []
    for objs in iproduct(cat.objects(), repeat=n + 1):
        sizes = [cat.hom_size(objs[i + 1], objs[i]) for i in range(n)]
        if any(s == 0 for s in sizes):
            continue
        grids = np.indices(sizes).reshape(n, -1).T if n else np.zeros((1, 0), dtype=np.int64)
        if normalized and n:
            keep = np.ones(len(grids), dtype=bool)
            for i in range(n):
                if objs[i] == objs[i + 1]:
                    keep &= grids[:, i] != cat.identity(objs[i])
            grids = grids[keep]
        if len(grids):
            blocks.append(ChainBlock(objs, np.ascontiguousarray(grids, dtype=np.int64)))
    return blocks


def bar_rank_estimate(cat: FiniteCategory, left_dims, right_dims, n_max: int, normalized: bool = True) -> list[int]:
    """Rank of B_n(F', C, G) for n = 0..n_max by the counting formula (no allocation)."""
    objs = list(cat.objects())
    H = np.array([[cat.hom_size(b, a) - (1 if normalized and a == b else 0) for b in objs] for a in objs],
                 dtype=object)  # H[a, b] = number of admissible arrows b -> a
    left = np.array([int(left_dims[a]) for a in objs], dtype=object)
    right = np.array([int(right_dims[b]) for b in objs], dtype=object)
    out = []
    vec = left.copy()
    for n in range(n_max + 1):
        out.append(int(sum(vec[b] * right[b] for b in objs)))
        vec = np.array([sum(vec[a] * H[a, b] for a in objs) for b in objs], dtype=object)
    return out


@dataclass
class BarComplex:
    """Two-sided bar complex B(F', C, G) (chain) or Hom(B(C, F), G) (cochain)."""

    cat: FiniteCategory
    left: FunctorRep
    right: FunctorRep
    n_top: int
    normalized: bool
    chains: list[list[ChainBlock]]
    offsets: list[dict[tuple, int]]
    complex: DenseComplex


def _block_offsets(blocks: list[ChainBlock], ldim, rdim) -> tuple[dict, int]:
    offs, pos = {}, 0
    for b in blocks:
        offs[b.objs] = pos
        pos += len(b.arrows) * ldim[b.objs[0]] * rdim[b.objs[-1]]
    return offs, pos


def _chain_lookup(blocks: list[ChainBlock], cat: FiniteCategory) -> dict:
    """objs -> (array mapping mixed-radix arrow code to row in the block, radix)."""
    out = {}
    for b in blocks:
        n = len(b.objs) - 1
        sizes = [cat.hom_size(b.objs[i + 1], b.objs[i]) for i in range(n)]
        radix = np.array([int(np.prod(sizes[i + 1:])) for i in range(n)], dtype=np.int64)
        table = np.full(int(np.prod(sizes)) if n else 1, -1, dtype=np.int64)
        codes = (b.arrows * radix).sum(axis=1) if n else np.zeros(1, dtype=np.int64)
        table[codes] = np.arange(len(b.arrows))
        out[b.objs] = (table, radix)
    return out


def tor_bar_complex(Fop: FunctorRep, G: FunctorRep, n_top: int, normalized: bool = True,
                    cap: int = BAR_RANK_CAP) -> BarComplex:
    """B_n = (+) F'(c_0) (x) k[C(c_1,c_0)] (x) ... (x) k[C(c_n,c_{n-1})] (x) G(c_n), n <= n_top."""
    cat, field = G.cat, G.field
    if Fop.cat != opposite(cat):
        raise StructuralError("bar complex: F' must live on C^op")
    est = bar_rank_estimate(cat, Fop.dims, G.dims, n_top, normalized)
    if max(est) > cap:
        raise SizingError(f"bar complex rank {max(est)} exceeds cap {cap}", {"ranks": est, "cap": cap})
    ld, rd = Fop.dims, G.dims
    chains = [enumerate_chains(cat, n, normalized) for n in range(n_top + 1)]
    offsets, dims = [], []
    for blocks in chains:
        o, d = _block_offsets(blocks, ld, rd)
        offsets.append(o)
        dims.append(d)
    lookups = [_chain_lookup(blocks, cat) for blocks in chains]
    fact = {a: Fop.action(a) for a in cat.objects() if ld[a]}
    gact = {a: G.action(a) for a in cat.objects() if rd[a]}
    maps = {}
    for n in range(1, n_top + 1):
        D = field.zeros((dims[n - 1], dims[n]))
        for b in chains[n]:
            objs, arr = b.objs, b.arrows
            c0, cn = objs[0], objs[-1]
            base = offsets[n][objs]
            nl, nr = ld[c0], rd[cn]
            if nl * nr == 0:
                continue
            for i in range(n + 1):
                sign = 1 if i % 2 == 0 else -1
                if i == 0:
                    new_objs = objs[1:]
                    new_arr = arr[:, 1:]
                elif i == n:
                    new_objs = objs[:-1]
                    new_arr = arr[:, :-1]
                else:
                    comp = cat.compose_table(objs[i + 1], objs[i], objs[i - 1])[arr[:, i], arr[:, i - 1]]
                    new_objs = objs[:i] + objs[i + 1:]
                    new_arr = np.concatenate([arr[:, :i - 1], comp[:, None], arr[:, i + 1:]], axis=1)
                if new_objs not in offsets[n - 1]:
                    continue
                table, radix = lookups[n - 1][new_objs]
                codes = (new_arr * radix).sum(axis=1) if n - 1 else np.zeros(len(arr), dtype=np.int64)
                rows = table[codes]
                valid = np.flatnonzero(rows >= 0)
                tbase = offsets[n - 1][new_objs]
                nl2, nr2 = ld[new_objs[0]], rd[new_objs[-1]]
                for k in valid:
                    src0 = base + k * nl * nr
                    dst0 = tbase + rows[k] * nl2 * nr2
                    if i == 0:
                        # F'(f_1) : F'(c_0) -> F'(c_1), f_1 in C(c_1, c_0) = C^op(c_0, c_1)
                        L = fact[c0][objs[1]][arr[k, 0]]
                        R = field.eye(nr)
                    elif i == n:
                        L = field.eye(nl)
                        R = gact[cn][objs[-2]][arr[k, -1]]
                    else:
                        L, R = field.eye(nl), field.eye(nr)
                    blk = np.kron(L, R)
                    D[dst0:dst0 + nl2 * nr2, src0:src0 + nl * nr] += sign * blk
        maps[n] = field.array(D) if field.char else D
    dc = DenseComplex(field, "chain", dims, maps)
    return BarComplex(cat, Fop, G, n_top, normalized, chains, offsets, dc)


def ext_bar_complex(F: FunctorRep, G: FunctorRep, n_top: int, normalized: bool = True,
                    cap: int = BAR_RANK_CAP) -> BarComplex:
    """Hom(B(C, F), G): C^n = (+) Hom_k(k[C(c_1,c_0)] (x) ... (x) F(c_n), G(c_0)).

    In the dual basis this is the transpose of B(DG, C, F), which is how it is built.
    """
    t = tor_bar_complex(dual(G), F, n_top, normalized, cap)
    maps = {n - 1: t.complex.maps[n].T.copy() for n in range(1, n_top + 1)}
    dc = DenseComplex(G.field, "cochain", list(t.complex.dims), maps)
    return BarComplex(t.cat, t.left, t.right, n_top, normalized, t.chains, t.offsets, dc)


def _bar_chain_map(phi: CatFunctor, src: BarComplex, dst: BarComplex, n: int) -> np.ndarray:
    """phi applied to every arrow: B_n(phi^*F', C, phi^*G) -> B_n(F', D, G)."""
    field = src.complex.field
    cat_d = dst.cat
    M = field.zeros((dst.complex.dims[n], src.complex.dims[n]))
    look = _chain_lookup(dst.chains[n], cat_d)
    ld, rd = src.left.dims, src.right.dims
    for b in src.chains[n]:
        objs = b.objs
        nl, nr = ld[objs[0]], rd[objs[-1]]
        if nl * nr == 0:
            continue
        new_objs = tuple(phi.obj(c) for c in objs)
        if new_objs not in dst.offsets[n]:
            continue
        cols = [phi.hom_map(objs[i + 1], objs[i])[b.arrows[:, i]] for i in range(n)]
        new_arr = np.stack(cols, axis=1) if n else np.zeros((len(b.arrows), 0), dtype=np.int64)
        table, radix = look[new_objs]
        codes = (new_arr * radix).sum(axis=1) if n else np.zeros(len(b.arrows), dtype=np.int64)
        rows = table[codes]
        base, tbase = src.offsets[n][objs], dst.offsets[n][new_objs]
        blk = field.eye(nl * nr)
        for k in np.flatnonzero(rows >= 0):
            s0, d0 = base + k * nl * nr, tbase + rows[k] * nl * nr
            M[d0:d0 + nl * nr, s0:s0 + nl * nr] += blk
    return field.array(M) if field.char else M


def _bar_comparison(phi: CatFunctor, F: FunctorRep, G: FunctorRep, n_max: int, variance: str,
                    normalized: bool) -> ComparisonResult:
    method = "bar" if normalized else "bar-unnormalized"
    if variance == "tor":
        phio = OppositeFunctor(phi)
        src = tor_bar_complex(restrict(phio, F), restrict(phi, G), n_max + 1, normalized)
        dst = tor_bar_complex(F, G, n_max + 1, normalized)
        maps = {n: _bar_chain_map(phi, src, dst, n) for n in range(n_max + 2)}
        return ComparisonResult("tor", induced_map(src.complex, dst.complex, maps, n_max), method,
                                src.complex, dst.complex, maps)
    if variance == "ext":
        # restriction of cochains is the transpose of the chain map for B(DG, -, F)
        phio = OppositeFunctor(phi)
        DG = dual(G)
        src_t = tor_bar_complex(restrict(phio, DG), restrict(phi, F), n_max + 1, normalized)
        dst_t = tor_bar_complex(DG, F, n_max + 1, normalized)
        chain = {n: _bar_chain_map(phi, src_t, dst_t, n) for n in range(n_max + 2)}
        dst = DenseComplex(F.field, "cochain", list(dst_t.complex.dims),
                           {n - 1: dst_t.complex.maps[n].T.copy() for n in range(1, n_max + 2)})
        src = DenseComplex(F.field, "cochain", list(src_t.complex.dims),
                           {n - 1: src_t.complex.maps[n].T.copy() for n in range(1, n_max + 2)})
        maps = {n: chain[n].T.copy() for n in chain}
        return ComparisonResult("ext", induced_map(dst, src, maps, n_max), method, dst, src, maps)
    raise ValueError("variance must be 'ext' or 'tor'")


# ---------------------------------------------------------------------------
# ring-level Tor


class FiniteAlgebra:
    """A finite dimensional associative unital algebra over a field.

    ``mult[i][j]`` is the product of basis elements i and j as a coordinate vector;
    basis element 0 must be the unit.
    """

    def __init__(self, field: Field, mult, name: str = ""):
        self.field = field
        self.mult = field.array(np.asarray(mult, dtype=object) if field.char == 0 else mult)
        self.dim = self.mult.shape[0]
        self.name = name
        if self.mult.shape != (self.dim, self.dim, self.dim):
            raise StructuralError("structure constants must have shape (d, d, d)")
        unit = field.eye(self.dim)
        for i in range(self.dim):
            if not (np.array_equal(self.mult[0, i], unit[i]) and np.array_equal(self.mult[i, 0], unit[i])):
                raise StructuralError("basis element 0 is not a unit")

    @classmethod
    def truncated_polynomial(cls, field: Field, n: int) -> "FiniteAlgebra":
        """k[x]/x^n with basis 1, x, ..., x^{n-1}."""
        m = field.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                if i + j < n:
                    m[i, j, i + j] = field.one
        return cls(field, m, f"{field.tag}[x]/x^{n}")

    @classmethod
    def from_ring(cls, ring: FiniteRing, field: Field) -> "FiniteAlgebra":
        """R (x)_ZZ k for R = prod ZZ/m_i: a copy of k for each factor with char k | m_i.

        Basis: the unit, then the factor idempotents u_2, ..., u_d.
        """
        d = sum(1 for m in ring.moduli if field.char and m % field.char == 0)
        if d == 0:
            raise StructuralError("R (x) k is the zero algebra")
        m = field.zeros((d, d, d))
        for i in range(d):
            m[0, i, i] = m[i, 0, i] = field.one
            m[i, i, i] = field.one
        return cls(field, m, f"{ring.name} (x) {field.tag}")

    def left_regular(self) -> list[np.ndarray]:
        """L_i = matrix of left multiplication by basis element i."""
        return [self.mult[i].T.copy() for i in range(self.dim)]

    def augmentation_module(self) -> "AlgebraModule":
        """k with every basis element except the unit acting by zero (needs an augmentation)."""
        acts = [self.field.zeros((1, 1)) for _ in range(self.dim)]
        acts[0][0, 0] = self.field.one
        return AlgebraModule(self, acts)


@dataclass
class AlgebraModule:
    """A module over a FiniteAlgebra: acts[i] is the action of basis element i."""

    algebra: FiniteAlgebra
    acts: list[np.ndarray]

    @property
    def dim(self) -> int:
        return self.acts[0].shape[0]

    def validate(self, side: str = "left") -> None:
        A, f = self.algebra, self.algebra.field
        for i in range(A.dim):
            for j in range(A.dim):
                prod = sum((A.mult[i, j, t] * self.acts[t] for t in range(A.dim)), f.zeros((self.dim, self.dim)))
                prod = f.array(prod) if f.char else prod
                lhs = f.matmul(self.acts[i], self.acts[j]) if side == "left" else f.matmul(self.acts[j], self.acts[i])
                if not np.array_equal(f.array(lhs) if f.char else lhs, prod):
                    raise StructuralError("module action is not associative")


def algebra_bar_complex(M: AlgebraModule, N: AlgebraModule, n_top: int, cap: int = BAR_RANK_CAP) -> DenseComplex:
    """Normalized bar complex M (x) Rbar^{(x)n} (x) N over the base field (M right, N left module).

    Rbar = R / k.1 has basis the non-unit basis elements.
    """
    A, f = M.algebra, M.algebra.field
    r = A.dim - 1
    dm, dn = M.dim, N.dim
    dims = [dm * r ** n * dn for n in range(n_top + 1)]
    if max(dims) > cap:
        raise SizingError(f"bar complex rank {max(dims)} exceeds cap {cap}", {"ranks": dims, "cap": cap})
    maps = {}
    for n in range(1, n_top + 1):
        D = f.zeros((dims[n - 1], dims[n]))
        for word in iproduct(range(1, A.dim), repeat=n):
            widx = 0
            for a in word:
                widx = widx * r + (a - 1)
            for i in range(n + 1):
                sign = 1 if i % 2 == 0 else -1
                if i == 0:
                    rest = word[1:]
                    ridx = 0
                    for a in rest:
                        ridx = ridx * r + (a - 1)
                    # m (x) a ... |-> m.a (x) ...; right action matrix on row vectors
                    act = M.acts[word[0]]
                    for s in range(dm):
                        for t in range(dn):
                            col = (s * r ** n + widx) * dn + t
                            for s2 in range(dm):
                                if act[s2, s]:
                                    row = (s2 * r ** (n - 1) + ridx) * dn + t
                                    D[row, col] += sign * act[s2, s]
                elif i == n:
                    rest = word[:-1]
                    ridx = 0
                    for a in rest:
                        ridx = ridx * r + (a - 1)
                    act = N.acts[word[-1]]
                    for s in range(dm):
                        for t in range(dn):
                            col = (s * r ** n + widx) * dn + t
                            for t2 in range(dn):
                                if act[t2, t]:
                                    row = (s * r ** (n - 1) + ridx) * dn + t2
                                    D[row, col] += sign * act[t2, t]
                else:
                    prod = A.mult[word[i - 1], word[i]]
                    for c in range(1, A.dim):
                        if not prod[c]:
                            continue
                        rest = word[:i - 1] + (c,) + word[i + 1:]
                        ridx = 0
                        for a in rest:
                            ridx = ridx * r + (a - 1)
                        for s in range(dm):
                            for t in range(dn):
                                col = (s * r ** n + widx) * dn + t
                                row = (s * r ** (n - 1) + ridx) * dn + t
                                D[row, col] += sign * prod[c]
        maps[n] = f.array(D) if f.char else D
    return DenseComplex(f, "chain", dims, maps)


def algebra_free_resolution_tor(M: AlgebraModule, N: AlgebraModule, n_top: int) -> DenseComplex:
    """Tor via a greedy free resolution of the right module M: P_n = R^{g_n}, then P (x)_R N."""
    A, f = M.algebra, M.algebra.field
    d = A.dim
    # right regular action: x . a for basis a, as a matrix on row coordinates
    right = [A.mult[:, a, :].T.copy() for a in range(d)]  # right[a] @ x = x * a

    def module_images(target_acts, dim_t, gens):
        """Map R^g -> target, basis (generator j, basis element a) |-> gens[j] . a."""
        cols = []
        for g in gens:
            for a in range(d):
                cols.append(f.matmul(target_acts[a], g.reshape(-1, 1)).reshape(-1))
        return np.stack(cols, axis=1) if cols else f.zeros((dim_t, 0))

    def greedy(target_acts, dim_t, sub_basis):
        """R-generators of the submodule spanned by the columns of sub_basis."""
        gens = []
        span = f.zeros((dim_t, 0))
        for k in range(sub_basis.shape[1]):
            v = sub_basis[:, k]
            test = np.concatenate([span, v.reshape(-1, 1)], axis=1)
            if f.rank(test) > (f.rank(span) if span.size else 0):
                gens.append(v)
                span = module_images(target_acts, dim_t, gens)
        return gens

    acts_M = M.acts
    gens = greedy(acts_M, M.dim, f.eye(M.dim))
    images = [gens]
    maps_to = [module_images(acts_M, M.dim, gens)]
    for n in range(1, n_top + 1):
        prev = len(images[-1])
        D = maps_to[-1]
        K = f.nullspace(D) if D.shape[1] else f.zeros((0, 0))
        acts_free = [np.kron(f.eye(prev), right[a]) for a in range(d)]
        g = greedy(acts_free, prev * d, K)
        images.append(g)
        maps_to.append(module_images(acts_free, prev * d, g))
    # P_n (x)_R N = N^{g_n}; e_j (x) y |-> sum over components
    ranks = [len(g) for g in images]
    dims = [r * N.dim for r in ranks]
    maps = {}
    for n in range(1, n_top + 1):
        Dn = f.zeros((dims[n - 1], dims[n]))
        for j, v in enumerate(images[n]):
            for k in range(ranks[n - 1]):
                comp = v[k * d:(k + 1) * d]
                act = sum((comp[a] * N.acts[a] for a in range(d)), f.zeros((N.dim, N.dim)))
                act = f.array(act) if f.char else act
                Dn[k * N.dim:(k + 1) * N.dim, j * N.dim:(j + 1) * N.dim] = act
        maps[n] = Dn
    return DenseComplex(f, "chain", dims, maps)


@dataclass
class RingModule:
    """A finite module over a FiniteRing R: underlying group (+) ZZ/orders[i], with
    ``gen_acts[t]`` the integer matrix of multiplication by the t-th additive generator
    of R (the element with residue 1 in factor t and 0 elsewhere)."""

    ring: FiniteRing
    orders: tuple[int, ...]
    gen_acts: list[np.ndarray]

    @classmethod
    def from_ring_map(cls, phi: RingMap) -> "RingModule":
        """S viewed as an R-module through phi: R -> S."""
        R, S = phi.src, phi.dst
        acts = []
        for t in range(len(R.moduli)):
            res = np.zeros(len(R.moduli), dtype=np.int64)
            res[t] = 1
            img = S.residues(phi.table[int(R.encode_residues(res))])
            acts.append(np.diag(img).astype(np.int64))
        return cls(R, tuple(S.moduli), acts)

    @classmethod
    def free(cls, ring: FiniteRing, rank: int) -> "RingModule":
        orders = tuple(m for _ in range(rank) for m in ring.moduli)
        t = len(ring.moduli)
        acts = []
        for s in range(t):
            e = np.zeros((t, t), dtype=np.int64)
            e[s, s] = 1
            acts.append(np.kron(np.eye(rank, dtype=np.int64), e))
        return cls(ring, orders, acts)

    def act(self, r: int) -> np.ndarray:
        """Matrix of multiplication by the ring element with code r."""
        res = self.ring.residues(r)
        out = np.zeros((len(self.orders), len(self.orders)), dtype=np.int64)
        for t, c in enumerate(res):
            out = out + int(c) * self.gen_acts[t]
        return out


def _ring_kernel_generators(R: FiniteRing, src_rank: int, images: list[np.ndarray], target: RingModule
                            ) -> list[np.ndarray]:
    """R-module generators of ker(R^{src_rank} -> target, e_j |-> images[j]), as vectors of
    ring residues in ZZ^{t * src_rank}."""
    t = len(R.moduli)
    n = src_rank * t
    s = len(target.orders)
    # ZZ-generator (j, factor u) of R^g maps to gen_acts[u] @ images[j]
    phi = np.zeros((s, n), dtype=object)
    for j in range(src_rank):
        for u in range(t):
            phi[:, j * t + u] = target.gen_acts[u] @ np.asarray(images[j], dtype=np.int64)
    rel_t = np.diag(np.array(target.orders, dtype=object)) if s else np.zeros((0, 0), dtype=object)
    big = np.concatenate([phi, rel_t], axis=1) if s else np.zeros((0, n), dtype=object)
    if s:
        ker = integer_kernel([[int(x) for x in row] for row in big], n + s)
        zgens = [[int(x) for x in k[:n]] for k in ker]
    else:
        zgens = [[int(i == j) for i in range(n)] for j in range(n)]
    mods = [m for _ in range(src_rank) for m in R.moduli]
    zgens = [[x % m for x, m in zip(g, mods)] for g in zgens]
    zgens = [g for g in zgens if any(g)]
    rel = cyclic_orders_rel(mods)
    free = RingModule.free(R, src_rank)
    chosen: list[list[int]] = []
    span_gens: list[list[int]] = list(rel)
    for g in zgens:
        lat = Lattice(span_gens, n) if span_gens else None
        if lat is not None and lat.contains(g):
            continue
        chosen.append(g)
        for u in range(t):
            span_gens.append([int(x) for x in free.gen_acts[u] @ np.asarray(g, dtype=np.int64)])
    return [np.asarray(g, dtype=np.int64) for g in chosen]


def _ring_resolution_tor(R: FiniteRing, M: RingModule, N: RingModule, n_top: int) -> GroupComplex:
    t = len(R.moduli)
    # degree 0: generators of M as an R-module (greedy over the standard basis of the group)
    gens0 = []
    span: list[list[int]] = cyclic_orders_rel(M.orders)
    for i in range(len(M.orders)):
        v = [int(i == j) for j in range(len(M.orders))]
        if Lattice(span, len(M.orders)).contains(v):
            continue
        gens0.append(np.asarray(v, dtype=np.int64))
        for u in range(t):
            span.append([int(x) for x in M.gen_acts[u] @ np.asarray(v, dtype=np.int64)])
    images = [gens0]
    target = M
    for n in range(1, n_top + 1):
        g = len(images[-1])
        ker = _ring_kernel_generators(R, g, images[-1], target)
        images.append(ker)
        target = RingModule.free(R, g)
    ranks = [len(g) for g in images]
    s = len(N.orders)
    r = {n: ranks[n] * s for n in range(n_top + 1)}
    rel = {n: [list(c) for c in cyclic_orders_rel(N.orders * ranks[n])] for n in range(n_top + 1)}
    d = {}
    for n in range(1, n_top + 1):
        D = np.zeros((r[n - 1], r[n]), dtype=object)
        for j, v in enumerate(images[n]):
            for k in range(ranks[n - 1]):
                comp = v[k * t:(k + 1) * t]
                act = sum(int(comp[u]) * N.gen_acts[u] for u in range(t))
                D[k * s:(k + 1) * s, j * s:(j + 1) * s] = act
        d[n] = D
    return GroupComplex(0, n_top, r, d, rel)


def ring_tor(R, M, N, n_max: int = DEFAULT_N_MAX, base=None) -> HomologySummary:
    """Tor^R_i(M, N) for 0 <= i <= n_max.

    * R a FiniteAlgebra over a field (M, N AlgebraModules): normalized bar complex
      over the base field.
    * R a FiniteRing with base ZZ (M, N RingModules): a free R-resolution of M tensored
      with N, homology as finite abelian groups.  (The bar complex over ZZ computes
      the derived tensor product of ZZ-algebras, which differs when R is not ZZ-flat.)
    """
    _check_n_max(n_max)
    if isinstance(R, FiniteAlgebra):
        c = algebra_bar_complex(M, N, n_max + 1)
        return c.summary(n_max)
    if isinstance(R, FiniteRing):
        if base not in (None, ZZ):
            A = FiniteAlgebra.from_ring(R, base)
            raise StructuralError(f"use ring_tor on the algebra {A.name} for a field base")
        gc = _ring_resolution_tor(R, M, N, n_max + 1)
        groups = {}
        for n in range(n_max + 1):
            h = gc.homology(n).group
            groups[n] = h
        return HomologySummary(ZZ, groups)
    raise StructuralError("ring_tor expects a FiniteAlgebra or a FiniteRing")


@dataclass
class ExcisionCriterion:
    ring_map: str
    field: str
    e: int
    torsion: HomologySummary
    tensor_dims: dict[int, int]
    tor1_dims: dict[int, int]
    violations: list[tuple[str, int]]

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def as_json(self) -> dict:
        return {
            "ring_map": self.ring_map,
            "field": self.field,
            "e": self.e,
            "T": {str(n): str(g) for n, g in sorted(self.torsion.groups.items())},
            "k_tensor_T": {str(n): v for n, v in sorted(self.tensor_dims.items())},
            "tor1_k_T": {str(n): v for n, v in sorted(self.tor1_dims.items())},
            "violations": [list(v) for v in self.violations],
            "satisfied": self.satisfied,
            "truncation_note": "T is computed for the full additive categories via the ring-level identification",
        }


def excision_criterion(phi: RingMap, k: Field, e: int) -> ExcisionCriterion:
    """k (x) T_i = 0 for 0 < i < e and Tor_1(k, T_j) = 0 for 0 < j < e - 1, with
    T = Tor^R(S, S) computed over ZZ (S an R-module through phi)."""
    if e < 1:
        raise ValueError("e must be positive")
    S = RingModule.from_ring_map(phi)
    T = ring_tor(phi.src, S, S, n_max=max(e, 1), base=ZZ)
    tensor, tor1 = universal_coefficients(T, k)
    bad = []
    for i in range(1, e):
        if tensor.get(i, 0):
            bad.append(("k (x) T", i))
    for j in range(1, e - 1):
        if tor1.get(j, 0):
            bad.append(("Tor_1(k, T)", j))
    return ExcisionCriterion(f"{phi.src.name} -> {phi.dst.name}", k.tag, e, T, tensor, tor1, bad)
