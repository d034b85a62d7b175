"""Cross-effects, polynomial degree, antipolynomial functors and AP-type bifunctors."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .category import CatFunctor, ProductCat, TruncCat, TruncationError, check_k_trivial
from .functors import FunctorRep
from .linalg import Field, StructuralError


def _subsets(d: int) -> list[tuple[int, ...]]:
    return [s for r in range(d + 1) for s in combinations(range(d), r)]


def _block_idempotent(cat: TruncCat, ranks: tuple[int, ...], keep: tuple[int, ...]) -> int:
    """The endomorphism of x_1 + ... + x_d that is the identity on the summands in ``keep``."""
    s = sum(ranks)
    m = np.zeros((s, s), dtype=np.int64)
    pos = 0
    for i, r in enumerate(ranks):
        if i in keep:
            m[np.arange(pos, pos + r), np.arange(pos, pos + r)] = cat.ring.one
        pos += r
    return cat.index_of(s, s, m)


@dataclass
class CrossEffectReport:
    d: int
    ranks: tuple[int, ...]
    dim: int
    total_dim: int
    constant_dim: int
    summands: dict[tuple[int, ...], int]

    def identity_holds(self) -> bool:
        return self.total_dim == sum(self.summands.values())

    def as_json(self) -> dict:
        return {
            "d": self.d,
            "ranks": list(self.ranks),
            "cross_effect_dim": self.dim,
            "total_dim": self.total_dim,
            "constant_dim": self.constant_dim,
            "summands": {",".join(map(str, k)) or "0": v for k, v in sorted(self.summands.items())},
            "identity_holds": self.identity_holds(),
        }


def cross_effect(F: FunctorRep, d: int, ranks, basis: bool = False):
    """cr_d F(x_1, ..., x_d) from the commuting idempotents F(e_S), S a subset of {1..d}.

    F_sigma is the image of sum_{T <= sigma} (-1)^{|sigma - T|} F(e_T); F_{} = F(0) part
    and cr_d = F_{1..d}.  With ``basis`` the column basis of cr_d is returned too.
    """
    cat, field = F.cat, F.field
    if not isinstance(cat, TruncCat):
        raise StructuralError("cross effects need a truncated additive category")
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != d or d < 1:
        raise ValueError("need exactly d ranks, d >= 1")
    s = sum(ranks)
    if s > cat.N:
        raise TruncationError(f"x_1 + ... + x_d has rank {s} > N = {cat.N}; raise N")
    idem = {S: F.mor(s, s, _block_idempotent(cat, ranks, S)) for S in _subsets(d)}
    summands, proj = {}, {}
    for sigma in _subsets(d):
        M = field.zeros((F.dims[s], F.dims[s]))
        for T in _subsets(d):
            if set(T) <= set(sigma):
                M = M + idem[T] if (len(sigma) - len(T)) % 2 == 0 else M - idem[T]
        M = field.array(M) if field.char else M
        proj[sigma] = M
        summands[sigma] = field.rank(M) if M.size else 0
    full = tuple(range(d))
    rep = CrossEffectReport(d, ranks, summands[full], F.dims[s], summands[()], summands)
    if not rep.identity_holds():
        raise StructuralError("cross-effect decomposition does not add up")
    if basis:
        return rep, (field.colspace(proj[full]) if proj[full].size else field.zeros((F.dims[s], 0)))
    return rep


def _rank_tuples(d: int, N: int) -> list[tuple[int, ...]]:
    return [t for t in product(range(1, N + 1), repeat=d) if sum(t) <= N]


@dataclass
class DegreeReport:
    degree: int | None  # None means ">= bound"
    bound: int
    window: int
    witnesses: dict[int, tuple[int, ...]]

    def label(self) -> str:
        return str(self.degree) if self.degree is not None else f">= {self.bound}"

    def as_json(self) -> dict:
        return {"degree": self.label(), "bound": self.bound, "rank_window": self.window,
                "nonvanishing_witnesses": {str(k): list(v) for k, v in sorted(self.witnesses.items())}}


def poly_degree(F: FunctorRep, bound: int) -> DegreeReport:
    """Least d < bound with cr_{d+1} F = 0 on every tuple of positive ranks summing to <= N."""
    cat = F.cat
    witnesses: dict[int, tuple[int, ...]] = {}
    for d in range(bound):
        tuples = _rank_tuples(d + 1, cat.N)
        if not tuples:
            raise TruncationError(f"cr_{d + 1} needs rank {d + 1} > N = {cat.N}; raise N")
        bad = next((t for t in tuples if cross_effect(F, d + 1, t).dim), None)
        if bad is None:
            return DegreeReport(d, bound, cat.N, witnesses)
        witnesses[d + 1] = bad
    return DegreeReport(None, bound, cat.N, witnesses)


def is_constant(F: FunctorRep) -> bool:
    """Every generator acts by the identity of one fixed space."""
    if len(set(F.dims)) > 1:
        return False
    e = F.field.eye(F.dims[0])
    return all(np.array_equal(F.gen_matrix(i), e) for i in range(len(F.cat.generators)))


@dataclass
class Factorization:
    holds: bool
    functor: FunctorRep | None
    witness: tuple | None


def factors_through(phi: CatFunctor, F: FunctorRep) -> Factorization:
    """Does F = phi^* G for some G?  Checked on every fiber of every hom-set.

    phi must be the identity on objects and surjective on hom-sets (a quotient).
    """
    src, dst = phi.src, phi.dst
    if F.cat != src:
        raise StructuralError("F must live on the source of phi")
    for x in src.objects():
        if phi.obj(x) != x:
            raise StructuralError("factors_through expects a functor that is the identity on objects")
    chosen: dict[tuple[int, int], np.ndarray] = {}
    for a in src.objects():
        act = F.action(a) if F.dims[a] else None
        for b in src.objects():
            hm = phi.hom_map(a, b)
            first = np.full(dst.hom_size(a, b), -1, dtype=np.int64)
            order = np.arange(len(hm))
            first[hm[::-1]] = order[::-1]
            if (first < 0).any():
                raise StructuralError("phi is not surjective on hom-sets")
            chosen[(a, b)] = first
            if act is None or F.dims[b] == 0:
                continue
            mats = act[b]
            ref = mats[first[hm]]
            diff = np.any((mats != ref).reshape(len(hm), -1), axis=1)
            if diff.any():
                f = int(np.flatnonzero(diff)[0])
                return Factorization(False, None, (a, b, f, int(first[hm[f]])))
    gens = [F.mor(s, t, int(chosen[(s, t)][g])) for (s, t, g) in dst.generators]
    G = FunctorRep(dst, F.field, F.dims, gens=gens, labels=F.labels, name=f"{F.name}/{phi.kind}")
    return Factorization(True, G, None)


@dataclass
class AntipolyVerdict:
    holds: bool
    factors: bool
    k_trivial: bool
    witness: tuple | None
    constant: bool = False

    def as_json(self) -> dict:
        return {"antipolynomial": self.holds, "factors_through": self.factors, "target_k_trivial": self.k_trivial,
                "constant": self.constant, "witness": list(self.witness) if self.witness else None}


def is_antipolynomial_via(phi: CatFunctor, F: FunctorRep, k: Field | None = None) -> AntipolyVerdict:
    """F factors through phi and the target of phi is k-trivial (constants always qualify)."""
    k = F.field if k is None else k
    if is_constant(F):
        return AntipolyVerdict(True, True, True, None, constant=True)
    fac = factors_through(phi, F)
    triv, wit = check_k_trivial(phi.dst, k)
    return AntipolyVerdict(fac.holds and triv, fac.holds, triv, fac.witness or wit)


def slot_functor(B: FunctorRep, slot: int, obj: int) -> FunctorRep:
    """B(obj, -) (slot 1) or B(-, obj) (slot 0) for B on a product category."""
    cat = B.cat
    if not isinstance(cat, ProductCat):
        raise StructuralError("slot functors need a product category")
    L, R = cat.left, cat.right
    nl = len(L.generators)
    if slot == 0:
        dims = [B.dims[cat.pair(i, obj)] for i in L.objects()]
        gens = [B.gen_matrix(gi * R.n_obj + obj) for gi in range(nl)]
        return FunctorRep(L, B.field, dims, gens=gens, name=f"{B.name}(-,{obj})", validate=False)
    dims = [B.dims[cat.pair(obj, j)] for j in R.objects()]
    gens = [B.gen_matrix(nl * R.n_obj + gi * L.n_obj + obj) for gi in range(len(R.generators))]
    return FunctorRep(R, B.field, dims, gens=gens, name=f"{B.name}({obj},-)", validate=False)


@dataclass
class APTypeVerdict:
    holds: bool
    second_slot_degrees: dict[int, str]
    first_slot_antipolynomial: dict[int, bool]

    def as_json(self) -> dict:
        return {"ap_type": self.holds,
                "second_slot_degrees": {str(k): v for k, v in sorted(self.second_slot_degrees.items())},
                "first_slot_antipolynomial": {str(k): v for k, v in sorted(self.first_slot_antipolynomial.items())}}


def ap_type_check(B: FunctorRep, phi: CatFunctor, degree_bound: int, k: Field | None = None) -> APTypeVerdict:
    """Antipolynomial via phi in the first variable, polynomial of degree < bound in the second."""
    cat = B.cat
    degs, anti = {}, {}
    for x in cat.left.objects():
        degs[x] = poly_degree(slot_functor(B, 1, x), degree_bound).label()
    for y in cat.right.objects():
        anti[y] = is_antipolynomial_via(phi, slot_functor(B, 0, y), k).holds
    ok = all(not d.startswith(">=") for d in degs.values()) and all(anti.values())
    return APTypeVerdict(ok, degs, anti)
