"""Shared regression corpus of small categories and functors."""
from __future__ import annotations

from functools import lru_cache

from functorlab.category import FiniteRing, RingMap, TruncCat, quotient_functor
from functorlab.functors import (
    additive_standard,
    constant,
    hom_group_functor,
    linearize,
    reduced_part,
    restrict,
    standard_projective,
)
from functorlab.linalg import GF, QQ

F2, F3 = GF(2), GF(3)

# (ring moduli, truncation, field); the three categories of the Yoneda corpus
CORPUS_CATS = [((2,), 2, F2), ((4,), 1, F2), ((6,), 1, F3)]


@lru_cache(maxsize=None)
def cat(moduli: tuple[int, ...], N: int) -> TruncCat:
    return TruncCat(FiniteRing(moduli), N)


@lru_cache(maxsize=None)
def quotient(src: tuple[int, ...], dst: tuple[int, ...], N: int):
    A, B = cat(src, N), cat(dst, N)
    return quotient_functor(A, RingMap.canonical(A.ring, B.ring), B)


def corpus_functors(moduli, N, k) -> list[tuple[str, object]]:
    C = cat(moduli, N)
    out = [(f"P^{c}", standard_projective(C, c, k)) for c in C.objects()]
    out += [
        ("k", constant(C, k)),
        ("h1", additive_standard(C, 1, k)),
        ("k[hom(1,-)]", linearize(hom_group_functor(C, 1), k)),
        ("(P^1)red", reduced_part(standard_projective(C, 1, k)).functor),
    ]
    if moduli == (6,):
        phi = quotient((6,), (2,), N)
        out.append(("A1", restrict(phi, standard_projective(phi.dst, 1, k))))
    return out


def corpus_triples() -> list[tuple[str, TruncCat, int, object]]:
    triples = []
    for moduli, N, k in CORPUS_CATS:
        C = cat(moduli, N)
        for name, F in corpus_functors(moduli, N, k):
            for c in C.objects():
                triples.append((f"Z/{moduli[0]},N={N},{k.tag},{name},c={c}", C, c, F))
    return triples


__all__ = ["F2", "F3", "QQ", "CORPUS_CATS", "cat", "quotient", "corpus_functors", "corpus_triples"]
