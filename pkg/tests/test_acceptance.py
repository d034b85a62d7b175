"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Tolerances are exact throughout: every compared quantity is an integer dimension, an
invariant factor or a verdict string.
"""
from __future__ import annotations

import filecmp
from pathlib import Path

import pytest
from corpus import F2, F3, QQ, CORPUS_CATS, cat, corpus_functors, corpus_triples, quotient

from functorlab import cli
from functorlab.functors import (
    additive_standard,
    hom_space,
    reduced_part,
    restrict,
    standard_projective,
    standard_projective_op,
    tensor_over_cat,
)
from functorlab.homology import (
    FiniteAlgebra,
    algebra_bar_complex,
    algebra_free_resolution_tor,
    bar_rank_estimate,
    BAR_RANK_CAP,
    ext_over_cat,
    tor_over_cat,
)
from functorlab.linalg import GF, ZZ, ChainComplex, Matrix, homology
from functorlab.polynomial import cross_effect, poly_degree
from functorlab.simplicial import (
    check_em_vanishing,
    constant_simplicial,
    em_space,
    homotopy_groups,
    hurewicz_map,
    linearize_simplicial,
    nerve_model,
    vanishing_biconditional,
)
from functorlab.theorems import (
    check_excision,
    check_general_criterion,
    check_pirashvili,
    check_semisimple_vanishing,
    check_separation,
    stabilize,
)

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture
def emit(capsys):
    def _emit(tag: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{tag}] {'PASS' if ok else 'FAIL'}: {detail}")
    return _emit


def test_ac1_yoneda(emit):
    triples = corpus_triples()
    bad = []
    for label, C, c, F in triples:
        hom = hom_space(standard_projective(C, c, F.field), F).dim
        ten = tensor_over_cat(standard_projective_op(C, c, F.field), F).dim
        if not hom == ten == F.dims[c]:
            bad.append((label, hom, ten, F.dims[c]))
    ok = len(triples) >= 20 and not bad
    emit("AC1", ok, f"{len(triples)} triples, dim Hom(P^c,F) = dim P^c_op (x) F = dim F(c); mismatches {bad}")
    assert len(triples) >= 20
    assert bad == []


def test_ac2_projectivity(emit):
    bad, bar_checked = [], 0
    for moduli, N, k in CORPUS_CATS:
        C = cat(moduli, N)
        for name, G in corpus_functors(moduli, N, k):
            for c in C.objects():
                P, Pop = standard_projective(C, c, k), standard_projective_op(C, c, k)
                ext = ext_over_cat(P, G, 3).dims()
                tor = tor_over_cat(Pop, G, 3).dims()
                if any(ext[i] or tor[i] for i in (1, 2, 3)):
                    bad.append((moduli, N, name, c, "resolution", ext, tor))
                # independent bar-complex route where it fits under the cap
                if max(bar_rank_estimate(C, G.dims, P.dims, 4)) <= BAR_RANK_CAP and N == 1:
                    bext = ext_over_cat(P, G, 3, method="bar").dims()
                    btor = tor_over_cat(Pop, G, 3, method="bar").dims()
                    bar_checked += 1
                    if bext != ext or btor != tor:
                        bad.append((moduli, N, name, c, "bar", bext, btor))
    emit("AC2", not bad, f"Ext^i(P^c,G) = Tor_i(P^c_op,G) = 0 for i = 1..3; bar cross-checks {bar_checked}; "
         f"failures {bad}")
    assert bar_checked > 0
    assert bad == []


def _excision_instance(N: int, k):
    phi = quotient((4,), (2,), N)
    F = standard_projective(phi.dst, 1, k)
    return phi, F, F


def test_ac3_excision(emit):
    report = stabilize(check_excision(*_excision_instance(1, F3), 2),
                       lambda: check_excision(*_excision_instance(2, F3), 2))
    tor_src = {r.degree: r.src_dim for r in report.rows_for("tor")}
    control = check_excision(*_excision_instance(1, F2), 2)
    crit = check_general_criterion(quotient((4,), (2,), 1), F2, 2)
    T = crit.extra["criterion"]["T"]
    tor1_rows = [r for r in crit.rows if r.degree == 1]
    parts = {
        "N=1 isos in degrees 0..2": all(r.verdict == "iso" for r in report.rows),
        "N=1 Tor_1 = Tor_2 = 0": tor_src.get(1) == 0 and tor_src.get(2) == 0,
        "N=1 verdict confirmed": report.verdict == "confirmed",
        "N=2 rerun confirmed": report.stabilization.get("verdict_at_N+1") == "confirmed",
        "no flips at N=2": report.stabilization["status"] == "stable",
        "F2 control hypotheses-unmet": control.verdict == "hypotheses-unmet",
        "F2 control T_1 = T_2 = Z/2": T.get("1") == "Z/2" and T.get("2") == "Z/2",
        "F2 control nonzero Tor_1": any(r.src_dim > 0 for r in tor1_rows),
        "F2 control criterion agrees": crit.verdict == "confirmed",
    }
    failed = [k for k, v in parts.items() if not v]
    emit("AC3", not failed, f"excision Z/4 -> Z/2 over F3; failed parts {failed}; "
         f"flips {report.stabilization['flips']}")
    assert failed == []


def test_ac4_ring_tor(emit):
    A = FiniteAlgebra.truncated_polynomial(F2, 2)
    k = A.augmentation_module()
    bar = algebra_bar_complex(k, k, 5).summary(4).dims()
    periodic = algebra_free_resolution_tor(k, k, 5).summary(4).dims()
    expected = {i: 1 for i in range(5)}
    ok = bar == periodic == expected
    emit("AC4", ok, f"Tor^(F2[x]/x^2)(F2,F2): bar {bar}, periodic resolution {periodic}")
    assert periodic == expected
    assert bar == expected


def test_ac5_separation(emit):
    phi = quotient((6,), (2,), 2)
    A1 = restrict(phi, standard_projective(phi.dst, 1, F3))
    P1 = additive_standard(phi.src, 1, F3)
    report = check_separation(A1, P1, A1, P1, phi, 2, 2)
    isos = [(r.section, r.degree, r.verdict) for r in report.rows]
    kunneth = [c for c in report.checks if "Kunneth" in c.name]
    ok = report.verdict == "confirmed" and all(v == "iso" for _, _, v in isos) and len(kunneth) == 4 \
        and all(c.ok for c in kunneth)
    emit("AC5", ok, f"separation on P_Z/6^<=2 over F3: {report.verdict}; rows {isos}; "
         f"Kunneth checks {[c.ok for c in kunneth]}")
    assert report.verdict == "confirmed"
    assert len(kunneth) == 4 and all(c.ok for c in kunneth)


def test_ac6_pirashvili(emit):
    C = cat((2,), 2)
    P1 = standard_projective(C, 1, F2)
    red = reduced_part(P1).functor
    report = check_pirashvili(additive_standard(C, 1, F2), [red, red], 2)
    control = check_pirashvili(P1, [red, red], 2)
    ext = report.extra["ext_dims"]
    ok = report.verdict == "confirmed" and ext == {0: 0, 1: 0, 2: 0} \
        and control.verdict == "hypotheses-unmet" and control.extra["ext_dims"][0] > 0
    emit("AC6", ok, f"Ext^(0..2)((P^1)red (x) (P^1)red, h1) = {ext}; non-polynomial control "
         f"Ext = {control.extra['ext_dims']}")
    assert ext == {0: 0, 1: 0, 2: 0} and report.verdict == "confirmed"
    assert control.extra["nonvanishing_degrees"] == [0]


def test_ac7_cross_effects(emit):
    C = cat((2,), 2)
    cr = cross_effect(standard_projective(C, 1, F2), 2, (1, 1))
    deg = poly_degree(additive_standard(C, 1, F2), 2)
    ok = cr.dim == 1 and cr.total_dim == 4 and sorted(cr.summands.values()) == [1, 1, 1, 1] and deg.degree == 1
    emit("AC7", ok, f"cr_2 P^1(1,1) = {cr.dim}; {cr.total_dim} = "
         f"{' + '.join(str(v) for _, v in sorted(cr.summands.items()))}; deg h1 = {deg.label()}")
    assert cr.dim == 1
    assert cr.total_dim == 4 and sorted(cr.summands.values()) == [1, 1, 1, 1]
    assert deg.degree == 1


def _semisimple_at(k, N):
    phi = quotient((4,), (2,), N)
    F = standard_projective(phi.dst, 1, k)
    rep = check_semisimple_vanishing(phi, F, F, 2)
    return rep.verdict, rep.extra.get("ext_dims"), rep.extra.get("truncation_caveat")


def test_ac8_semisimple(emit):
    results = {k.tag: _semisimple_at(k, 1) for k in (F3, QQ)}
    # rational arithmetic at N = 2 is far outside the time budget; F_3 and F_5 stand in for the rerun
    rerun = {k.tag: _semisimple_at(k, 2)[:2] for k in (F3, GF(5))}
    ok = all(v[1] is not None and v[1][1] == 0 and v[1][2] == 0 and v[2] for v in results.values())
    emit("AC8", ok, f"Ext^1, Ext^2 over P_Z/4^<=1 pulled back from P_Z/2^<=1: {results}; at N=2: {rerun}")
    for tag, (verdict, ext, caveat) in results.items():
        assert caveat is True, tag
        assert ext[1] == 0 and ext[2] == 0, (tag, ext)


def _group_bar_homology(m: int, top: int):
    """Normalized bar complex of Z/m with trivial integer coefficients, homology via SNF."""
    chains = {0: [()]}
    for n in range(1, top + 2):
        chains[n] = [c + (g,) for c in chains[n - 1] for g in range(1, m)]
    index = {n: {c: i for i, c in enumerate(chains[n])} for n in chains}
    diffs = {}
    for n in range(1, top + 2):
        ent = {}
        for j, c in enumerate(chains[n]):
            faces = [c[1:], c[:-1]] + [c[:i] + ((c[i] + c[i + 1]) % m,) + c[i + 2:] for i in range(n - 1)]
            signs = [1, (-1) ** n] + [(-1) ** (i + 1) for i in range(n - 1)]
            for f, s in zip(faces, signs):
                if 0 in f:
                    continue
                key = (index[n - 1][f], j)
                ent[key] = ent.get(key, 0) + s
        diffs[n] = Matrix(ZZ, len(chains[n - 1]), len(chains[n]), ent)
    cc = ChainComplex(ZZ, 0, top + 1, {n: len(chains[n]) for n in chains}, diffs)
    h = homology(cc)
    return {i: str(h.groups[i]) for i in range(top + 1)}


SIMPLICIAL_CORPUS = [
    lambda: em_space((2,), 1, 5),
    lambda: em_space((2,), 2, 4),
    lambda: em_space((3,), 1, 4),
    lambda: em_space((4,), 1, 4),
    lambda: nerve_model((3,), 4),
    lambda: constant_simplicial((2, 3), 3),
]


def test_ac9_simplicial(emit):
    parts = {}
    r1 = check_em_vanishing((2,), 1, F3, 5)
    r2 = check_em_vanishing((2,), 2, F3, 4)
    parts["pi_i F3[K(Z/2,1)] = 0, i = 1..4"] = r1.extra["pi_k"] == {"0": 1, "1": 0, "2": 0, "3": 0, "4": 0} \
        and r1.verdict == "confirmed"
    parts["pi_i F3[K(Z/2,2)] = 0, i = 1..3"] = r2.extra["pi_k"] == {"0": 1, "1": 0, "2": 0, "3": 0} \
        and r2.verdict == "confirmed"
    pi = homotopy_groups(linearize_simplicial(em_space((2,), 1, 5), ZZ), 3)
    got = {i: str(pi[i]) for i in range(4)}
    oracle = _group_bar_homology(2, 3)
    frozen = {0: "Z", 1: "Z/2", 2: "0", 3: "Z/2"}
    parts["pi_* Z[K(Z/2,1)] = (Z, Z/2, 0, Z/2)"] = got == oracle == frozen
    hur, bicond = [], []
    for make in SIMPLICIAL_CORPUS:
        X = make()
        hur.append((X.name, hurewicz_map(X).split_injective))
        for k in (F2, F3, QQ):
            for e in range(1, X.T):
                vanish, cond = vanishing_biconditional(X, k, e)
                bicond.append((X.name, k.tag, e, vanish == cond))
    parts["Hurewicz split injective on every instance"] = all(v for _, v in hur)
    parts["vanishing iff condition on pi_*"] = all(v for *_, v in bicond)
    failed = [k for k, v in parts.items() if not v]
    emit("AC9", not failed, f"simplicial suite: pi_* Z[K(Z/2,1)] = {got} (bar oracle {oracle}); "
         f"{len(hur)} Hurewicz instances, {len(bicond)} biconditional cases; failed {failed}")
    assert failed == []


def test_ac10_determinism(emit, tmp_path):
    files = sorted(INSTANCES.glob("*.json"))
    mismatched = []
    for path in files:
        inst = cli.load_instance(path)
        a, b = tmp_path / f"{path.stem}_a", tmp_path / f"{path.stem}_b"
        cli.run(inst, a, workers=2)
        cli.run(inst, b, workers=2)
        names = sorted(p.name for p in a.glob("*.json") if p.name != "timing.json")
        same = names == sorted(p.name for p in b.glob("*.json") if p.name != "timing.json")
        _, diff, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        if not same or diff or errors:
            mismatched.append((path.name, diff, errors))
    emit("AC10", bool(files) and not mismatched, f"{len(files)} instances run twice; byte mismatches {mismatched}")
    assert files
    assert mismatched == []
