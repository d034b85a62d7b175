from __future__ import annotations

import json

from corpus import F2, F3, QQ, cat, quotient

from functorlab.category import ProductCat, SizingError
from functorlab.functors import (
    additive_standard,
    constant,
    external_tensor,
    hom_group_functor,
    linearize,
    pointwise_tensor,
    reduced_part,
    restrict,
    standard_projective,
)
from functorlab.theorems import (
    VERDICTS,
    TheoremReport,
    check_bifunctor_vanishing,
    check_duality_square,
    check_excision,
    check_general_criterion,
    check_kunneth,
    check_mixed_vanishing,
    check_pirashvili,
    check_poly_excision,
    check_semisimple_vanishing,
    check_sum_diagonal,
    stabilize,
)


def _hyp(rep: TheoremReport, prefix: str):
    return next(h for h in rep.hypotheses if h.name.startswith(prefix))


def test_excision_hypothesis_fails_over_f2():
    phi = quotient((4,), (2,), 1)
    F = standard_projective(phi.dst, 1, F2)
    rep = check_excision(phi, F, F, 2)
    assert rep.verdict == "hypotheses-unmet"
    assert _hyp(rep, "B(x, x)").witness == 1
    assert all(c.ok for c in rep.checks)


def test_general_criterion_over_f2():
    rep = check_general_criterion(quotient((4,), (2,), 1), F2, 2)
    assert rep.verdict == "confirmed"
    assert rep.extra["measured_excisive"] is False
    assert rep.extra["criterion"]["satisfied"] is False


def test_general_criterion_split_quotient():
    # Z/6 -> Z/2 splits off a factor, so restriction is excisive in every degree
    rep = check_general_criterion(quotient((6,), (2,), 1), F2, 2)
    assert rep.verdict == "confirmed" and rep.extra["measured_excisive"] is True


def test_semisimple_hypotheses():
    phi = quotient((4,), (2,), 1)
    F = standard_projective(phi.dst, 1, F2)
    rep = check_semisimple_vanishing(phi, F, F, 2)
    assert rep.verdict == "hypotheses-unmet"
    assert _hyp(rep, "char k").witness == {"n": 1}
    assert _hyp(rep, "target ring").verified


def test_pirashvili_vanishing_and_control():
    C = cat((2,), 2)
    red = reduced_part(standard_projective(C, 1, F2)).functor
    good = check_pirashvili(additive_standard(C, 1, F2), [red, red], 2)
    assert good.verdict == "confirmed"
    assert good.extra["ext_dims"] == {0: 0, 1: 0, 2: 0}
    bad = check_pirashvili(pointwise_tensor(red, red), [red, red], 2)
    assert bad.verdict == "hypotheses-unmet"
    assert not _hyp(bad, "F has degree").verified


def test_poly_excision():
    phi = quotient((6,), (2,), 2)
    rep = check_poly_excision(phi, additive_standard(phi.dst, 1, F2), standard_projective(phi.dst, 1, F2), 2)
    assert rep.verdict == "confirmed"
    assert all(r.verdict == "iso" for r in rep.rows)
    # Z/4 -> Z/2 fails the endomorphism hypothesis, and N = 1 cannot certify a degree
    phi = quotient((4,), (2,), 1)
    rep = check_poly_excision(phi, additive_standard(phi.dst, 1, F2), standard_projective(phi.dst, 1, F2), 2)
    assert rep.verdict == "hypotheses-unmet"
    assert [h.verified for h in rep.hypotheses] == [True, False, False]


def test_sum_diagonal_constant_and_projective():
    C1, C2 = cat((2,), 1), cat((2,), 2)
    rep = check_sum_diagonal(constant(C2, F2), constant(ProductCat(C1, C1), F2), 2)
    assert rep.verdict == "confirmed"
    # for P^1 the second composite loses rank in degree 0: its inverse would pass
    # through G(x + y, x + y) with x + y of rank 2, outside P^{<=1}
    P = standard_projective(C1, 1, F2)
    rep = check_sum_diagonal(standard_projective(C2, 1, F2), external_tensor(P, P), 2)
    bad = [(r.section, r.degree, r.rank) for r in rep.rows if not r.ok]
    assert bad == [("ext(G, Sigma^*F)", 0, 3)]
    assert all(c.ok for c in rep.checks)


def test_kunneth_report():
    A4, C1 = cat((4,), 1), cat((2,), 1)
    h = additive_standard(A4, 1, F2)
    rep = check_kunneth(h, h, standard_projective(C1, 1, F2), additive_standard(C1, 1, F2), 2)
    assert rep.verdict == "confirmed"


def test_duality_square():
    phi = quotient((4,), (2,), 1)
    F = standard_projective(phi.dst, 1, F3)
    G = linearize(hom_group_functor(phi.dst, 1), F3)
    rep = check_duality_square(phi, F, G, 2)
    assert rep.verdict == "confirmed"
    src = [(r.degree, r.src_dim) for r in rep.rows if r.section == "ext vs tor (source)"]
    assert src == [(0, 2), (1, 1), (2, 1)]
    ranks = [r.src_dim for r in rep.rows if r.section == "rank of res^phi vs res_phi"]
    assert ranks == [2, 0, 0]


def test_bifunctor_and_mixed_vanishing():
    phi = quotient((6,), (2,), 1)
    A = restrict(phi, standard_projective(phi.dst, 1, F3))
    P = additive_standard(phi.src, 1, F3)
    K = constant(phi.src, F3)
    rep = check_bifunctor_vanishing(external_tensor(K, P), external_tensor(reduced_part(A).functor, P), 2)
    assert rep.verdict == "confirmed"
    # at N = 1 the polynomial degree of B cannot be certified
    mixed = check_mixed_vanishing(reduced_part(A).functor, K, P, phi, 2, 2)
    assert mixed.verdict == "hypotheses-unmet"


def test_reports_are_deterministic_json():
    phi = quotient((4,), (2,), 1)
    F = standard_projective(phi.dst, 1, F3)
    a, b = check_excision(phi, F, F, 2), check_excision(phi, F, F, 2)
    assert a.verdict in VERDICTS
    assert json.dumps(a.as_json(), sort_keys=True) == json.dumps(b.as_json(), sort_keys=True)
    assert "wall_clock" not in json.dumps(a.as_json()) and a.wall_clock >= 0
    assert "excision" in a.table()


def test_stabilize_reports_flips_and_sizing():
    phi = quotient((2,), (2,), 1)
    F = standard_projective(phi.dst, 1, F3)
    rep = stabilize(check_excision(phi, F, F, 1), lambda: check_excision(*_excision_n2(), 1))
    assert rep.stabilization["status"] == "stable" and rep.stabilization["flips"] == []

    def too_big():
        raise SizingError("over the cap", {"hom_size": 10 ** 9})

    rep = stabilize(check_excision(phi, F, F, 1), too_big)
    assert rep.stabilization["status"] == "not-run"


def _excision_n2():
    phi = quotient((2,), (2,), 2)
    F = standard_projective(phi.dst, 1, F3)
    return phi, F, F


def test_rational_semisimple_hypotheses_hold():
    phi = quotient((4,), (2,), 1)
    F = standard_projective(phi.dst, 1, QQ)
    rep = check_semisimple_vanishing(phi, F, F, 2)
    assert all(h.verified for h in rep.hypotheses)
    assert rep.extra["truncation_caveat"] is True

