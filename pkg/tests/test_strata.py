import random

import pytest

from nrbrane.cover import CoverModel
from nrbrane.curve import Divisor
from nrbrane.errors import NotAVHSFixedPoint, NotNodalIntegral, PreconditionViolated, ZeroScalar
from nrbrane.picard import class_of_divisor, class_of_point, trivial_class
from nrbrane.spectral import HitchinBase
from nrbrane.strata import (
    M_SIDE,
    MT_SIDE,
    VERY_STABLE,
    WOBBLY,
    FixedPointVHS,
    SemistableBundle,
    Stable,
    StrictlySemistable,
    Unstable,
    alpha_patterns,
    classify_semistability,
    cstar_limit,
    cstar_scaling_closure,
    dprime_by_fibres,
    dprime_of,
    enumerate_strata,
    hh_wobbly_criterion,
    limit_report,
    nilpotent_witness_semistable,
    realizable_dprimes,
    strata_intersection_nonempty,
    strata_rows,
    stratum_point,
    subdivisors,
    symbolic_higgs_identity,
)


@pytest.fixture(scope="module")
def bp2(desk2):
    return desk2.hitchin.sample(random.Random(0))


@pytest.fixture(scope="module")
def bp3(desk3):
    return desk3.hitchin.sample(random.Random(0))


def nodes(bp):
    return bp.div_of_b().support()


def test_strata_counts(desk, bp2, bp3):
    bp = bp2 if desk.curve.g == 2 else bp3
    strata = enumerate_strata(bp, desk.M)
    assert len(strata) == 2 ** (2 * desk.curve.g - 2)
    assert all(dim == D.degree for D, dim in strata)
    assert strata[0][0] == Divisor() and strata[-1][0] == bp.div_of_b()


def test_strata_need_nodal_point(desk3):
    H = HitchinBase(CoverModel(desk3.curve, (0, 1)))
    with pytest.raises(NotNodalIntegral):
        enumerate_strata(H.base_point([0, 0, 0], [1, 0]))


def test_stratum_point_validation(desk3, bp3):
    divb = bp3.div_of_b()
    P = nodes(bp3)[0]
    with pytest.raises(ValueError):
        stratum_point(bp3, desk3.M, Divisor({P: 2}), [1])
    other = next(Q for Q in desk3.curve.rational_points() if Q not in divb.support())
    with pytest.raises(ValueError):
        stratum_point(bp3, desk3.M, Divisor({other: 1}), [1])
    with pytest.raises(ValueError):
        stratum_point(bp3, desk3.M, Divisor({P: 1}), [])


def test_dprime_examples(desk3, bp3):
    divb = bp3.div_of_b()
    M = desk3.M
    x0, x1 = nodes(bp3)[:2]
    assert dprime_of(stratum_point(bp3, M, Divisor(), [])) == divb
    assert dprime_of(stratum_point(bp3, M, divb, [0] * 4)) == Divisor()
    assert dprime_of(stratum_point(bp3, M, divb, [1] * 4)) == divb
    D = Divisor({x0: 1, x1: 1})
    assert dprime_of(stratum_point(bp3, M, D, [0, 5])) == divb - Divisor({x0: 1})


def test_dprime_by_fibres_agrees(desk, bp2, bp3):
    bp = bp2 if desk.curve.g == 2 else bp3
    F = desk.curve.F
    for D, _ in enumerate_strata(bp):
        for alpha in alpha_patterns(D, F):
            pt = stratum_point(bp, desk.M, D, alpha)
            assert dprime_by_fibres(pt) == dprime_of(pt)


def test_intersection_lemma_exhaustive(desk, bp2, bp3):
    """V(D) meets V'(D') exactly when div(b) <= D + D'."""
    bp = bp2 if desk.curve.g == 2 else bp3
    divb = bp.div_of_b()
    for D in subdivisors(divb):
        reach = realizable_dprimes(divb, D)
        for Dp in subdivisors(divb):
            expected = divb <= D + Dp
            assert (Dp in reach) == expected
            assert strata_intersection_nonempty(D, Dp, divb) == expected


def test_verdict_examples_g3(desk3, bp3):
    M, T = desk3.M, desk3.model.T
    C = desk3.curve
    divb = bp3.div_of_b()
    x = nodes(bp3)
    pt = stratum_point(bp3, M, Divisor(), [])
    assert classify_semistability(pt) == Unstable(M, M_SIDE)
    pt = stratum_point(bp3, M, divb, [0] * 4)
    assert classify_semistability(pt) == Unstable(M + T, MT_SIDE)
    D1 = Divisor({x[0]: 1})
    assert classify_semistability(stratum_point(bp3, M, D1, [1])) == Unstable(M - class_of_divisor(C, D1), M_SIDE)
    D2 = Divisor({x[0]: 1, x[1]: 1})
    assert classify_semistability(stratum_point(bp3, M, D2, [0, 0])) == StrictlySemistable(M_SIDE)
    D3 = divb - Divisor({x[3]: 1})
    assert classify_semistability(stratum_point(bp3, M, D3, [1, 1, 1])) == Stable()
    pt = stratum_point(bp3, M, D3, [0, 0, 0])
    assert classify_semistability(pt) == Unstable(M + T - class_of_divisor(C, Divisor({x[3]: 1})), MT_SIDE)
    pt = stratum_point(bp3, M, D3, [1, 0, 0])
    assert classify_semistability(pt) == StrictlySemistable(MT_SIDE)


def test_limits(desk, bp2, bp3):
    bp = bp2 if desk.curve.g == 2 else bp3
    C, M, g = desk.curve, desk.M, desk.curve.g
    K = class_of_divisor(C, C.canonical_divisor())
    for D, _ in enumerate_strata(bp):
        for alpha in alpha_patterns(D, C.F):
            pt = stratum_point(bp, M, D, alpha)
            verdict = classify_semistability(pt)
            lim = cstar_limit(pt)
            if isinstance(verdict, Unstable):
                assert isinstance(lim, FixedPointVHS)
                assert lim.L1 + lim.L2 == M * 2 - K
                assert lim.L1 == verdict.destabilizer
                assert 1 <= lim.L1.degree <= g - 1
                Dx = D if verdict.side == M_SIDE else dprime_of(pt)
                assert lim.phi_divisor == Dx * 2
            else:
                assert lim == SemistableBundle(M * 2 - K)


def test_hh_criterion_direct(desk3):
    C = desk3.curve
    P, Q = C.rational_points()[5], C.rational_points()[7]
    L1 = class_of_point(C, P)
    L2 = trivial_class(C, -1)
    assert hh_wobbly_criterion(FixedPointVHS(L1, L2, Divisor({P: 1, Q: 1}))) == VERY_STABLE
    assert hh_wobbly_criterion(FixedPointVHS(L1, L2, Divisor({P: 2}))) == WOBBLY
    top = FixedPointVHS(trivial_class(C, 2), trivial_class(C, -2), Divisor())
    assert hh_wobbly_criterion(top) == VERY_STABLE
    with pytest.raises(NotAVHSFixedPoint):
        hh_wobbly_criterion(SemistableBundle(trivial_class(C)))
    with pytest.raises(NotAVHSFixedPoint):
        hh_wobbly_criterion(FixedPointVHS(trivial_class(C), trivial_class(C), Divisor({P: 4})))
    with pytest.raises(ValueError):
        FixedPointVHS(L1, L2, Divisor({P: 1}))


def test_labels_total_and_very_stable_only_at_extremes(desk, bp2, bp3):
    bp = bp2 if desk.curve.g == 2 else bp3
    divb = bp.div_of_b()
    very_stable = set()
    for D, _ in enumerate_strata(bp):
        for alpha in alpha_patterns(D, desk.curve.F):
            pt = stratum_point(bp, desk.M, D, alpha)
            rep = limit_report(pt)
            assert rep.label in (WOBBLY, VERY_STABLE)
            if rep.label == VERY_STABLE:
                very_stable.add((D, dprime_of(pt)))
            if not isinstance(rep.verdict, Unstable):
                assert rep.wobbly and rep.witness.dimension >= 1
                assert desk.curve.in_rr_space(rep.witness.function, rep.witness.divisor)
    assert very_stable == {(Divisor(), divb), (divb, Divisor())}


def test_witness_requires_semistable(desk2, bp2):
    pt = stratum_point(bp2, desk2.M, Divisor(), [])
    with pytest.raises(PreconditionViolated):
        nilpotent_witness_semistable(pt)


def test_symbolic_identities():
    out = symbolic_higgs_identity()
    for key in ("trace", "determinant", "hecke", "hitchin_section", "traceless_at_a0"):
        assert out[key] is True


def test_scaling(desk, bp2, bp3):
    bp = bp2 if desk.curve.g == 2 else bp3
    F = desk.curve.F
    rnd = random.Random(3)
    strata = enumerate_strata(bp)
    for _ in range(20):
        D, _ = rnd.choice(strata)
        pt = stratum_point(bp, desk.M, D, [rnd.randrange(desk.curve.p) for _ in range(D.degree)])
        t = F(rnd.randrange(1, desk.curve.p))
        q = cstar_scaling_closure(pt, t)
        assert q.D == pt.D and dprime_of(q) == dprime_of(pt)
        assert [a for _, a in q.alpha] == [t * a for _, a in pt.alpha]
        assert classify_semistability(q) == classify_semistability(pt)
        assert cstar_limit(q) == cstar_limit(pt)
    with pytest.raises(ZeroScalar):
        cstar_scaling_closure(pt, 0)


def test_g2_rows(desk2, bp2):
    rows = strata_rows(bp2, desk2.M)
    divb = bp2.div_of_b()
    assert len(rows) == 4
    flagged = [r["D"] for r in rows if r["contains_very_stable"]]
    assert flagged == [Divisor(), divb]
    assert all(r["patterns"] == 2 ** r["dim"] for r in rows)
