import random

import pytest

from nrbrane.cover import CoverDivisor, CoverModel, cover_genus
from nrbrane.curve import INFINITY, Divisor
from nrbrane.errors import NotEffective, PointNotOnCurve
from nrbrane.exactfield import Poly
from nrbrane.curve import Point
from nrbrane.picard import trivial_class
from nrbrane.selfcheck import galois_closed_places, random_divisor


def test_model_basics(desk):
    m = desk.model
    C = desk.curve
    assert cover_genus(m) == 2 * C.g - 1
    assert not m.T.is_trivial() and m.T + m.T == trivial_class(C)
    assert m.h.degree == len(m.S) and len(m.S) % 2 == 0
    assert m.D_T.degree == 0


def test_trivial_subset_rejected(desk2):
    with pytest.raises(ValueError):
        CoverModel(desk2.curve, ())


def test_odd_subset_uses_complement(desk2):
    m = CoverModel(desk2.curve, (2, 3, 4))
    assert m.S == (0, 1)


def test_sheet_values(desk):
    m, C = desk.model, desk.curve
    F = C.F
    assert m.sheet_values(INFINITY) == tuple(sorted((F(1), -F(1))))
    for P in C.rational_points():
        r0, r1 = m.sheet_values(P)
        assert r0 == -r1 and r0 != r1
        hx = m.h(P.x)
        if not hx.is_zero():
            assert r0 * r0 == hx
        else:
            # value of sqrt(h)/y at a ramification point of x in S
            htilde = m.h // Poly(C.p, [-P.x, 1])
            assert r0 * r0 * C.f.derivative()(P.x) == htilde(P.x)


def test_unramified_fibres(desk):
    """Every base point has two distinct preimages, so the cover is unramified."""
    m, C = desk.model, desk.curve
    for P in C.rational_points(2) + [INFINITY]:
        Q0, Q1 = m.points_above(P)
        assert Q0 != Q1 and Q0.base == Q1.base == P
        assert m.sigma(Q0) == Q1 and m.sigma(Q1) == Q0
        assert m.sigma(m.sigma(Q0)) == Q0


def test_points_above_rejects_off_curve(desk2):
    F = desk2.curve.F
    P = desk2.curve.rational_points()[-1]
    with pytest.raises(PointNotOnCurve):
        desk2.model.points_above(Point(P.x, P.y + F(1)))


def test_g2_weierstrass_sheets_rational(desk2):
    m = desk2.model
    for i, W in enumerate(desk2.curve.weierstrass_points()):
        for Q in m.points_above(W):
            if i in m.S:
                assert Q.degree == 1


def test_norm_of_pullback(desk):
    m, C = desk.model, desk.curve
    rnd = random.Random(2)
    places = galois_closed_places(C)
    for _ in range(30):
        D = random_divisor(rnd, places)
        R = m.pullback_divisor(D)
        assert R.degree == 2 * D.degree
        assert m.norm_divisor(R) == D * 2
        assert m.sigma_divisor(R) == R


def test_disjointness(desk2):
    m = desk2.model
    Q = m.rational_points()[0]
    Q2 = m.rational_points()[2]
    assert m.disjoint_from_involute(CoverDivisor({Q: 2, Q2: 1}))
    assert not m.disjoint_from_involute(CoverDivisor({Q: 1, m.sigma(Q): 1}))
    assert m.disjoint_from_involute(CoverDivisor())
    with pytest.raises(NotEffective):
        m.disjoint_from_involute(CoverDivisor({Q: -1}))


def test_kt_sections(desk):
    C, m = desk.curve, desk.model
    assert C.rr_dimension(C.canonical_divisor() + m.D_T) == C.g - 1


def test_rational_point_count(desk):
    """Over F_p a base point splits exactly when its sheet value is rational."""
    m, C = desk.model, desk.curve
    expected = sum(2 for P in C.rational_points() + [INFINITY] if m.sheet_values(P)[0].degree == 1)
    assert len(m.rational_points()) == expected
