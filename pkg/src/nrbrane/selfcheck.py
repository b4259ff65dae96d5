"""Invariant suite run by ``nrbrane selfcheck``; each group reports pass/fail counts."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .cover import CoverDivisor
from .curve import INFINITY, CurveFunction, Divisor, Point
from .errors import NRBraneError
from .exactfield import Poly, field, poly_roots, sqrt_fq
from .picard import (
    class_of_divisor,
    enumerate_two_torsion,
    is_effective_class,
    random_class,
    trivial_class,
)
from .spectral import characteristic_coefficients, eigenvalues_at, spectral_invariants
from .strata import (
    VERY_STABLE,
    Unstable,
    alpha_patterns,
    classify_semistability,
    cstar_limit,
    cstar_scaling_closure,
    dprime_by_fibres,
    dprime_of,
    enumerate_strata,
    limit_report,
    realizable_dprimes,
    stratum_point,
    strata_intersection_nonempty,
    subdivisors,
    symbolic_higgs_identity,
)
from .wobbly_bbb import check_membership, candidate_divisors, delta_constraints


@dataclass
class GroupResult:
    name: str
    passed: int = 0
    failed: int = 0
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def record(self, cond: bool, note: str = ""):
        if cond:
            self.passed += 1
        else:
            self.failed += 1
            if note and len(self.notes) < 5:
                self.notes.append(note)


def galois_closed_places(C, ext: int = 2):
    """Points of degree 1, and Frobenius-orbits of points of degree 2, as divisors."""
    places = [Divisor({P: 1}) for P in C.rational_points(1)] + [Divisor({INFINITY: 1})]
    seen = set()
    for P in C.rational_points(ext):
        if P.degree == 1 or P in seen:
            continue
        Q = Point(P.x.frobenius(), P.y.frobenius())
        seen.update((P, Q))
        places.append(Divisor({P: 1, Q: 1}))
    return places


def random_divisor(rng: random.Random, places, terms: int = 4, lo: int = -2, hi: int = 3) -> Divisor:
    D = Divisor()
    for _ in range(terms):
        D = D + rng.choice(places) * rng.randint(lo, hi)
    return D


def check_field(setup, rng, n):
    res = GroupResult("field")
    p = setup.curve.p
    for k in (1, 2):
        F = field(p, k)
        els = list(F.elements())
        for _ in range(n):
            a, b, c = (rng.choice(els) for _ in range(3))
            res.record((a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c)
            if not a.is_zero():
                res.record(a * a.inverse() == F(1))
            r = sqrt_fq(a)
            res.record(r is None or all(x * x == a for x in r))
    q = Poly(p, [rng.randrange(p) for _ in range(5)] + [1])
    roots = poly_roots(q, 2)
    res.record(all(q(r).is_zero() for r in roots) and len(roots) <= q.degree)
    return res


def check_riemann_roch(setup, rng, n):
    res = GroupResult("riemann_roch")
    C = setup.curve
    g = C.g
    places = galois_closed_places(C)
    K = C.canonical_divisor()
    while res.passed + res.failed < n:
        D = random_divisor(rng, places)
        if not -3 <= D.degree <= 2 * g + 2:
            continue
        l, lk = C.rr_dimension(D), C.rr_dimension(K - D)
        res.record(l - lk == D.degree - g + 1, f"{D!r}: {l} - {lk}")
    res.record(C.rr_dimension(K) == g)
    return res


def check_group_law(setup, rng, n):
    res = GroupResult("group_law")
    C = setup.curve
    O = trivial_class(C)
    for _ in range(n):
        a, b, c = (random_class(C, rng) for _ in range(3))
        res.record((a + b) + c == a + (b + c) and a + b == b + a and a + O == a and (a - a) == O)
    for _ in range(max(1, n // 10)):
        x = Poly(C.p, [rng.randrange(C.p), 1])
        fn = CurveFunction(x * Poly(C.p, [rng.randrange(C.p), 1]), Poly(C.p), Poly(C.p, [rng.randrange(C.p), 1]))
        res.record(class_of_divisor(C, C.divisor_of_function(fn)) == O)
    return res


def check_two_torsion(setup):
    res = GroupResult("two_torsion")
    C = setup.curve
    tt = enumerate_two_torsion(C)
    res.record(len(tt) == 4**C.g and len(set(tt)) == len(tt))
    O = trivial_class(C)
    for c in tt:
        res.record(c + c == O)
    return res


def check_cover(setup, rng, n):
    res = GroupResult("cover")
    C, model = setup.curve, setup.model
    places = galois_closed_places(C)
    for _ in range(n):
        D = random_divisor(rng, places)
        R = model.pullback_divisor(D)
        res.record(model.norm_divisor(R) == D * 2 and model.sigma_divisor(R) == R)
    for Q in model.rational_points(1):
        s = model.sigma(Q)
        res.record(s != Q and model.sigma(s) == Q and s.base == Q.base)
    res.record(C.rr_dimension(C.canonical_divisor() + model.D_T) == C.g - 1)
    return res


def check_spectral(setup, rng, n, npts=20):
    res = GroupResult("spectral")
    C, H = setup.curve, setup.hitchin
    g = C.g
    res.record(len(H.basis_a) == g and len(H.basis_b) == g - 1 and H.dimension == 2 * g - 1)
    pts = [P for P in C.rational_points(2) if not P.y.is_zero()]
    for _ in range(n):
        bp = H.sample(rng)
        divb = bp.div_of_b()
        inv = spectral_invariants(bp)
        res.record(divb.degree == 2 * g - 2 and divb.is_reduced() and inv.arithmetic_genus == 4 * g - 3)
        for P in rng.sample(pts, min(npts, len(pts))):
            e = eigenvalues_at(bp, P)
            tr, det = characteristic_coefficients(bp, P)
            res.record(e[0] + e[1] == tr and e[0] * e[1] == det)
        nb = bp.negated_b()
        res.record(nb.div_of_b() == divb)
    return res


def check_strata(setup, rng, nbp):
    res = GroupResult("strata")
    C, H, M = setup.curve, setup.hitchin, setup.M
    g = C.g
    for _ in range(nbp):
        bp = H.sample(rng)
        divb = bp.div_of_b()
        strata = enumerate_strata(bp, M)
        res.record(len(strata) == 2 ** (2 * g - 2) and all(dim == D.degree for D, dim in strata))
        very_stable = set()
        for D, _ in strata:
            reach = realizable_dprimes(divb, D)
            for Dp in subdivisors(divb):
                res.record((Dp in reach) == (divb <= D + Dp) == strata_intersection_nonempty(D, Dp, divb))
            for alpha in alpha_patterns(D, C.F):
                pt = stratum_point(bp, M, D, alpha)
                Dp = dprime_of(pt)
                res.record(Dp == dprime_by_fibres(pt))
                res.record(not (D.degree < g - 1 and Dp.degree < g - 1))
                rep = limit_report(pt)
                if rep.label == VERY_STABLE:
                    very_stable.add((D, Dp))
                if not isinstance(rep.verdict, Unstable):
                    res.record(rep.witness is not None and rep.witness.dimension >= 1)
        res.record(very_stable == {(Divisor(), divb), (divb, Divisor())}, f"very stable set {very_stable}")
    return res


def check_symbolic():
    res = GroupResult("symbolic")
    out = symbolic_higgs_identity()
    for key in ("trace", "determinant", "hecke", "hitchin_section", "traceless_at_a0"):
        res.record(out[key], key)
    return res


def check_scaling(setup, rng, n):
    res = GroupResult("cstar_scaling")
    C, H, M = setup.curve, setup.hitchin, setup.M
    bp = H.sample(rng)
    strata = enumerate_strata(bp, M)
    for _ in range(n):
        D, _ = rng.choice(strata)
        alpha = [rng.randrange(C.p) for _ in range(D.degree)]
        pt = stratum_point(bp, M, D, alpha)
        t = C.F(rng.randrange(1, C.p))
        q = cstar_scaling_closure(pt, t)
        fresh = H.curve.divisor_of_function(q.bp.fb) + H.KT
        res.record(
            q.D == pt.D
            and fresh == bp.div_of_b()
            and classify_semistability(q) == classify_semistability(pt)
            and cstar_limit(q) == cstar_limit(pt)
        )
    return res


def check_wobbly(setup, rng, n):
    res = GroupResult("wobbly_bbb")
    C, model = setup.curve, setup.model
    g = C.g
    info = delta_constraints(g)
    K = class_of_divisor(C, C.canonical_divisor())
    top = 2 * g - 2
    m = check_membership(model, trivial_class(C, info.d0[top]), CoverDivisor())
    res.record(m.accepted and m.witness.is_effective() and m.witness.degree == top)
    cands = []
    for delta in info.admissible:
        for i, R in enumerate(candidate_divisors(model, top - delta)):
            if i >= 4 * n:
                break
            cands.append((delta, R))
    for delta, R in rng.sample(cands, min(n, len(cands))):
        F0 = random_class(C, rng, info.d0[delta])
        a = check_membership(model, F0, R)
        b = check_membership(model, F0, model.sigma_divisor(R))
        res.record(a.accepted == b.accepted and a.reason == b.reason)
        if a.accepted:
            ok, _ = is_effective_class(K + model.T - class_of_divisor(C, model.norm_divisor(R)))
            res.record(
                ok
                and a.witness.is_effective()
                and a.witness.degree == delta
                and a.det_class.degree == 0
                and a.det_class == F0 * 2 + K - class_of_divisor(C, a.witness)
            )
    return res


def run_selfcheck(setup, seed: int = 0, scale: int = 1) -> list:
    """Run every group; NRBraneError inside a group counts as a failure of that group."""
    rng = random.Random(seed)
    plan = [
        ("field", lambda: check_field(setup, rng, 20 * scale)),
        ("riemann_roch", lambda: check_riemann_roch(setup, rng, 40 * scale)),
        ("group_law", lambda: check_group_law(setup, rng, 40 * scale)),
        ("two_torsion", lambda: check_two_torsion(setup)),
        ("cover", lambda: check_cover(setup, rng, 20 * scale)),
        ("spectral", lambda: check_spectral(setup, rng, 5 * scale, 10)),
        ("strata", lambda: check_strata(setup, rng, scale)),
        ("symbolic", check_symbolic),
        ("cstar_scaling", lambda: check_scaling(setup, rng, 10 * scale)),
        ("wobbly_bbb", lambda: check_wobbly(setup, rng, 10 * scale)),
    ]
    out = []
    for name, fn in plan:
        try:
            out.append(fn())
        except NRBraneError as exc:
            r = GroupResult(name, failed=1)
            r.notes.append(f"{type(exc).__name__}: {exc}")
            out.append(r)
    return out
