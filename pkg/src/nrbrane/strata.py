"""Stratification of the Lagrangian slice over a nodal base point.

A Higgs bundle in the slice is recorded by its coordinates (D, alpha):
D is a subdivisor of div(b) and alpha a function on supp(D), that is an
element of H^0(O_D).  Points of div(b) may live in extensions of F_p; the
strata are those of the fibre over the algebraic closure and alpha takes
values in the residue field of each point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Union

import sympy

from .curve import Divisor, Point
from .errors import (
    NotAVHSFixedPoint,
    NotNodalIntegral,
    PreconditionViolated,
    ZeroScalar,
)
from .exactfield import FieldElem
from .picard import PicClass, class_of_divisor
from .spectral import BasePoint, is_ni

M_SIDE = "M"
MT_SIDE = "MT"


@dataclass(frozen=True, eq=False)
class StratumPoint:
    bp: BasePoint
    M: PicClass
    D: Divisor
    alpha: tuple  # ((point, value), ...) sorted by point

    def __post_init__(self):
        divb = self.bp.div_of_b()
        if not (self.D.is_effective() and self.D.is_reduced()):
            raise ValueError(f"D = {self.D!r} must be reduced and effective")
        if not self.D <= divb:
            raise ValueError(f"D = {self.D!r} is not a subdivisor of div(b)")
        if [P for P, _ in self.alpha] != self.D.support():
            raise ValueError("alpha must be defined exactly on supp(D)")

    def __eq__(self, other):
        return isinstance(other, StratumPoint) and (self.bp, self.M, self.D, self.alpha) == (
            other.bp, other.M, other.D, other.alpha)

    def __hash__(self):
        return hash((self.bp, self.D, self.alpha))

    @property
    def alpha_map(self) -> dict:
        return dict(self.alpha)

    def alpha_zero_set(self) -> Divisor:
        return Divisor({P: 1 for P, a in self.alpha if a.is_zero()})


def stratum_point(bp: BasePoint, M: PicClass, D: Divisor, alpha) -> StratumPoint:
    """Build a stratum point; alpha is a dict or a sequence aligned with supp(D)."""
    F = bp.curve.F
    supp = D.support()
    if isinstance(alpha, dict):
        vals = [alpha[P] for P in supp]
    else:
        vals = list(alpha)
    vals = [v if isinstance(v, FieldElem) else F(v) for v in vals]
    return StratumPoint(bp, M, D, tuple(zip(supp, vals)))


def _require_ni(bp: BasePoint):
    if not is_ni(bp):
        raise NotNodalIntegral("the base point is not in the nodal locus")


def subdivisors(divb: Divisor):
    """All reduced subdivisors of a reduced divisor, by degree then support order."""
    supp = divb.support()
    for k in range(len(supp) + 1):
        for combo in itertools.combinations(supp, k):
            yield Divisor({P: 1 for P in combo})


def enumerate_strata(bp: BasePoint, M: PicClass = None) -> list:
    """(D, dim V(D)) for every subdivisor D of div(b); dim V(D) = deg D."""
    _require_ni(bp)
    return [(D, D.degree) for D in subdivisors(bp.div_of_b())]


def dprime_of(pt: StratumPoint) -> Divisor:
    """D' = (div(b) - D) + {x in D : alpha(x) != 0}."""
    divb = pt.bp.div_of_b()
    nonzero = Divisor({P: 1 for P, a in pt.alpha if not a.is_zero()})
    return (divb - pt.D) + nonzero


def dprime_by_fibres(pt: StratumPoint) -> Divisor:
    """D' read off the image lines of Psi = (s alpha; 0 b/s) at each node.

    At a node x, s vanishes iff x is in D and b/s vanishes iff it is not.
    The M-direction is the first basis vector and the MT-direction the
    second; x belongs to D' when the image line of Psi_x differs from the
    MT-direction.
    """
    F = pt.bp.curve.F
    divb = pt.bp.div_of_b()
    amap = pt.alpha_map
    out = {}
    for x in divb.support():
        s = F(0) if pt.D[x] else F(1)
        b_over_s = F(1) if pt.D[x] else F(0)
        a = amap.get(x, F(0))
        cols = [(s, F(0)), (a, b_over_s)]
        image = [c for c in cols if not (c[0].is_zero() and c[1].is_zero())]
        # rank one at a reduced node: all nonzero columns are proportional
        u0, u1 = image[0]
        for w0, w1 in image[1:]:
            assert (u0 * w1 - u1 * w0).is_zero()
        if not u0.is_zero():
            out[x] = 1
    return Divisor(out)


def realizable_dprimes(divb: Divisor, D: Divisor) -> set:
    """Every D' attained by some alpha on supp(D)."""
    rest = divb - D
    supp = D.support()
    out = set()
    for k in range(len(supp) + 1):
        for Z in itertools.combinations(supp, k):
            out.add(rest + Divisor({P: 1 for P in Z}))
    return out


def strata_intersection_nonempty(D: Divisor, Dp: Divisor, divb: Divisor) -> bool:
    """Whether some point has coordinates D and D' simultaneously.

    Constructive: alpha is 1 on supp(D) inside D' and 0 elsewhere; the
    resulting D' is compared with the requested one.
    """
    rest = divb - D
    if not rest <= Dp:
        return False
    nonzero = Divisor({P: 1 for P in D.support() if Dp[P]})
    return rest + nonzero == Dp


# -- semistability and limits ----------------------------------------------


@dataclass(frozen=True)
class Unstable:
    destabilizer: PicClass
    side: str


@dataclass(frozen=True)
class StrictlySemistable:
    side: str


@dataclass(frozen=True)
class Stable:
    pass


SemistabilityVerdict = Union[Unstable, StrictlySemistable, Stable]


def classify_semistability(pt: StratumPoint) -> SemistabilityVerdict:
    g = pt.bp.curve.g
    Dp = dprime_of(pt)
    d, dp = pt.D.degree, Dp.degree
    if d < g - 1 and dp < g - 1:
        raise PreconditionViolated("both sides destabilize; D' is inconsistent with D")
    C = pt.bp.curve
    if d < g - 1:
        return Unstable(pt.M - class_of_divisor(C, pt.D), M_SIDE)
    if dp < g - 1:
        MT = pt.M + pt.bp.base.model.T
        return Unstable(MT - class_of_divisor(C, Dp), MT_SIDE)
    if d == g - 1:
        return StrictlySemistable(M_SIDE)
    if dp == g - 1:
        return StrictlySemistable(MT_SIDE)
    return Stable()


@dataclass(frozen=True)
class SemistableBundle:
    det: PicClass


@dataclass(frozen=True)
class FixedPointVHS:
    """(L1 + L2, phi) with phi a section of L1^-1 L2 K vanishing on phi_divisor."""

    L1: PicClass
    L2: PicClass
    phi_divisor: Divisor

    def __post_init__(self):
        deg_k = self.L1.curve.g * 2 - 2
        if self.phi_divisor.degree != self.L2.degree - self.L1.degree + deg_k:
            raise ValueError("phi divisor has the wrong degree")


def cstar_limit(pt: StratumPoint):
    """lim_{t -> 0} (E, t phi) for the bundle with coordinates pt."""
    verdict = classify_semistability(pt)
    base = pt.bp.base
    K = base.K_class
    if not isinstance(verdict, Unstable):
        return SemistableBundle(pt.M * 2 - K)
    C = pt.bp.curve
    if verdict.side == M_SIDE:
        L, Dx = pt.M, pt.D
    else:
        L, Dx = pt.M + base.model.T, dprime_of(pt)
    cD = class_of_divisor(C, Dx)
    return FixedPointVHS(L - cD, L - K + cD, Dx * 2)


WOBBLY = "Wobbly"
VERY_STABLE = "VeryStable"


def hh_wobbly_criterion(fp) -> str:
    """Wobbly iff phi has a multiple zero; maximal deg L1 = g - 1 is always very stable."""
    if not isinstance(fp, FixedPointVHS):
        raise NotAVHSFixedPoint("not a fixed point with nonzero Higgs field")
    g = fp.L1.curve.g
    if not 1 <= fp.L1.degree <= g - 1:
        raise NotAVHSFixedPoint(f"deg L1 = {fp.L1.degree} is outside [1, {g - 1}]")
    if fp.L1.degree == g - 1:
        return VERY_STABLE
    if any(m >= 2 for _, m in fp.phi_divisor.items()):
        return WOBBLY
    return VERY_STABLE


@dataclass(frozen=True)
class NilpotentWitness:
    divisor: Divisor
    function: object
    dimension: int


def nilpotent_witness_semistable(pt: StratumPoint) -> NilpotentWitness:
    """A nonzero section of K^2(-2D) ~ O(2 div(b) - 2D).

    Its existence gives a nonzero nilpotent Higgs field on the limit E,
    so the semistable limit (E, 0) is wobbly.
    """
    if isinstance(classify_semistability(pt), Unstable):
        raise PreconditionViolated("the stratum point is unstable")
    C = pt.bp.curve
    div = pt.bp.div_of_b() * 2 - pt.D * 2
    basis = C.rr_basis(div)
    if not basis:
        raise PreconditionViolated(f"L({div!r}) is zero")
    w = basis[0]
    assert C.in_rr_space(w, div)
    return NilpotentWitness(div, w, len(basis))


@dataclass(frozen=True)
class LimitReport:
    verdict: SemistabilityVerdict
    limit: object
    label: str
    witness: object = dc_field(default=None, compare=False)

    @property
    def wobbly(self) -> bool:
        return self.label == WOBBLY


def limit_report(pt: StratumPoint, with_witness: bool = True) -> LimitReport:
    """Classify the limit of pt as a wobbly semistable bundle, or a wobbly or very stable VHS."""
    verdict = classify_semistability(pt)
    lim = cstar_limit(pt)
    if isinstance(lim, SemistableBundle):
        w = nilpotent_witness_semistable(pt) if with_witness else None
        return LimitReport(verdict, lim, WOBBLY, w)
    return LimitReport(verdict, lim, hh_wobbly_criterion(lim))


def cstar_scaling_closure(pt: StratumPoint, t) -> StratumPoint:
    """The point over (t a, t b) with the same D and alpha scaled by t.

    Scaling b by t and alpha by t keeps the line [alpha : b/s] at every
    node, so the Hecke data and both coordinates D, D' are unchanged.
    """
    F = pt.bp.curve.F
    t = t if isinstance(t, FieldElem) else F(t)
    if t.is_zero():
        raise ZeroScalar("t must be nonzero")
    return StratumPoint(pt.bp.scaled(t), pt.M, pt.D, tuple((P, t * a) for P, a in pt.alpha))


# -- symbolic identities ------------------------------------------------------


def symbolic_higgs_identity() -> dict:
    """Check the Higgs field identities in Q[a, b, s, alpha, 1/s].

    phi = (-s alpha + a, -alpha^2 + b^2/s^2; s^2, s alpha + a),
    Psi = (s, alpha; 0, b/s) and Phi = (a, b; b, a).
    """
    a, b, s, al = sympy.symbols("a b s alpha")
    phi = sympy.Matrix([[-s * al + a, -al**2 + b**2 / s**2], [s**2, s * al + a]])
    Psi = sympy.Matrix([[s, al], [0, b / s]])
    Phi = sympy.Matrix([[a, b], [b, a]])
    trace = sympy.expand(phi.trace() - 2 * a) == 0
    det = sympy.expand(sympy.cancel(s**2 * phi.det()) - s**2 * (a**2 - b**2)) == 0
    diff = (Psi * phi - Phi * Psi) * s
    hecke = all(sympy.expand(sympy.cancel(e)) == 0 for e in diff)
    section = phi.subs({al: 0, s: 1}) == sympy.Matrix([[a, b**2], [1, a]])
    trace_a0 = sympy.expand(phi.subs(a, 0).trace()) == 0
    return {
        "trace": bool(trace),
        "determinant": bool(det),
        "hecke": bool(hecke),
        "hitchin_section": bool(section),
        "traceless_at_a0": bool(trace_a0),
        "phi": str(phi.tolist()),
    }


# -- table rows --------------------------------------------------------------


def generic_alpha(D: Divisor, F) -> dict:
    return {P: F(1) for P in D.support()}


def alpha_patterns(pt_D: Divisor, F):
    """One alpha per zero pattern on supp(D)."""
    supp = pt_D.support()
    for bits in itertools.product((0, 1), repeat=len(supp)):
        yield {P: F(v) for P, v in zip(supp, bits)}


def stratum_row(bp: BasePoint, M: PicClass, D: Divisor) -> dict:
    """Generic-alpha data for V(D) plus a summary over every alpha zero pattern."""
    F = bp.curve.F
    pt = stratum_point(bp, M, D, generic_alpha(D, F))
    rep = limit_report(pt)
    labels = []
    for alpha in alpha_patterns(D, F):
        q = stratum_point(bp, M, D, alpha)
        labels.append(limit_report(q, with_witness=False).label)
    return {
        "point": pt,
        "D": D,
        "dim": D.degree,
        "Dprime": dprime_of(pt),
        "report": rep,
        "contains_very_stable": VERY_STABLE in labels,
        "patterns": len(labels),
    }


def strata_rows(bp: BasePoint, M: PicClass, masks=None) -> list:
    """Rows for every stratum (or for the subdivisors listed by index in masks)."""
    strata = enumerate_strata(bp, M)
    idx = range(len(strata)) if masks is None else masks
    return [stratum_row(bp, M, strata[i][0]) for i in idx]
