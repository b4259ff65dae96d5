"""Points (a, b) of the Hitchin base attached to a 2-torsion class T.

a is a section of K and b a section of KT.  Both are stored as functions:
a = fa * dx/y with fa in L(K_rep), and b corresponds to fb in
L(K_rep + D_T), where K_rep = (2g-2) inf and D_T = sum_S W_i - |S| inf.
Squaring b and multiplying by h (div h = 2 D_T) lands back in K^2, which
is how b^2 is evaluated in the dx trivialization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .cover import CoverModel, CoverPoint
from .curve import CurveFunction, Divisor, Point, linear_combination
from .errors import BadTrivializationPoint, NotNodalIntegral, WrongDegree, ZeroSection
from .exactfield import FieldElem
from .picard import PicClass, class_of_divisor


class HitchinBase:
    """Section spaces H^0(K) and H^0(KT) for a fixed cover model."""

    def __init__(self, model: CoverModel):
        self.model = model
        self.curve = C = model.curve
        self.K = C.canonical_divisor()
        self.KT = self.K + model.D_T
        self.basis_a = C.rr_basis(self.K)
        self.basis_b = C.rr_basis(self.KT)
        self.K_class = class_of_divisor(C, self.K)

    @property
    def dimension(self) -> int:
        return len(self.basis_a) + len(self.basis_b)

    def base_point(self, a_coeffs, b_coeffs) -> "BasePoint":
        F = self.curve.F
        a_coeffs = tuple(F(c) for c in a_coeffs)
        b_coeffs = tuple(F(c) for c in b_coeffs)
        if len(a_coeffs) != len(self.basis_a) or len(b_coeffs) != len(self.basis_b):
            raise ValueError("coefficient vectors must match the section bases")
        fa = linear_combination(a_coeffs, self.basis_a)
        fb = linear_combination(b_coeffs, self.basis_b)
        return BasePoint(self, fa, fb, a_coeffs, b_coeffs)

    def from_functions(self, fa: CurveFunction, fb: CurveFunction) -> "BasePoint":
        C = self.curve
        if not C.in_rr_space(fa, self.K) or not C.in_rr_space(fb, self.KT):
            raise ValueError("functions do not represent sections of K and KT")
        return BasePoint(self, fa, fb)

    def sample(self, rng: random.Random, max_tries: int = 200) -> "BasePoint":
        """A random point with div(b) reduced, by rejection sampling."""
        p = self.curve.p
        for _ in range(max_tries):
            a = [rng.randrange(p) for _ in self.basis_a]
            b = [rng.randrange(p) for _ in self.basis_b]
            bp = self.base_point(a, b)
            if bp.is_ni():
                return bp
        raise NotNodalIntegral(f"no nodal point found in {max_tries} samples")


@dataclass(frozen=True, eq=False)
class BasePoint:
    base: HitchinBase
    fa: CurveFunction
    fb: CurveFunction
    a_coeffs: Optional[tuple] = None
    b_coeffs: Optional[tuple] = None

    def __eq__(self, other):
        return isinstance(other, BasePoint) and (self.fa, self.fb) == (other.fa, other.fb)

    def __hash__(self):
        return hash((self.fa, self.fb))

    @property
    def curve(self):
        return self.base.curve

    @cached_property
    def _div_b(self) -> Divisor:
        if self.fb.is_zero():
            raise ZeroSection("b is the zero section")
        return self.curve.divisor_of_function(self.fb) + self.base.KT

    def div_of_b(self) -> Divisor:
        return self._div_b

    def is_ni(self) -> bool:
        return is_ni(self)

    def scaled(self, t: FieldElem) -> "BasePoint":
        a = tuple(t * c for c in self.a_coeffs) if self.a_coeffs is not None else None
        b = tuple(t * c for c in self.b_coeffs) if self.b_coeffs is not None else None
        out = BasePoint(self.base, self.fa.scale(t), self.fb.scale(t), a, b)
        if "_div_b" in self.__dict__:
            # zeros of t*b are those of b
            out.__dict__["_div_b"] = self._div_b
        return out

    def negated_b(self) -> "BasePoint":
        b = tuple(-c for c in self.b_coeffs) if self.b_coeffs is not None else None
        return BasePoint(self.base, self.fa, -self.fb, self.a_coeffs, b)


@dataclass(frozen=True)
class SpectralInvariants:
    nodes: Divisor
    arithmetic_genus: int
    geometric_genus: int


def div_of_b(bp: BasePoint) -> Divisor:
    """Zero divisor of b, effective of degree 2g - 2."""
    return bp._div_b


def is_ni(bp: BasePoint) -> bool:
    """b != 0 and div(b) consists of 2g - 2 distinct points."""
    if bp.fb.is_zero():
        return False
    return div_of_b(bp).is_reduced()


def spectral_invariants(bp: BasePoint) -> SpectralInvariants:
    if not is_ni(bp):
        raise NotNodalIntegral("div(b) is not reduced")
    g = bp.curve.g
    nodes = div_of_b(bp)
    pa, geo = 4 * g - 3, 2 * g - 1
    assert nodes.degree == 2 * g - 2 and pa - nodes.degree == geo
    return SpectralInvariants(nodes, pa, geo)


def _check_regular(bp: BasePoint, P: Point):
    if P.is_infinity or P.y.is_zero():
        raise BadTrivializationPoint(f"dx trivialization is singular at {P!r}")
    if not bp.curve.contains(P):
        raise BadTrivializationPoint(f"{P!r} is not on the curve")


def a_value(bp: BasePoint, P: Point) -> FieldElem:
    _check_regular(bp, P)
    return bp.curve.evaluate(bp.fa, P) / P.y


def b_squared_value(bp: BasePoint, P: Point) -> FieldElem:
    _check_regular(bp, P)
    fb = bp.curve.evaluate(bp.fb, P)
    return fb * fb * bp.base.model.h(P.x) / (P.y * P.y)


def nu(bp: BasePoint, Q: CoverPoint) -> FieldElem:
    """The eigenvalue a + b on the sheet of Q; sigma(Q) gives a - b."""
    P = Q.base
    _check_regular(bp, P)
    return a_value(bp, P) + bp.curve.evaluate(bp.fb, P) * Q.value / P.y


def eigenvalues_at(bp: BasePoint, P: Point) -> tuple:
    """Roots of lambda^2 - 2a(P) lambda + (a^2 - b^2)(P), sorted."""
    _check_regular(bp, P)
    if bp.curve.evaluate(bp.fb, P).is_zero():
        a = a_value(bp, P)
        return a, a
    return tuple(sorted(nu(bp, Q) for Q in bp.base.model.points_above(P)))


def characteristic_coefficients(bp: BasePoint, P: Point) -> tuple:
    """(tr, det) = (2a(P), a(P)^2 - b(P)^2) in the dx trivialization."""
    a = a_value(bp, P)
    return a * 2, a * a - b_squared_value(bp, P)


@dataclass(frozen=True)
class HitchinSectionPoint:
    L1: PicClass
    L2: PicClass
    matrix: tuple = (("a", "b^2"), ("1", "a"))

    @property
    def det_class(self) -> PicClass:
        return self.L1 + self.L2


def hitchin_section_points(bp: BasePoint, M: PicClass):
    """The two distinguished points (M + MK^-1) and (MT + MTK^-1) over bp."""
    g = bp.curve.g
    if M.degree != g - 1:
        raise WrongDegree(f"deg M = {M.degree}, expected {g - 1}")
    K = bp.base.K_class
    MT = M + bp.base.model.T
    return HitchinSectionPoint(M, M - K), HitchinSectionPoint(MT, MT - K)
