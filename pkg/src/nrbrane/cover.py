"""The unramified double cover attached to a nontrivial 2-torsion class.

The cover is t^2 = h(x) with h = prod_{i in S} (x - e_i).  A point above
P is labelled by the value at P of a local square root:

* sqrt(h) itself where h(x0) != 0,
* sqrt(h) / y at W_i for i in S, whose value is +-sqrt(h~(e_i) / f'(e_i))
  with h~ = h / (x - e_i),
* sqrt(h) / x^{|S|/2} at infinity, whose value is +-1.

Sheet 0 carries the smaller of the two values; sigma swaps them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .curve import INFINITY, Divisor, FormalSum, HyperCurve, Point
from .errors import NotEffective, PointNotOnCurve
from .exactfield import FieldElem, Poly, sqrt_ext
from .picard import canonical_subset, two_torsion_class, two_torsion_divisor


@dataclass(frozen=True)
class CoverPoint:
    base: Point
    sheet: int
    value: Optional[FieldElem] = None

    @property
    def degree(self) -> int:
        if self.value is None:
            return self.base.degree
        return math.lcm(self.base.degree, self.value.degree)

    def sort_key(self):
        return (self.base.sort_key(), self.sheet)

    def __repr__(self):
        return f"{self.base!r}#{self.sheet}"


class CoverDivisor(FormalSum):
    """Divisor on the cover (keys are :class:`CoverPoint`)."""

    __slots__ = ()


class CoverModel:
    def __init__(self, curve: HyperCurve, S):
        self.curve = curve
        self.T = two_torsion_class(curve, tuple(S))
        if self.T.is_trivial():
            raise ValueError("the 2-torsion subset must give a nontrivial class")
        self.S = canonical_subset(self.T)
        roots = curve.weierstrass_roots()
        self.roots = roots
        h = Poly(curve.p, [1])
        for i in self.S:
            h = h * Poly(curve.p, [-roots[i], 1])
        self.h = h
        self.D_T = two_torsion_divisor(curve, self.S)

    def __repr__(self):
        return f"CoverModel(S={self.S}, h={self.h!r})"

    @property
    def genus(self) -> int:
        return 2 * self.curve.g - 1

    def sheet_values(self, P: Point):
        C = self.curve
        if P.is_infinity:
            one = C.F(1)
            return tuple(sorted((one, -one)))
        hx = self.h(P.x)
        if not hx.is_zero():
            return sqrt_ext(hx, C.cap)
        htilde = self.h // Poly(C.p, [-P.x, 1])
        return sqrt_ext(htilde(P.x) / C.f.derivative()(P.x), C.cap)

    def points_above(self, P: Point):
        if not self.curve.contains(P):
            raise PointNotOnCurve(f"{P!r} is not on the base curve")
        r0, r1 = self.sheet_values(P)
        return CoverPoint(P, 0, r0), CoverPoint(P, 1, r1)

    def sigma(self, Q: CoverPoint) -> CoverPoint:
        return CoverPoint(Q.base, 1 - Q.sheet, -Q.value)

    def sigma_divisor(self, R: CoverDivisor) -> CoverDivisor:
        return R.map_keys(self.sigma)

    def norm_divisor(self, R: CoverDivisor) -> Divisor:
        return R.map_keys(lambda Q: Q.base, Divisor)

    def pullback_divisor(self, D: Divisor) -> CoverDivisor:
        terms = {}
        for P, m in D.items():
            for Q in self.points_above(P):
                terms[Q] = m
        return CoverDivisor(terms)

    def disjoint_from_involute(self, R: CoverDivisor) -> bool:
        if not R.is_effective():
            raise NotEffective(f"{R!r} is not effective")
        supp = set(R.support())
        return not any(self.sigma(Q) in supp for Q in supp)

    def rational_points(self, n: int = 1) -> list:
        """Cover points whose base point and sheet value both lie in F_{p^n}."""
        out = []
        for P in self.curve.rational_points(n) + [INFINITY]:
            for Q in self.points_above(P):
                if n % Q.value.degree == 0:
                    out.append(Q)
        return sorted(out, key=CoverPoint.sort_key)


def cover_genus(model: CoverModel) -> int:
    return model.genus
