"""Plain JSON-able encodings of field elements, points, divisors and classes."""

from __future__ import annotations

from .cover import CoverDivisor, CoverPoint
from .curve import INFINITY, CurveFunction, Divisor, HyperCurve, Point
from .exactfield import FieldElem, Poly, field
from .picard import PicClass


def elem(e: FieldElem):
    """An int for prime-field elements, the coordinate list otherwise."""
    return int(e) if e.degree == 1 else e.coords()


def decode_elem(p: int, obj) -> FieldElem:
    if isinstance(obj, int):
        return field(p)(obj)
    return field(p, len(obj))(list(obj))


def poly(q: Poly) -> list:
    return [elem(c) for c in q.coeffs]


def decode_poly(p: int, obj) -> Poly:
    return Poly(p, [decode_elem(p, c) for c in obj])


def point(P: Point):
    return "inf" if P.is_infinity else [elem(P.x), elem(P.y)]


def decode_point(p: int, obj) -> Point:
    if obj == "inf":
        return INFINITY
    return Point(decode_elem(p, obj[0]), decode_elem(p, obj[1]))


def divisor(D: Divisor) -> list:
    return [[point(P), m] for P, m in D.items()]


def decode_divisor(p: int, obj) -> Divisor:
    return Divisor({decode_point(p, P): m for P, m in obj})


def cover_point(Q: CoverPoint) -> dict:
    return {"base": point(Q.base), "sheet": Q.sheet}


def cover_divisor(R: CoverDivisor) -> list:
    return [[cover_point(Q), m] for Q, m in R.items()]


def pic(c: PicClass) -> dict:
    return {"deg": c.n, "u": poly(c.u), "v": poly(c.v)}


def decode_pic(C: HyperCurve, obj) -> PicClass:
    return PicClass(C, obj["deg"], decode_poly(C.p, obj["u"]), decode_poly(C.p, obj["v"]))


def function(c: CurveFunction) -> dict:
    return {"u": poly(c.u), "v": poly(c.v), "den": poly(c.den)}
