"""Odd-degree hyperelliptic curves y^2 = f(x): points, divisors, functions, L(D)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .errors import (
    BadCharacteristic,
    EvenDegree,
    GenusMismatch,
    GenusTooSmall,
    NotSquarefree,
    PointNotOnCurve,
    ZeroFunction,
)
from .exactfield import FieldElem, Poly, field, poly_gcd, roots_up_to, sqrt_ext
from .linalg import nullspace

DEFAULT_EXTENSION_CAP = 4


@dataclass(frozen=True)
class Point:
    """An affine point (x, y) or, with both coordinates None, the point at infinity."""

    x: Optional[FieldElem] = None
    y: Optional[FieldElem] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def degree(self) -> int:
        """Degree over F_p of the field of definition of the point."""
        if self.is_infinity:
            return 1
        return math.lcm(self.x.degree, self.y.degree)

    def sort_key(self):
        if self.is_infinity:
            return (1,)
        return (0, self.x.sort_key(), self.y.sort_key())

    def __repr__(self):
        return "inf" if self.is_infinity else f"({self.x!r}, {self.y!r})"


INFINITY = Point()


class FormalSum:
    """Immutable finite Z-linear combination of hashable keys with a sort_key()."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        d = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for k, m in items:
            if m:
                d[k] = d.get(k, 0) + m
        self._terms = {k: m for k, m in d.items() if m}
        self._hash = None

    @classmethod
    def single(cls, key, mult=1):
        return cls({key: mult})

    @property
    def degree(self) -> int:
        return sum(self._terms.values())

    def __getitem__(self, key) -> int:
        return self._terms.get(key, 0)

    def items(self):
        return sorted(self._terms.items(), key=lambda km: km[0].sort_key())

    def support(self):
        return sorted(self._terms, key=lambda k: k.sort_key())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self, other):
        self._check(other)
        d = dict(self._terms)
        for k, m in other._terms.items():
            d[k] = d.get(k, 0) + m
        return type(self)(d)

    def __neg__(self):
        return type(self)({k: -m for k, m in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int):
        return type(self)({k: n * m for k, m in self._terms.items()})

    __rmul__ = __mul__

    def is_effective(self) -> bool:
        return all(m > 0 for m in self._terms.values())

    def is_reduced(self) -> bool:
        return all(m == 1 for m in self._terms.values())

    def __le__(self, other) -> bool:
        return (other - self).is_effective()

    def __ge__(self, other) -> bool:
        return (self - other).is_effective()

    def positive_part(self):
        return type(self)({k: m for k, m in self._terms.items() if m > 0})

    def negative_part(self):
        return type(self)({k: -m for k, m in self._terms.items() if m < 0})

    def map_keys(self, fn, cls=None):
        cls = cls or type(self)
        out = {}
        for k, m in self._terms.items():
            nk = fn(k)
            out[nk] = out.get(nk, 0) + m
        return cls(out)

    def __eq__(self, other):
        return type(other) is type(self) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{m}*{k!r}" if m != 1 else repr(k) for k, m in self.items())


class Divisor(FormalSum):
    """Divisor on the base curve X (keys are :class:`Point`)."""

    __slots__ = ()

    @property
    def field_degree(self) -> int:
        n = 1
        for P in self._terms:
            n = math.lcm(n, P.degree)
        return n


@dataclass(frozen=True)
class CurveFunction:
    """The function (u(x) + v(x) y) / den(x) on the curve."""

    u: Poly
    v: Poly
    den: Poly = dc_field(default=None)

    def __post_init__(self):
        if self.den is None:
            object.__setattr__(self, "den", Poly(self.u.p, [1]))

    @classmethod
    def constant(cls, p, c):
        return cls(Poly(p, [c]), Poly(p))

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def scale(self, c):
        return CurveFunction(self.u * c, self.v * c, self.den)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "CurveFunction"):
        if self.den == other.den:
            return CurveFunction(self.u + other.u, self.v + other.v, self.den)
        return CurveFunction(
            self.u * other.den + other.u * self.den,
            self.v * other.den + other.v * self.den,
            self.den * other.den,
        )

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        num = f"({self.u!r}) + ({self.v!r})*y" if not self.v.is_zero() else f"{self.u!r}"
        if self.den.degree == 0 and self.den[0] == 1:
            return num
        return f"[{num}] / ({self.den!r})"


def linear_combination(coeffs, basis):
    """sum(c_i * basis_i) for functions sharing one denominator."""
    p = basis[0].u.p
    u, v = Poly(p), Poly(p)
    for c, b in zip(coeffs, basis):
        u = u + b.u * c
        v = v + b.v * c
    return CurveFunction(u, v, basis[0].den)


class HyperCurve:
    """The curve y^2 = f(x) with deg f = 2g + 1 over F_p.

    ``cap`` bounds the extension degree of any point the library will
    construct; operations needing more raise SearchBoundExceeded.
    """

    def __init__(self, p: int, f: Poly, g: int, cap: int = DEFAULT_EXTENSION_CAP):
        self.p = p
        self.f = f
        self.g = g
        self.cap = cap

    def __repr__(self):
        return f"HyperCurve(y^2 = {self.f!r} over F_{self.p}, g={self.g})"

    def __eq__(self, other):
        return isinstance(other, HyperCurve) and (self.p, self.f, self.g) == (other.p, other.f, other.g)

    def __hash__(self):
        return hash((self.p, self.f, self.g))

    @property
    def F(self):
        return field(self.p, 1)

    # -- points ---------------------------------------------------------

    def contains(self, P: Point) -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == self.f(P.x)

    def point(self, x, y) -> Point:
        F = self.F
        P = Point(x if isinstance(x, FieldElem) else F(x), y if isinstance(y, FieldElem) else F(y))
        if not self.contains(P):
            raise PointNotOnCurve(f"{P!r} is not on {self!r}")
        return P

    def hyperelliptic_involution(self, P: Point) -> Point:
        if not self.contains(P):
            raise PointNotOnCurve(f"{P!r} is not on {self!r}")
        if P.is_infinity:
            return P
        return Point(P.x, -P.y)

    def points_over(self, x0: FieldElem) -> list:
        """The one or two points with x-coordinate x0 (y may need an extension)."""
        fx = self.f(x0)
        if fx.is_zero():
            return [Point(x0, fx)]
        return [Point(x0, y0) for y0 in sqrt_ext(fx, self.cap)]

    def weierstrass_roots(self) -> list:
        return sorted(set(roots_up_to(self.f, self.cap)))

    def weierstrass_points(self) -> list:
        """W_0, ..., W_{2g}: the points (e, 0), in the canonical root order."""
        return [Point(e, self.F(0)) for e in self.weierstrass_roots()]

    def rational_points(self, n: int = 1) -> list:
        """All affine points with both coordinates in F_{p^n}."""
        F = field(self.p, n)
        out = []
        for x0 in F.elements():
            fx = self.f(x0)
            if fx.is_zero():
                out.append(Point(x0, fx))
                continue
            ext = sqrt_ext(fx, 2 * n)
            if all(n % r.degree == 0 for r in ext):
                out.extend(Point(x0, r) for r in ext)
        return sorted(set(out), key=Point.sort_key)

    # -- functions ------------------------------------------------------

    def multiply(self, a: CurveFunction, b: CurveFunction) -> CurveFunction:
        return CurveFunction(
            a.u * b.u + a.v * b.v * self.f,
            a.u * b.v + a.v * b.u,
            a.den * b.den,
        )

    def evaluate(self, c: CurveFunction, P: Point) -> FieldElem:
        if P.is_infinity:
            raise ValueError("evaluate at an affine point")
        d = c.den(P.x)
        if d.is_zero():
            raise ZeroDivisionError(f"denominator of {c!r} vanishes at {P!r}")
        return (c.u(P.x) + c.v(P.x) * P.y) / d

    def _poly_order(self, u: Poly, v: Poly, P: Point) -> int:
        if u.is_zero() and v.is_zero():
            raise ZeroFunction("order of the zero function")
        big = 10**9
        if P.is_infinity:
            du = 2 * u.degree if not u.is_zero() else -big
            dv = 2 * v.degree + 2 * self.g + 1 if not v.is_zero() else -big
            return -max(du, dv)
        x0, y0 = P.x, P.y
        ou = u.multiplicity(x0) if not u.is_zero() else big
        ov = v.multiplicity(x0) if not v.is_zero() else big
        if y0.is_zero():
            return min(2 * ou, 2 * ov + 1)
        m = min(ou, ov)
        lin = Poly(self.p, [-x0, 1]) ** m
        u1, v1 = u // lin, v // lin
        if not (u1(x0) + v1(x0) * y0).is_zero():
            return m
        return m + (u1 * u1 - v1 * v1 * self.f).multiplicity(x0)

    def order_at(self, c: CurveFunction, P: Point) -> int:
        """Valuation of c at P."""
        if c.is_zero():
            raise ZeroFunction("order of the zero function")
        return self._poly_order(c.u, c.v, P) - self._poly_order(c.den, Poly(self.p), P)

    def _poly_divisor(self, u: Poly, v: Poly) -> dict:
        terms = {}
        norm = u * u - v * v * self.f
        for x0 in sorted(set(roots_up_to(norm, self.cap))):
            for P in self.points_over(x0):
                o = self._poly_order(u, v, P)
                if o:
                    terms[P] = o
        terms[INFINITY] = self._poly_order(u, v, INFINITY)
        return terms

    def divisor_of_function(self, c: CurveFunction) -> Divisor:
        """div(c): zeros minus poles, located through the norm u^2 - v^2 f."""
        if c.is_zero():
            raise ZeroFunction("divisor of the zero function")
        num = Divisor(self._poly_divisor(c.u, c.v))
        den = Divisor(self._poly_divisor(c.den, Poly(self.p)))
        return num - den

    def canonical_divisor(self) -> Divisor:
        """div(dx/y) = (2g - 2) * inf on the odd model."""
        return Divisor({INFINITY: 2 * self.g - 2})

    # -- Riemann-Roch spaces ------------------------------------------------

    def _y_series(self, P: Point, order: int) -> list:
        # y as a power series in t = x - x0 at a non-Weierstrass point
        ft = self.f.taylor(P.x)
        F = self.F
        ft = ft + [F(0)] * max(0, order - len(ft))
        ys = [P.y]
        inv2y = (P.y * 2).inverse()
        for k in range(1, order):
            s = ft[k]
            for i in range(1, k):
                s = s - ys[i] * ys[k - i]
            ys.append(s * inv2y)
        return ys

    def rr_basis(self, D: Divisor) -> list:
        """Basis of L(D) = {c : div(c) + D >= 0}.

        Poles allowed at finite points are cleared with a denominator w(x);
        the numerator is then a polynomial function u + v*y whose degrees
        are bounded by the pole order at infinity and whose Taylor
        coefficients at the remaining points give linear conditions.
        """
        p, g = self.p, self.g
        F = self.F
        xs = {}
        for P, n in D.items():
            if P.is_infinity or n <= 0:
                continue
            if P.y.is_zero():
                m = (n + 1) // 2
            else:
                m = max(n, D[Point(P.x, -P.y)])
            xs[P.x] = max(xs.get(P.x, 0), m)
        w = Poly(p, [1])
        div_w = {}
        for x0, m in sorted(xs.items(), key=lambda kv: kv[0].sort_key()):
            w = w * Poly(p, [-x0, 1]) ** m
            for Q in self.points_over(x0):
                div_w[Q] = div_w.get(Q, 0) + (2 * m if Q.y.is_zero() else m)
        div_w[INFINITY] = -2 * w.degree
        E = D - Divisor(div_w)
        N = E[INFINITY]
        if N < 0:
            return []
        du = N // 2
        dv = (N - 2 * g - 1) // 2 if N >= 2 * g + 1 else -1
        nu, nv = du + 1, dv + 1
        ncols = nu + nv
        rows = []
        for P, n in E.items():
            if P.is_infinity or n >= 0:
                continue
            e = -n
            x0 = P.x
            xpow = [F(1)]
            for _ in range(max(nu, nv) + e):
                xpow.append(xpow[-1] * x0)

            def tay(j, i):
                # coefficient of t^i in (x0 + t)^j
                if j < i:
                    return F(0)
                return xpow[j - i] * (math.comb(j, i) % p)

            if P.y.is_zero():
                for i in range((e + 1) // 2):
                    rows.append([tay(j, i) for j in range(nu)] + [F(0)] * nv)
                for i in range(e // 2):
                    rows.append([F(0)] * nu + [tay(j, i) for j in range(nv)])
            else:
                ys = self._y_series(P, e)
                for i in range(e):
                    row = [tay(j, i) for j in range(nu)]
                    for j in range(nv):
                        s = F(0)
                        for l in range(i + 1):
                            s = s + tay(j, l) * ys[i - l]
                        row.append(s)
                    rows.append(row)
        basis = []
        for vec in nullspace(rows, ncols, p):
            basis.append(CurveFunction(Poly(p, vec[:nu]), Poly(p, vec[nu:]), w))
        return basis

    def in_rr_space(self, c: CurveFunction, D: Divisor) -> bool:
        """Whether div(c) + D >= 0, checked only where it can fail.

        Poles of c lie over roots of its denominator and at infinity, so
        it suffices to look there and on the support of D.
        """
        if c.is_zero():
            return True
        places = set(D.support()) | {INFINITY}
        for x0 in set(roots_up_to(c.den, self.cap)) if c.den.degree > 0 else ():
            places.update(self.points_over(x0))
        return all(self.order_at(c, P) + D[P] >= 0 for P in places)

    def rr_dimension(self, D: Divisor) -> int:
        return len(self.rr_basis(D))


def validate_curve(f, g: int, p: Optional[int] = None, cap: int = DEFAULT_EXTENSION_CAP) -> HyperCurve:
    """Check the model y^2 = f(x) and return the curve.

    f is a Poly or a list of integer coefficients (lowest first, needs p).
    """
    if not isinstance(f, Poly):
        if p is None:
            raise ValueError("p is required when f is given as integers")
        f = Poly(p, f)
    p = f.p
    if p < 5:
        raise BadCharacteristic(f"characteristic {p} is not an odd prime >= 5")
    if f.degree % 2 == 0:
        raise EvenDegree(f"deg f = {f.degree} is even")
    actual = (f.degree - 1) // 2
    if actual < 2:
        raise GenusTooSmall(f"deg f = {f.degree} gives genus {actual} < 2")
    if g != actual:
        raise GenusMismatch(f"claimed genus {g} but deg f = {f.degree} gives genus {actual}")
    if poly_gcd(f, f.derivative()).degree > 0:
        raise NotSquarefree(f"{f!r} has a repeated factor")
    return HyperCurve(p, f, g, cap)
