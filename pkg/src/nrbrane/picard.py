"""Divisor classes on the curve: Mumford pairs, Cantor's algorithm, 2-torsion, effectivity."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from dataclasses import dataclass

from .curve import INFINITY, Divisor, HyperCurve, Point, linear_combination
from .errors import CurveMismatch, RootsNotRational, SearchBoundExceeded
from .exactfield import Poly, poly_xgcd, roots_up_to


@dataclass(frozen=True)
class PicClass:
    """The class [A - deg(A) inf] + n inf, with A given by the reduced pair (u, v).

    u is monic of degree <= g, deg v < deg u and u divides v^2 - f.
    """

    curve: HyperCurve
    n: int
    u: Poly
    v: Poly

    @property
    def degree(self) -> int:
        return self.n

    def is_trivial(self) -> bool:
        """Whether the class is n * [inf] (the trivial class when n = 0)."""
        return self.u.degree == 0

    def __add__(self, other):
        return pic_add(self, other)

    def __neg__(self):
        return pic_neg(self)

    def __sub__(self, other):
        return pic_add(self, pic_neg(other))

    def __mul__(self, k: int):
        return pic_mul(self, k)

    __rmul__ = __mul__

    def __repr__(self):
        return f"PicClass(deg={self.n}, u={self.u!r}, v={self.v!r})"


def trivial_class(C: HyperCurve, n: int = 0) -> PicClass:
    return PicClass(C, n, Poly(C.p, [1]), Poly(C.p))


def _compose(C, u1, v1, u2, v2):
    f = C.f
    d1, e1, e2 = poly_xgcd(u1, u2)
    d, c1, c2 = poly_xgcd(d1, v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2) // (d * d)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)) // d) % u
    return u, v


def _reduce(C, u, v):
    while u.degree > C.g:
        u = (C.f - v * v) // u
        v = (-v) % u
    u = u.monic()
    return u, v % u


def _make(C, n, u, v):
    u, v = _reduce(C, u, v)
    return PicClass(C, n, u, v)


def pic_add(c1: PicClass, c2: PicClass) -> PicClass:
    if c1.curve != c2.curve:
        raise CurveMismatch("classes live on different curves")
    C = c1.curve
    if c1.u.degree == 0:
        return PicClass(C, c1.n + c2.n, c2.u, c2.v)
    if c2.u.degree == 0:
        return PicClass(C, c1.n + c2.n, c1.u, c1.v)
    u, v = _compose(C, c1.u, c1.v, c2.u, c2.v)
    return _make(C, c1.n + c2.n, u, v)


def pic_neg(c: PicClass) -> PicClass:
    return PicClass(c.curve, -c.n, c.u, (-c.v) % c.u)


def pic_mul(c: PicClass, k: int) -> PicClass:
    if k < 0:
        return pic_mul(pic_neg(c), -k)
    acc = trivial_class(c.curve)
    base = c
    while k:
        if k & 1:
            acc = pic_add(acc, base)
        base = pic_add(base, base)
        k >>= 1
    return acc


def class_of_point(C: HyperCurve, P: Point) -> PicClass:
    """[P] as a class of degree 1."""
    if P.is_infinity:
        return trivial_class(C, 1)
    return _make(C, 1, Poly(C.p, [-P.x, 1]), Poly(C.p, [P.y]))


@lru_cache(maxsize=4096)
def class_of_divisor(C: HyperCurve, D: Divisor) -> PicClass:
    acc = trivial_class(C)
    for P, m in D.items():
        if P.is_infinity:
            continue
        pt = PicClass(C, 0, Poly(C.p, [-P.x, 1]), Poly(C.p, [P.y]))
        acc = pic_add(acc, pt if m == 1 else pic_mul(pt, m))
    return PicClass(C, D.degree, acc.u, acc.v)


def representative_divisor(c: PicClass) -> Divisor:
    """The divisor A + (n - deg A) inf read off the Mumford pair."""
    C = c.curve
    terms = {}
    for x0 in roots_up_to(c.u, C.cap):
        P = Point(x0, c.v(x0))
        terms[P] = terms.get(P, 0) + 1
    return Divisor(terms) + Divisor({INFINITY: c.n - c.u.degree})


def is_effective_class(c: PicClass, rng=None):
    """(True, effective divisor in the class) or (False, None).

    Decided by whether L(representative) is nonzero.  The witness is
    div(F) + D for a basis element F; when a zero of F lies outside the
    supported extensions, other elements of L(D) are tried.
    """
    C = c.curve
    if c.n < 0:
        return False, None
    D = representative_divisor(c)
    basis = C.rr_basis(D)
    if not basis:
        return False, None
    candidates = list(basis)
    rng = rng or random.Random(0)
    for _ in range(50):
        coeffs = [C.F(rng.randrange(C.p)) for _ in basis]
        if any(coeffs):
            candidates.append(linear_combination(coeffs, basis))
    for F in candidates:
        try:
            W = C.divisor_of_function(F) + D
        except SearchBoundExceeded:
            continue
        return True, W
    raise SearchBoundExceeded("no element of L(D) has all zeros inside the extension cap")


# -- 2-torsion ------------------------------------------------------------


def _rational_roots(C: HyperCurve):
    roots = C.weierstrass_roots()
    if len(roots) != 2 * C.g + 1 or any(r.degree != 1 for r in roots):
        raise RootsNotRational("f does not split into linear factors over F_p")
    return roots


def two_torsion_divisor(C: HyperCurve, S) -> Divisor:
    """sum_{i in S} W_i - |S| inf."""
    W = C.weierstrass_points()
    return Divisor({W[i]: 1 for i in S}) + Divisor({INFINITY: -len(S)})


def two_torsion_class(C: HyperCurve, S) -> PicClass:
    roots = _rational_roots(C)
    u = Poly(C.p, [1])
    for i in S:
        u = u * Poly(C.p, [-roots[i], 1])
    return _make(C, 0, u, Poly(C.p))


def canonical_subset(c: PicClass) -> tuple:
    """The unique even-size index set S with [sum_S W_i - |S| inf] = c."""
    C = c.curve
    roots = _rational_roots(C)
    if c.n != 0 or not c.v.is_zero():
        raise ValueError(f"{c!r} is not a 2-torsion class")
    A = {i for i, e in enumerate(roots) if c.u(e).is_zero()}
    if len(A) != c.u.degree:
        raise ValueError(f"{c!r} is not a 2-torsion class")
    if len(A) % 2:
        A = set(range(len(roots))) - A
    return tuple(sorted(A))


def enumerate_two_torsion(C: HyperCurve) -> list:
    """All 2^{2g} classes of order dividing 2, indexed by even subsets."""
    roots = _rational_roots(C)
    out = []
    idx = range(len(roots))
    for k in range(0, len(roots) + 1, 2):
        for S in itertools.combinations(idx, k):
            out.append(two_torsion_class(C, S))
    return out


def random_class(C: HyperCurve, rng: random.Random, n: int = 0) -> PicClass:
    """Class of a random divisor of rational points, shifted to degree n."""
    pts = C.rational_points()
    D = Divisor({rng.choice(pts): rng.randint(-2, 2) for _ in range(C.g + 1)})
    c = class_of_divisor(C, D)
    return PicClass(C, n, c.u, c.v)
