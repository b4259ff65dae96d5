"""Exact arithmetic over F_p and its small extensions F_{p^n}.

Elements of F_{p^n} are encoded as integers ``sum c_i p^i`` where
``(c_0, ..., c_{n-1})`` are coordinates in the basis ``1, x, ..., x^{n-1}``
modulo a fixed primitive polynomial.  The moduli are chosen compatibly
(every F_{p^d} with d | n sits inside F_{p^n} through the norm-power of the
generator), so elements of different extensions can be mixed freely:
operands are lifted to the smallest common field and every result is
stored in the smallest field that contains it.  Two equal elements
therefore always have the same representation.
"""

from __future__ import annotations

import functools
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import BothZero, FieldMismatch, SearchBoundExceeded, ZeroPolynomial

# Largest field we build tables for or scan exhaustively.
MAX_FIELD_SIZE = 10**6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- arithmetic in F_p[x] on plain coefficient lists, used only to pick moduli


def _mulmod(a, b, mod, p):
    n = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n + 1):
                prod[k - n + j] = (prod[k - n + j] - c * mod[j]) % p
    out = prod[:n] + [0] * max(0, n - len(prod))
    return out


def _powmod_x(e, mod, p):
    n = len(mod) - 1
    result = [1] + [0] * (n - 1)
    base = [0, 1] + [0] * (n - 2) if n >= 2 else [(-mod[0]) % p]
    while e:
        if e & 1:
            result = _mulmod(result, base, mod, p)
        base = _mulmod(base, base, mod, p)
        e >>= 1
    return result


def _eval_at_residue(poly, elem, mod, p):
    # Horner evaluation of an F_p-polynomial at an element of F_p[x]/mod
    n = len(mod) - 1
    acc = [0] * n
    for c in reversed(poly):
        acc = _mulmod(acc, elem, mod, p)
        acc[0] = (acc[0] + c) % p
    return acc


@functools.lru_cache(maxsize=None)
def _modulus(p: int, n: int) -> tuple[int, ...]:
    """Monic primitive polynomial of degree n, compatible with all smaller moduli.

    Candidates are scanned in a fixed order, so the choice is reproducible.
    """
    q = p**n
    if n == 1:
        for g in range(2 if p > 2 else 1, p):
            if all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1)):
                return ((-g) % p, 1)
        return (p - 1, 1)
    factors = prime_factors(q - 1)
    subs = [(d, _modulus(p, d)) for d in _divisors(n) if d < n]
    for m in range(p**n):
        coeffs = []
        t = m
        for _ in range(n):
            t, c = divmod(t, p)
            coeffs.append(c)
        if coeffs[0] == 0:
            continue
        mod = coeffs + [1]
        one = [1] + [0] * (n - 1)
        if _powmod_x(q - 1, mod, p) != one:
            continue
        if any(_powmod_x((q - 1) // r, mod, p) == one for r in factors):
            continue
        ok = True
        for d, sub in subs:
            elem = _powmod_x((q - 1) // (p**d - 1), mod, p)
            if any(_eval_at_residue(list(sub), elem, mod, p)):
                ok = False
                break
        if ok:
            return tuple(mod)
    raise RuntimeError(f"no compatible primitive polynomial of degree {n} over F_{p}")


class GF:
    """The finite field with p**n elements (use :func:`field` to obtain one)."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = _modulus(p, n)
        self._exp = None
        self._log = None
        self._np = None

    def __repr__(self):
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field, (self.p, self.n))

    # tables are built lazily: prime-field arithmetic never needs them
    def _tables(self):
        if self._exp is None:
            p, n, q = self.p, self.n, self.q
            exp = [0] * (q - 1)
            log = [-1] * q
            if n == 1:
                g = (-self.modulus[0]) % p
                v = 1
                for i in range(q - 1):
                    exp[i] = v
                    log[v] = i
                    v = v * g % p
            else:
                mod = self.modulus
                coords = [1] + [0] * (n - 1)
                pows = [p**i for i in range(n)]
                for i in range(q - 1):
                    v = sum(c * pw for c, pw in zip(coords, pows))
                    exp[i] = v
                    log[v] = i
                    top = coords[-1]
                    coords = [0] + coords[:-1]
                    if top:
                        coords = [(c - top * mod[j]) % p for j, c in enumerate(coords)]
            self._exp, self._log = exp, log
        return self._exp, self._log

    def numpy_tables(self):
        if self._np is None:
            exp, log = self._tables()
            self._np = (np.array(exp, dtype=np.int64), np.array(log, dtype=np.int64))
        return self._np

    @property
    def generator(self) -> "FieldElem":
        exp, _ = self._tables()
        return self.element(exp[1 % (self.q - 1)])

    # -- raw operations on encodings -------------------------------------

    def _add(self, a, b):
        p = self.p
        if self.n == 1:
            return (a + b) % p
        r, pw = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            r += ((da + db) % p) * pw
            pw *= p
        return r

    def _neg(self, a):
        p = self.p
        if self.n == 1:
            return (-a) % p
        r, pw = 0, 1
        while a:
            a, da = divmod(a, p)
            r += ((-da) % p) * pw
            pw *= p
        return r

    def _mul(self, a, b):
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables()
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def _inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        exp, log = self._tables()
        return exp[(-log[a]) % (self.q - 1)]

    def coords(self, a: int) -> list[int]:
        out = []
        for _ in range(self.n):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    # -- embedding and canonical form ---------------------------------------

    def element(self, v: int) -> "FieldElem":
        """Wrap the encoding v of an element of this field, in canonical form."""
        p = self.p
        if self.n == 1:
            return FieldElem(self, v % p)
        if v < p:
            return FieldElem(field(p, 1), v)
        _, log = self._tables()
        L = log[v]
        for d in _divisors(self.n)[1:-1]:
            e = (self.q - 1) // (p**d - 1)
            if L % e == 0:
                sub = field(p, d)
                return FieldElem(sub, sub._tables()[0][L // e])
        return FieldElem(self, v)

    def lift(self, a: "FieldElem") -> int:
        """Encoding of a (an element of some subfield) inside this field."""
        src = a.field
        if src is self or a.value < self.p:
            return a.value
        if src.p != self.p or self.n % src.n:
            raise FieldMismatch(f"{src} is not a subfield of {self}")
        e = (self.q - 1) // (src.q - 1)
        exp, _ = self._tables()
        return exp[src._tables()[1][a.value] * e % (self.q - 1)]

    def __call__(self, v) -> "FieldElem":
        if isinstance(v, FieldElem):
            return self.element(self.lift(v))
        if isinstance(v, (list, tuple)):
            enc = sum((int(c) % self.p) * self.p**i for i, c in enumerate(v))
            return self.element(enc)
        return field(self.p, 1).element(int(v) % self.p)

    def elements(self) -> Iterable["FieldElem"]:
        for v in range(self.q):
            yield self.element(v)

    def contains(self, a: "FieldElem") -> bool:
        return a.field.p == self.p and self.n % a.field.n == 0


@functools.lru_cache(maxsize=None)
def field(p: int, n: int = 1) -> GF:
    """The unique cached instance of F_{p^n}."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be positive")
    if p**n > MAX_FIELD_SIZE:
        raise SearchBoundExceeded(f"F_{p}^{n} exceeds the field size bound {MAX_FIELD_SIZE}")
    return GF(p, n)


def common_field(F1: GF, F2: GF) -> GF:
    if F1 is F2:
        return F1
    if F1.p != F2.p:
        raise FieldMismatch(f"characteristics differ: {F1} vs {F2}")
    return field(F1.p, F1.n * F2.n // math.gcd(F1.n, F2.n))


class FieldElem:
    """An element of some F_{p^n}, always stored in its smallest field."""

    __slots__ = ("field", "value")

    def __init__(self, F: GF, value: int):
        self.field = F
        self.value = value

    @property
    def p(self):
        return self.field.p

    @property
    def degree(self):
        """Degree over F_p of the smallest field containing this element."""
        return self.field.n

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            return other
        if isinstance(other, int):
            return FieldElem(field(self.field.p, 1), other % self.field.p)
        return None

    def _pair(self, other):
        F = common_field(self.field, other.field)
        return F, F.lift(self), F.lift(other)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        F, a, b = self._pair(other)
        return F.element(F._add(a, b))

    __radd__ = __add__

    def __neg__(self):
        return self.field.element(self.field._neg(self.value))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        F, a, b = self._pair(other)
        return F.element(F._add(a, F._neg(b)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        F, a, b = self._pair(other)
        return F.element(F._mul(a, b))

    __rmul__ = __mul__

    def inverse(self):
        return self.field.element(self.field._inv(self.value))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        F = self.field
        if self.value == 0:
            return F.element(1 if e == 0 else 0)
        if F.n == 1:
            return F.element(pow(self.value, e, F.p))
        exp, log = F._tables()
        return F.element(exp[log[self.value] * e % (F.q - 1)])

    def __eq__(self, other):
        if isinstance(other, int):
            return self.field.n == 1 and self.value == other % self.field.p
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field is other.field and self.value == other.value

    def __hash__(self):
        return hash((self.field.p, self.field.n, self.value))

    def __bool__(self):
        return self.value != 0

    def is_zero(self):
        return self.value == 0

    def sort_key(self):
        return (self.field.n, self.value)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def coords(self) -> list[int]:
        return self.field.coords(self.value)

    def frobenius(self, times: int = 1):
        return self ** (self.field.p**times)

    def __int__(self):
        if self.field.n != 1:
            raise TypeError(f"{self!r} is not in the prime field")
        return self.value

    def __repr__(self):
        if self.field.n == 1:
            return str(self.value)
        return f"[{','.join(map(str, self.coords()))}]@{self.field.p}^{self.field.n}"

    def __reduce__(self):
        return (_rebuild_elem, (self.field.p, self.field.n, self.value))


def _rebuild_elem(p, n, value):
    return FieldElem(field(p, n), value)


def is_square(a: FieldElem) -> bool:
    if a.value == 0:
        return True
    F = a.field
    if F.n == 1:
        return pow(a.value, (F.p - 1) // 2, F.p) == 1
    _, log = F._tables()
    return log[a.value] % 2 == 0


def sqrt_fq(a: FieldElem):
    """Both square roots of a inside a's own field, or None if a is a non-square.

    The pair is sorted; the square root of 0 is the single element (0,).
    """
    if a.value == 0:
        return (a,)
    if not is_square(a):
        return None
    return _sqrt_raw(a.field, a.value)


def _sqrt_raw(F: GF, v: int):
    # v is the encoding of a nonzero square of F (not necessarily minimal)
    exp, log = F._tables()
    if log[v] % 2:
        return None
    r = F.element(exp[log[v] // 2])
    return tuple(sorted((r, -r)))


def sqrt_ext(a: FieldElem, max_degree: int):
    """Square roots of a in the smallest field (degree <= max_degree) holding them."""
    roots = sqrt_fq(a)
    if roots is not None:
        return roots
    n = 2 * a.field.n
    if n > max_degree:
        raise SearchBoundExceeded(f"sqrt of {a!r} needs F_{a.p}^{n}, above the cap {max_degree}")
    F = field(a.p, n)
    return _sqrt_raw(F, F.lift(a))


class Poly:
    """Univariate polynomial with FieldElem coefficients, lowest degree first."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence = ()):
        self.p = p
        F = field(p, 1)
        cs = [c if isinstance(c, FieldElem) else F.element(int(c) % p) for c in coeffs]
        while cs and cs[-1].value == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, p):
        return cls(p, [0, 1])

    @classmethod
    def const(cls, p, c):
        return cls(p, [c])

    @classmethod
    def from_roots(cls, p, roots):
        out = cls(p, [1])
        for r in roots:
            out = out * cls(p, [-r, 1])
        return out

    @property
    def degree(self) -> int:
        """Degree; -1 stands for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1]

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return field(self.p, 1).element(0)

    def _wrap(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, FieldElem)):
            return Poly(self.p, [other])
        return None

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.p, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.p)
        out = [None] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai.value == 0:
                continue
            for j, bj in enumerate(b):
                t = ai * bj
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = field(self.p, 1).element(0)
        return Poly(self.p, [c if c is not None else zero for c in out])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly(self.p, [1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = self._wrap(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = other.lc().inverse()
        zero = field(self.p, 1).element(0)
        quot = [zero] * max(0, len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c.value == 0:
                continue
            t = c * inv
            quot[k - db] = t
            for j, bj in enumerate(other.coeffs):
                rem[k - db + j] = rem[k - db + j] - t * bj
        return Poly(self.p, quot), Poly(self.p, rem[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, z):
        acc = field(self.p, 1).element(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __eq__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def monic(self):
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return Poly(self.p, [c * inv for c in self.coeffs])

    def derivative(self):
        return Poly(self.p, [c * i for i, c in enumerate(self.coeffs)][1:])

    def multiplicity(self, r: FieldElem) -> int:
        """Order of vanishing at x = r."""
        if self.is_zero():
            raise ZeroPolynomial("multiplicity in the zero polynomial")
        m, q = 0, self
        lin = Poly(self.p, [-r, 1])
        while True:
            quo, rem = divmod(q, lin)
            if not rem.is_zero():
                return m
            m, q = m + 1, quo

    def taylor(self, x0: FieldElem) -> list:
        """Coefficients of self(x0 + t) in t, lowest first."""
        out = []
        q = self
        lin = Poly(self.p, [-x0, 1])
        while not q.is_zero():
            q, r = divmod(q, lin)
            out.append(r[0])
        return out

    def field_degree(self) -> int:
        """Degree over F_p of the smallest field holding every coefficient."""
        n = 1
        for c in self.coeffs:
            n = n * c.field.n // math.gcd(n, c.field.n)
        return n

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.value == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = repr(c)
            if mono and cs == "1":
                terms.append(mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(reversed(terms))


def poly_xgcd(a: Poly, b: Poly):
    """(d, s, t) with d = s*a + t*b and d monic (or zero when a = b = 0)."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = Poly(p, [1]), Poly(p)
    t0, t1 = Poly(p), Poly(p, [1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = r0.lc().inverse()
    return r0 * inv, s0 * inv, t0 * inv


def poly_gcd(q1: Poly, q2: Poly) -> Poly:
    """Monic greatest common divisor."""
    if q1.is_zero() and q2.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    return poly_xgcd(q1, q2)[0]


def _eval_everywhere(F: GF, q: Poly) -> np.ndarray:
    """Values of q at every element of F, indexed by encoding."""
    p, n, size = F.p, F.n, F.q
    z = np.arange(size, dtype=np.int64)
    cs = [F.lift(c) for c in q.coeffs]
    if n == 1:
        acc = np.zeros(size, dtype=np.int64)
        for c in reversed(cs):
            acc = (acc * z + c) % p
        return acc
    exp, log = F.numpy_tables()
    pows = [p**i for i in range(n)]
    acc = np.zeros(size, dtype=np.int64)
    for c in reversed(cs):
        nz = (acc != 0) & (z != 0)
        prod = np.zeros(size, dtype=np.int64)
        prod[nz] = exp[(log[acc[nz]] + log[z[nz]]) % (size - 1)]
        out = np.zeros(size, dtype=np.int64)
        for pw in pows:
            out += (((prod // pw) % p + (c // pw) % p) % p) * pw
        acc = out
    return acc


def poly_roots(q: Poly, k: int = 1, bound: int = MAX_FIELD_SIZE) -> list:
    """All roots of q in F_{p^k}, repeated according to multiplicity, sorted.

    Found by evaluating q at every element of F_{p^k}.
    """
    if q.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    if q.p**k > bound:
        raise SearchBoundExceeded(f"F_{q.p}^{k} has more than {bound} elements")
    F = field(q.p, k)
    if k % q.field_degree():
        raise FieldMismatch(f"coefficients of {q!r} do not lie in {F}")
    vals = _eval_everywhere(F, q)
    out = []
    for v in np.nonzero(vals == 0)[0]:
        r = F.element(int(v))
        out.extend([r] * q.multiplicity(r))
    return sorted(out)


def roots_up_to(q: Poly, cap: int, bound: int = MAX_FIELD_SIZE) -> list:
    """Every root of q over the algebraic closure, provided each has degree <= cap.

    Extensions are scanned in increasing degree on the deflated polynomial;
    raises SearchBoundExceeded when some root lies beyond the cap.
    """
    if q.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    base = q.field_degree()
    out = []
    rest = q
    n = base
    while rest.degree > 0 and n <= cap:
        if q.p**n > bound:
            break
        found = set(poly_roots(rest, n, bound))
        for r in sorted(found):
            m = rest.multiplicity(r)
            out.extend([r] * m)
            rest = rest // (Poly(q.p, [-r, 1]) ** m)
        n += base
    if rest.degree > 0:
        raise SearchBoundExceeded(
            f"{rest.degree} roots of {q!r} lie outside F_{q.p}^n for n <= {cap}"
        )
    return sorted(out)
