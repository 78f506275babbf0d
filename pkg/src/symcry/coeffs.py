"""Exact arithmetic in Q[v, v^-1] and Q(v).

Two value types live here:

* :class:`LaurentPoly` -- finitely supported ``{exponent: coefficient}``.
* :class:`RationalFunction` -- ``v**ordv * num(v) / den(v)`` with
  ``num(0) != 0``, ``den(0) != 0``, ``den`` monic and ``gcd(num, den) = 1``.

Because the v-adic valuation is stored explicitly, :meth:`RationalFunction.ord`
is O(1).  Everything is exact; coefficients are :class:`fractions.Fraction`
(or plain ``int``, which compares and hashes identically).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "RF",
    "V",
    "ONE",
    "ZERO",
    "bar",
    "ord",
    "qint",
    "qfact",
    "qbinom",
    "qint_rf",
    "qfact_rf",
    "qbinom_rf",
    "in_one_plus_vA0",
    "monomial",
]

# ---------------------------------------------------------------------------
# dense univariate polynomials over Q: tuples, lowest degree first, no
# trailing zeros; () is the zero polynomial


def _trim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return tuple(p[:n])


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = list(p)
    for k, c in enumerate(q):
        r[k] += c
    return _trim(r)


def _psub(p, q):
    r = list(p) + [0] * max(0, len(q) - len(p))
    for k, c in enumerate(q):
        r[k] -= c
    return _trim(r)


def _pmul(p, q):
    if not p or not q:
        return ()
    if len(p) == 1:
        c = p[0]
        return tuple(c * x for x in q) if c != 1 else q
    if len(q) == 1:
        c = q[0]
        return tuple(c * x for x in p) if c != 1 else p
    r = [0] * (len(p) + len(q) - 1)
    for a, x in enumerate(p):
        if x:
            for b, y in enumerate(q):
                r[a + b] += x * y
    return tuple(r)


def _pscale(p, c):
    if c == 1:
        return p
    return tuple(c * x for x in p)


def _pdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lc = q[-1]
    if len(r) - 1 < dq:
        return (), _trim(r)
    quot = [0] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq]
        if c:
            if isinstance(c, int) and isinstance(lc, int) and c % lc == 0:
                c //= lc
            else:
                c = Fraction(c) / lc
            quot[k] = c
            for t in range(dq + 1):
                r[k + t] -= c * q[t]
    return _trim(quot), _trim(r[:dq])


def _pmonic(p):
    lc = p[-1]
    if lc == 1:
        return p
    return tuple(Fraction(x) / lc for x in p)


def _pgcd(p, q):
    """Monic gcd over Q."""
    while q:
        _, r = _pdivmod(p, q)
        p, q = q, r
    if not p:
        return ()
    return _pmonic(p)


def _pexact_div(p, q):
    quot, rem = _pdivmod(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quot


def _low_zeros(p):
    k = 0
    while k < len(p) and not p[k]:
        k += 1
    return k


def _fmt_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _parse_coeff(s):
    f = Fraction(s)
    return f.numerator if f.denominator == 1 else f


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Element of Q[v, v^-1], stored as ``{exponent: coefficient}``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, Rational):
            terms = {0: terms}
        clean = {}
        for e, c in dict(terms).items():
            if c:
                clean[int(e)] = c
        self._terms = clean
        self._hash = None

    @property
    def terms(self):
        return dict(self._terms)

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    # structure -----------------------------------------------------------
    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = LaurentPoly(other)
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, RationalFunction):
            return RationalFunction.from_laurent(self) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def coeff(self, e):
        return self._terms.get(e, 0)

    def ord(self):
        return min(self._terms) if self._terms else math.inf

    def degree(self):
        return max(self._terms) if self._terms else -math.inf

    # arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, Rational):
            return LaurentPoly(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = dict(self._terms)
        for e, c in o._terms.items():
            r[e] = r.get(e, 0) + c
        return LaurentPoly(r)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                r[e1 + e2] = r.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(r)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        r = LaurentPoly(1)
        for _ in range(n):
            r = r * self
        return r

    def bar(self):
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def _as_poly(self):
        """(shift, poly) with self = v**shift * poly."""
        if not self._terms:
            return 0, ()
        lo, hi = min(self._terms), max(self._terms)
        return lo, tuple(self._terms.get(e, 0) for e in range(lo, hi + 1))

    def exact_div(self, other):
        """Quotient in Q[v, v^-1]; raises ArithmeticError if not exact."""
        s1, p1 = self._as_poly()
        s2, p2 = other._as_poly()
        if not p2:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        q = _pexact_div(p1, p2)
        return LaurentPoly({s1 - s2 + k: c for k, c in enumerate(q)})

    def is_integral(self):
        return all(Fraction(c).denominator == 1 for c in self._terms.values())

    def evaluate(self, x):
        return sum(Fraction(c) * Fraction(x) ** e for e, c in self._terms.items())

    # io ------------------------------------------------------------------
    def to_json(self):
        return {str(e): _fmt_coeff(c) for e, c in sorted(self._terms.items())}

    @classmethod
    def from_json(cls, data):
        return cls({int(e): _parse_coeff(c) for e, c in data.items()})

    def __repr__(self):
        return f"LaurentPoly({_format_terms(sorted(self._terms.items()))})"

    def __str__(self):
        return _format_terms(sorted(self._terms.items()))


def _format_terms(items):
    if not items:
        return "0"
    out = []
    for e, c in items:
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = _fmt_coeff(a)
        else:
            mono = "v" if e == 1 else f"v^{e}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------


class RationalFunction:
    """Element of Q(v) in canonical v-adic form.

    ``value = v**ordv * num(v) / den(v)``; zero is ``ordv=0, num=(), den=(1,)``.
    """

    __slots__ = ("ordv", "num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, RationalFunction):
            self.ordv, self.num, self.den = value.ordv, value.num, value.den
        elif isinstance(value, LaurentPoly):
            s, p = value._as_poly()
            k = _low_zeros(p)
            self.ordv, self.num, self.den = (s + k, p[k:], (1,)) if p else (0, (), (1,))
        elif isinstance(value, Rational):
            self.ordv, self.num, self.den = (0, (value,), (1,)) if value else (0, (), (1,))
        else:
            raise TypeError(f"cannot build a rational function from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _raw(cls, ordv, num, den):
        self = object.__new__(cls)
        self.ordv, self.num, self.den, self._hash = ordv, num, den, None
        return self

    @classmethod
    def _make(cls, ordv, num, den):
        """Normalize an arbitrary triple into canonical form."""
        num = _trim(num)
        if not num:
            return ZERO
        den = _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        k = _low_zeros(num)
        if k:
            ordv += k
            num = num[k:]
        k = _low_zeros(den)
        if k:
            ordv -= k
            den = den[k:]
        if len(den) > 1:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pexact_div(num, g)
                den = _pexact_div(den, g)
        lc = den[-1]
        if lc != 1:
            num = tuple(Fraction(x) / lc for x in num)
            den = tuple(Fraction(x) / lc for x in den)
        return cls._raw(ordv, num, den)

    @classmethod
    def from_laurent(cls, lp):
        return cls(lp)

    @classmethod
    def from_polys(cls, num, den=(1,), shift=0):
        """Build ``v**shift * num/den`` from coefficient sequences (lowest first)."""
        return cls._make(shift, tuple(num), tuple(den))

    # predicates ----------------------------------------------------------
    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self):
        return self.den == (1,)

    def is_integral_laurent(self):
        return self.den == (1,) and all(Fraction(c).denominator == 1 for c in self.num)

    def is_one(self):
        return self.ordv == 0 and self.num == (1,) and self.den == (1,)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            if isinstance(other, (Rational, LaurentPoly)):
                other = RationalFunction(other)
            else:
                return NotImplemented
        return self.ordv == other.ordv and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ordv, self.num, self.den))
        return self._hash

    # valuations ----------------------------------------------------------
    def ord(self):
        """v-adic valuation; ``math.inf`` for zero."""
        return self.ordv if self.num else math.inf

    def ord_top(self):
        """Largest n with f in v^n A_infinity (the degree at v = infinity)."""
        if not self.num:
            return -math.inf
        return self.ordv + len(self.num) - len(self.den)

    def value_at_zero(self):
        """Residue modulo v A_0; only defined on A_0."""
        if not self.num or self.ordv > 0:
            return Fraction(0)
        if self.ordv < 0:
            raise ValueError(f"{self} is not regular at v=0")
        return Fraction(self.num[0]) / self.den[0]

    def series(self, lo, hi):
        """Coefficients of v^lo .. v^hi of the Laurent expansion at v = 0."""
        out = [Fraction(0)] * (hi - lo + 1)
        if not self.num or hi < self.ordv:
            return out
        n = hi - self.ordv + 1
        num, den = self.num, self.den
        d0 = Fraction(den[0])
        s = []
        for k in range(n):
            c = Fraction(num[k]) if k < len(num) else Fraction(0)
            for t in range(1, min(k, len(den) - 1) + 1):
                c -= den[t] * s[k - t]
            s.append(c / d0)
        for k, c in enumerate(s):
            e = self.ordv + k
            if lo <= e <= hi:
                out[e - lo] = c
        return out

    # arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, (Rational, LaurentPoly)):
            return RationalFunction(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num:
            return o
        if not o.num:
            return self
        m = min(self.ordv, o.ordv)
        a = (0,) * (self.ordv - m) + self.num
        b = (0,) * (o.ordv - m) + o.num
        if self.den == o.den:
            num = _padd(a, b)
            if self.den == (1,):
                if not num:
                    return ZERO
                k = _low_zeros(num)
                return RationalFunction._raw(m + k, num[k:], (1,))
            return RationalFunction._make(m, num, self.den)
        num = _padd(_pmul(a, o.den), _pmul(b, self.den))
        return RationalFunction._make(m, num, _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        if not self.num:
            return self
        return RationalFunction._raw(self.ordv, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other or not self.num:
                return ZERO
            return RationalFunction._raw(self.ordv, _pscale(self.num, other), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return ZERO
        ordv = self.ordv + o.ordv
        if self.den == (1,) and o.den == (1,):
            return RationalFunction._raw(ordv, _pmul(self.num, o.num), (1,))
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if len(d2) > 1 and len(n1) > 1:
            g = _pgcd(n1, d2)
            if len(g) > 1:
                n1, d2 = _pexact_div(n1, g), _pexact_div(d2, g)
        if len(d1) > 1 and len(n2) > 1:
            g = _pgcd(n2, d1)
            if len(g) > 1:
                n2, d1 = _pexact_div(n2, g), _pexact_div(d1, g)
        num, den = _pmul(n1, n2), _pmul(d1, d2)
        lc = den[-1]
        if lc != 1:
            num = tuple(Fraction(x) / lc for x in num)
            den = tuple(Fraction(x) / lc for x in den)
        return RationalFunction._raw(ordv, num, den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(v)")
        lc = self.num[-1]
        den = self.num if lc == 1 else tuple(Fraction(x) / lc for x in self.num)
        num = self.den if lc == 1 else tuple(Fraction(x) / lc for x in self.den)
        return RationalFunction._raw(-self.ordv, num, den)

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError("division by zero")
            if not self.num:
                return ZERO
            return RationalFunction._raw(self.ordv, tuple(Fraction(c) / other for c in self.num), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = ONE
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def bar(self):
        """Substitute v -> v^-1."""
        if not self.num:
            return self
        num = self.num[::-1]
        den = self.den[::-1]
        ordv = -self.ordv - (len(self.num) - 1) + (len(self.den) - 1)
        lc = den[-1]
        if lc != 1:
            num = tuple(Fraction(x) / lc for x in num)
            den = tuple(Fraction(x) / lc for x in den)
        return RationalFunction._raw(ordv, num, den)

    def to_laurent(self):
        if self.den != (1,):
            raise ValueError(f"{self} is not a Laurent polynomial")
        return LaurentPoly({self.ordv + k: c for k, c in enumerate(self.num)})

    def evaluate(self, x):
        x = Fraction(x)
        n = sum(Fraction(c) * x**k for k, c in enumerate(self.num))
        d = sum(Fraction(c) * x**k for k, c in enumerate(self.den))
        return x**self.ordv * n / d

    # io ------------------------------------------------------------------
    def to_json(self):
        return {
            "ord": self.ordv,
            "num": {str(k): _fmt_coeff(c) for k, c in enumerate(self.num) if c},
            "den": {str(k): _fmt_coeff(c) for k, c in enumerate(self.den) if c},
        }

    @classmethod
    def from_json(cls, data):
        def poly(d):
            if not d:
                return ()
            top = max(int(k) for k in d)
            return tuple(_parse_coeff(d.get(str(k), "0")) for k in range(top + 1))

        return cls._make(int(data["ord"]), poly(data["num"]), poly(data["den"]) or (1,))

    def __str__(self):
        if self.den == (1,):
            return str(self.to_laurent())
        num = _format_terms([(self.ordv + k, c) for k, c in enumerate(self.num) if c])
        den = _format_terms([(k, c) for k, c in enumerate(self.den) if c])
        return f"({num})/({den})"

    def __repr__(self):
        return f"RF({self})"


RF = RationalFunction
ZERO = RationalFunction._raw(0, (), (1,))
ONE = RationalFunction._raw(0, (1,), (1,))
V = RationalFunction._raw(1, (1,), (1,))


def monomial(e, c=1):
    """The rational function ``c * v**e``."""
    if not c:
        return ZERO
    return RationalFunction._raw(e, (c,), (1,))


def bar(f):
    return f.bar()


def ord(f):  # noqa: A001 - the valuation is universally called ord
    return f.ord()


# ---------------------------------------------------------------------------
# quantum combinatorics


def _check_nonneg(*ks):
    for k in ks:
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"expected a nonnegative integer, got {k!r}")


def qint(k):
    """[k]_v = v^{k-1} + v^{k-3} + ... + v^{1-k}."""
    _check_nonneg(k)
    return LaurentPoly({k - 1 - 2 * t: 1 for t in range(k)})


def qfact(k):
    _check_nonneg(k)
    r = LaurentPoly(1)
    for t in range(1, k + 1):
        r = r * qint(t)
    return r


def qbinom(n, k):
    _check_nonneg(n, k)
    if k > n:
        raise ValueError(f"qbinom needs k <= n, got n={n}, k={k}")
    return qfact(n).exact_div(qfact(k) * qfact(n - k))


def qint_rf(k):
    return RationalFunction(qint(k))


def qfact_rf(k):
    return RationalFunction(qfact(k))


def qbinom_rf(n, k):
    return RationalFunction(qbinom(n, k))


def in_one_plus_vA0(f, shift):
    """True iff ``v**(-shift) * f`` lies in ``1 + v A_0``."""
    f = RationalFunction._coerce(f)
    g = f * monomial(-shift) - ONE
    return g.ord() >= 1
