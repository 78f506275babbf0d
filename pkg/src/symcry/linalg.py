"""Dense exact linear algebra over a field.

Matrices are lists of rows.  Entries may be :class:`~symcry.coeffs.RationalFunction`
or :class:`fractions.Fraction`; every routine only uses ring operations, truth
testing and inversion, so the same code serves Q(v) and Q.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import ONE, ZERO, RationalFunction

__all__ = [
    "zeros",
    "identity",
    "matmul",
    "matvec",
    "transpose",
    "madd",
    "msub",
    "mscale",
    "mequal",
    "is_zero",
    "rref",
    "rank",
    "independent_columns",
    "nullspace",
    "solve",
    "inverse",
    "det",
    "column",
    "hstack",
    "submatrix",
]


def _inv(x):
    if isinstance(x, RationalFunction):
        return x.inverse()
    return Fraction(1) / x


def _size(x):
    # cheap complexity measure used to pick small pivots
    if isinstance(x, RationalFunction):
        return len(x.num) + len(x.den)
    return 0


def zeros(rows, cols, zero=ZERO):
    return [[zero] * cols for _ in range(rows)]


def identity(n, one=ONE, zero=ZERO):
    return [[one if r == c else zero for c in range(n)] for r in range(n)]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a, b, zero=ZERO):
    """Product of an (r x k) and a (k x c) matrix.

    ``b`` may have zero rows, in which case the column count can't be read off
    it; callers multiplying by empty matrices should pass matching shapes via
    :func:`zeros`.
    """
    if not a:
        return []
    k = len(a[0])
    if k == 0:
        cols = len(b[0]) if b else 0
        return zeros(len(a), cols, zero)
    cols = len(b[0])
    out = []
    for row in a:
        acc = [zero] * cols
        for t, x in enumerate(row):
            if not x:
                continue
            brow = b[t]
            for c in range(cols):
                y = brow[c]
                if y:
                    acc[c] = acc[c] + x * y
        out.append(acc)
    return out


def matvec(a, x, zero=ZERO):
    out = []
    for row in a:
        acc = zero
        for p, q in zip(row, x):
            if p and q:
                acc = acc + p * q
        out.append(acc)
    return out


def madd(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def msub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mscale(c, a):
    return [[c * x for x in r] for r in a]


def mequal(a, b):
    if len(a) != len(b):
        return False
    return all(len(r) == len(s) and all(x == y for x, y in zip(r, s)) for r, s in zip(a, b))


def is_zero(a):
    return all(not x for r in a for x in r)


def column(a, c):
    return [r[c] for r in a]


def hstack(*mats):
    return [sum((list(m[r]) for m in mats), []) for r in range(len(mats[0]))]


def submatrix(a, rows, cols):
    return [[a[r][c] for c in cols] for r in rows]


def rref(a):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot columns; these are
    exactly the leftmost linearly independent columns of ``a``.
    """
    m = [list(r) for r in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for t in range(r, nrows):
            x = m[t][c]
            if x and (best is None or _size(x) < _size(m[best][c])):
                best = t
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        inv = _inv(m[r][c])
        m[r] = [x * inv if x else x for x in m[r]]
        prow = m[r]
        for t in range(nrows):
            if t != r:
                f = m[t][c]
                if f:
                    row = m[t]
                    m[t] = [x - f * y if y else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a):
    return len(rref(a)[1]) if a and a[0] else 0


def independent_columns(a):
    """Indices of the leftmost linearly independent columns."""
    if not a or not a[0]:
        return []
    return rref(a)[1]


def nullspace(a, ncols=None):
    """Basis of {x : a x = 0}, one vector per free column."""
    if not a:
        n = ncols or 0
        return [[ONE if r == c else ZERO for r in range(n)] for c in range(n)]
    R, piv = rref(a)
    n = len(a[0])
    zero = a[0][0] * 0
    one = zero + 1
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        x = [zero] * n
        x[f] = one
        for row, pc in zip(R, piv):
            if row[f]:
                x[pc] = -row[f]
        basis.append(x)
    return basis


def solve(a, b):
    """One solution x of a x = b, or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [y] for r, y in zip(a, b)]
    if not aug:
        return []
    R, piv = rref(aug)
    if n in piv:
        return None
    zero = b[0] * 0 if b else ZERO
    x = [zero] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return x


def inverse(a):
    n = len(a)
    if n == 0:
        return []
    zero = a[0][0] * 0
    one = zero + 1
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def det(a):
    n = len(a)
    if n == 0:
        return ONE
    m = [list(r) for r in a]
    zero = m[0][0] * 0
    d = zero + 1
    for c in range(n):
        p = next((t for t in range(c, n) if m[t][c]), None)
        if p is None:
            return zero
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d = d * m[c][c]
        inv = _inv(m[c][c])
        for t in range(c + 1, n):
            f = m[t][c]
            if f:
                f = f * inv
                m[t] = [x - f * y if y else x for x, y in zip(m[t], m[c])]
    return d
