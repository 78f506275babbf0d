"""U_v^-(g) as the free algebra on the f_i modulo the radical of the Kashiwara form.

A word ``(i1, ..., ik)`` stands for the monomial ``f_i1 ... f_ik``.  The
operator ``e_i'`` obeys ``e_i' f_j = v^-(a_i,a_j) f_j e_i' + delta_ij`` and the
form is fixed by ``(1, 1) = 1`` and ``(f_i x, y) = (x, e_i' y)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .coeffs import ONE, ZERO, monomial, qfact_rf
from .linalg import independent_columns, rank
from ._boson import BosonModule

__all__ = [
    "HalfQuantum",
    "HalfWeightSpace",
    "e_prime",
    "kashiwara_form",
    "half_weight_space",
    "serre_element",
    "serre_in_radical",
    "quotient_by_folding_ideal",
    "folding_dims_by_depth",
    "kostant_partition_count",
    "MAX_FOLDING_DEPTH",
]

MAX_FOLDING_DEPTH = 8


class HalfQuantum(BosonModule):
    def __init__(self, datum):
        self.datum = datum
        super().__init__(
            datum.indices,
            datum.root,
            lambda i, j: monomial(-datum.pair(i, j)),
            lambda i, j, w: ONE if i == j else ZERO,
        )

    def weights(self, height):
        r = self.datum.rank
        return sorted(w for w in itertools.product(range(height + 1), repeat=r) if sum(w) == height)


_MODELS = {}


def _model(datum):
    key = id(datum)
    m = _MODELS.get(key)
    if m is None or m.datum is not datum:
        m = HalfQuantum(datum)
        _MODELS[key] = m
    return m


def _as_combination(x):
    if isinstance(x, dict):
        return x
    return {tuple(x): ONE}


def e_prime(i, u, datum):
    """e_i' applied to a word or a {word: coefficient} combination."""
    m = _model(datum)
    out = {}
    for word, c in _as_combination(u).items():
        for w2, d in m.free_E(i, word).items():
            out[w2] = out.get(w2, ZERO) + c * d
    return {w: c for w, c in out.items() if c}


def kashiwara_form(x, y, datum):
    """Bilinear extension of the form to words or combinations; unequal weights pair to 0."""
    m = _model(datum)
    acc = ZERO
    for a, c in _as_combination(x).items():
        for b, d in _as_combination(y).items():
            if c and d:
                acc = acc + c * d * m.free_form(a, b)
    return acc


@dataclass
class HalfWeightSpace:
    weight: tuple
    words: list
    gram: list
    pivots: list

    @property
    def dim(self):
        return len(self.pivots)


def half_weight_space(w, datum):
    """Enumerate every word of weight ``w`` and reduce the full Gram matrix."""
    m = _model(datum)
    w = tuple(w)
    if any(x < 0 for x in w):
        raise ValueError(f"weight {w} is not a nonnegative combination of simple roots")
    words = m.words_of_grade(w)
    gram = [[m.free_form(a, b) for b in words] for a in words]
    piv = independent_columns(gram) if words else []
    return HalfWeightSpace(w, words, gram, [words[k] for k in piv])


def serre_element(i, j, datum):
    """sum_k (-1)^k f_i^(k) f_j f_i^(b-k) as a {word: coefficient} combination."""
    if i == j:
        raise ValueError("Serre relations need i != j")
    b = 1 - datum.pair(i, j)
    out = {}
    for k in range(b + 1):
        word = (i,) * k + (j,) + (i,) * (b - k)
        c = (qfact_rf(k) * qfact_rf(b - k)).inverse()
        out[word] = out.get(word, ZERO) + (c if k % 2 == 0 else -c)
    return out


def serre_in_radical(i, j, datum, left=(), right=()):
    """True iff ``left * serre * right`` pairs to zero with every word of its weight."""
    m = _model(datum)
    s = serre_element(i, j, datum)
    elem = {tuple(left) + w + tuple(right): c for w, c in s.items()}
    weight = m.grade_of(next(iter(elem)))
    for word in m.words_of_grade(weight):
        if kashiwara_form(elem, word, datum):
            return False
    return True


def quotient_by_folding_ideal(depth, datum, max_depth=MAX_FOLDING_DEPTH):
    """Dimensions of U^- / sum U^-(f_i - f_theta(i)) per symweight, for every total depth <= ``depth``.

    Returns {symweight: dim}.
    """
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the configured ceiling {max_depth}")
    m = _model(datum)
    out = {}
    for n in range(depth + 1):
        groups = {}
        for w in m.weights(n):
            sw = datum.symweight_of_word([i for i, c in zip(datum.indices, w) for _ in range(c)])
            groups.setdefault(sw, []).append(w)
        for sw, ws in sorted(groups.items()):
            offset, total = {}, 0
            for w in ws:
                offset[w] = total
                total += m.dim(w)
            rows = []
            if n > 0:
                for w0 in m.weights(n - 1):
                    P = m.piece(w0)
                    for p in P.words:
                        for i in datum.indices:
                            ti = datum.th(i)
                            if m.word_key((ti,)) < m.word_key((i,)):
                                continue
                            vec = [ZERO] * total
                            for letter, sign in ((i, 1), (ti, -1)):
                                tgt = m.shift(w0, letter)
                                if tgt not in offset:
                                    break
                                u = m.word_vector(p + (letter,))
                                for k, c in enumerate(u.coords):
                                    vec[offset[tgt] + k] = vec[offset[tgt] + k] + (c if sign > 0 else -c)
                            else:
                                rows.append(vec)
            r = rank(rows) if rows and total else 0
            out[sw] = total - r
    return out


def folding_dims_by_depth(depth, datum):
    dims = quotient_by_folding_ideal(depth, datum)
    per = [0] * (depth + 1)
    for sw, d in dims.items():
        per[sum(sw)] += d
    return per


# ---------------------------------------------------------------------------
# Kostant partition oracle for type A


def _positive_roots_type_a(rank_):
    roots = []
    for a in range(rank_):
        for b in range(a, rank_):
            roots.append(tuple(1 if a <= k <= b else 0 for k in range(rank_)))
    return roots


def kostant_partition_count(w):
    """Number of ways to write ``w`` as a multiset of positive roots of type A_n (n = len(w))."""
    roots = _positive_roots_type_a(len(w))

    @lru_cache(maxsize=None)
    def count(rest, start):
        if not any(rest):
            return 1
        total = 0
        for k in range(start, len(roots)):
            r = roots[k]
            nxt = tuple(x - y for x, y in zip(rest, r))
            if all(x >= 0 for x in nxt):
                total += count(nxt, k)
        return total

    return count(tuple(w), 0)
