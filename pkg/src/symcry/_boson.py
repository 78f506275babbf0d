"""Graded twisted-boson modules realised as free word modules modulo a form radical.

Both the negative half of the quantum group and the module ``V_theta(lambda)``
are instances of the same construction: words in letters ``F_i`` applied to a
vacuum, operators ``E_i`` defined by a straightening rule

    E_i F_j u = q(i, j) F_j E_i u + extra(i, j, grade(u)) u,     E_i(vacuum) = 0,

and the symmetric form with ``(vacuum, vacuum) = 1`` and ``(F_i x, y) = (x, E_i y)``.
The quotient by the radical of that form is built one graded piece at a time.

Spanning set for a piece of grade ``w``: since the radical is stable under
every ``F_i``, the words ``i + p`` with ``p`` a pivot word of grade
``w - g_i`` already span.  Sorted lexicographically, the leftmost independent
ones among them coincide with the leftmost independent words among *all*
words of grade ``w`` (a non-pivot ``p`` is a combination of earlier words, so
``i + p`` is a combination of earlier words too).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .coeffs import ONE, ZERO, RationalFunction
from .linalg import independent_columns, inverse, matmul, matvec, submatrix

log = logging.getLogger(__name__)

__all__ = ["GradedPiece", "BosonModule", "ModuleVector"]


@dataclass
class GradedPiece:
    grade: tuple
    words: list  # pivot words, a basis of the quotient
    gram: list  # form restricted to pivot words
    cand_words: list = field(default_factory=list)
    cand_gram: list = field(default_factory=list)
    F: dict = field(default_factory=dict)  # letter -> matrix (this x lower)
    E: dict = field(default_factory=dict)  # letter -> matrix (lower x this)

    @property
    def dim(self):
        return len(self.words)

    def to_json(self):
        def mat(m):
            return [[x.to_json() for x in row] for row in m]

        return {
            "grade": list(self.grade),
            "words": [list(w) for w in self.words],
            "dim": self.dim,
            "gram": mat(self.gram),
            "candidates": [list(w) for w in self.cand_words],
            "candidate_gram": mat(self.cand_gram),
            "F": {str(i): mat(m) for i, m in sorted(self.F.items(), key=lambda t: str(t[0]))},
            "E": {str(i): mat(m) for i, m in sorted(self.E.items(), key=lambda t: str(t[0]))},
        }

    @classmethod
    def from_json(cls, data, letters):
        by_str = {str(i): i for i in letters}

        def mat(m):
            return [[RationalFunction.from_json(x) for x in row] for row in m]

        def word(w):
            return tuple(by_str[str(x)] for x in w)

        return cls(
            tuple(data["grade"]),
            [word(w) for w in data["words"]],
            mat(data["gram"]),
            [word(w) for w in data["candidates"]],
            mat(data["candidate_gram"]),
            {by_str[k]: mat(m) for k, m in data["F"].items()},
            {by_str[k]: mat(m) for k, m in data["E"].items()},
        )


class ModuleVector:
    """An element of one graded piece, in pivot-word coordinates."""

    __slots__ = ("grade", "coords")

    def __init__(self, grade, coords):
        self.grade = tuple(grade)
        self.coords = tuple(RationalFunction(c) if not isinstance(c, RationalFunction) else c for c in coords)

    def __add__(self, other):
        self._same(other)
        return ModuleVector(self.grade, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._same(other)
        return ModuleVector(self.grade, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return ModuleVector(self.grade, [-a for a in self.coords])

    def __rmul__(self, c):
        return ModuleVector(self.grade, [c * a for a in self.coords])

    def __mul__(self, c):
        return self.__rmul__(c)

    def _same(self, other):
        if self.grade != other.grade:
            raise ValueError(f"grade mismatch {self.grade} vs {other.grade}")

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.grade == other.grade and self.coords == other.coords

    def __hash__(self):
        return hash((self.grade, self.coords))

    def is_zero(self):
        return not any(self.coords)

    def bar(self):
        return ModuleVector(self.grade, [a.bar() for a in self.coords])

    def to_json(self):
        return {"grade": list(self.grade), "coords": [c.to_json() for c in self.coords]}

    def __repr__(self):
        return f"ModuleVector({self.grade}, [{', '.join(str(c) for c in self.coords)}])"


class BosonModule:
    """Lazily built quotient of the free word module.

    ``letters``  ordered alphabet (the order fixes pivot selection)
    ``grade``    letter -> tuple of nonnegative ints
    ``q``        (i, j) -> RationalFunction
    ``extra``    (i, j, grade of u) -> RationalFunction
    """

    def __init__(self, letters, grade, q, extra):
        self.letters = tuple(letters)
        self._grade = {i: tuple(grade(i)) for i in self.letters}
        self._pos = {i: k for k, i in enumerate(self.letters)}
        self._q = {(i, j): q(i, j) for i in self.letters for j in self.letters}
        self._extra_fn = extra
        self._extra = {}
        n = len(next(iter(self._grade.values()))) if self._grade else 0
        self.zero_grade = (0,) * n
        self._pieces = {}
        self._free_E = {}
        self._free_form = {}

    # grades ---------------------------------------------------------------
    def letter_grade(self, i):
        return self._grade[i]

    def grade_of(self, word):
        g = list(self.zero_grade)
        for i in word:
            for k, x in enumerate(self._grade[i]):
                g[k] += x
        return tuple(g)

    def shift(self, w, i, sign=1):
        return tuple(a + sign * b for a, b in zip(w, self._grade[i]))

    def word_key(self, word):
        return tuple(self._pos[i] for i in word)

    def q(self, i, j):
        return self._q[(i, j)]

    def extra(self, i, j, g):
        key = (i, j, g)
        val = self._extra.get(key)
        if val is None:
            val = self._extra_fn(i, j, g)
            self._extra[key] = val
        return val

    # quotient pieces ----------------------------------------------------------
    def piece(self, w):
        """The graded piece of grade ``w``; None when ``w`` has a negative entry."""
        w = tuple(w)
        if any(x < 0 for x in w):
            return None
        p = self._pieces.get(w)
        if p is None:
            p = self._build(w)
            self._pieces[w] = p
        return p

    def dim(self, w):
        p = self.piece(w)
        return p.dim if p is not None else 0

    def _build(self, w):
        if w == self.zero_grade:
            return GradedPiece(w, [()], [[ONE]], [()], [[ONE]])
        lower = {}
        cands = []  # (word, letter, index of pivot in the lower piece)
        for i in self.letters:
            S = self.piece(self.shift(w, i, -1))
            if S is None or S.dim == 0:
                continue
            lower[i] = S
            for k, p in enumerate(S.words):
                cands.append(((i,) + p, i, k))
        cands.sort(key=lambda c: self.word_key(c[0]))
        nc = len(cands)
        if nc == 0:
            return GradedPiece(w, [], [], [], [])

        # E_i applied to every candidate, in pivot coordinates of lower[i]
        images = {i: [None] * nc for i in lower}
        for c, (word, j, k) in enumerate(cands):
            Sj = lower[j]
            gp = Sj.grade
            for i, Si in lower.items():
                y = [ZERO] * Si.dim
                Eij = Sj.E.get(i)
                if Eij is not None and Eij:
                    below = [row[k] for row in Eij]
                    if any(below):
                        Fj = Si.F[j]
                        y = matvec(Fj, below)
                        qij = self.q(i, j)
                        y = [qij * x if x else x for x in y]
                if Si is Sj:
                    ex = self.extra(i, j, gp)
                    if ex:
                        y[k] = y[k] + ex
                images[i][c] = y

        gram = [[ZERO] * nc for _ in range(nc)]
        for a, (word, i, k) in enumerate(cands):
            g_row = lower[i].gram[k]
            for b in range(nc):
                y = images[i][b]
                acc = ZERO
                for s, t in zip(g_row, y):
                    if s and t:
                        acc = acc + s * t
                gram[a][b] = acc

        piv = independent_columns(gram)
        words = [cands[c][0] for c in piv]
        pg = submatrix(gram, piv, piv)
        if not piv:
            log.debug("grade %s: every word lies in the radical", w)
            return GradedPiece(w, [], [], [c[0] for c in cands], gram)
        coords = matmul(inverse(pg), submatrix(gram, piv, range(nc)))
        F = {}
        for i, S in lower.items():
            cols = [None] * S.dim
            for c, (_, j, k) in enumerate(cands):
                if j == i:
                    cols[k] = c
            F[i] = [[coords[r][cols[k]] for k in range(S.dim)] for r in range(len(piv))]
        E = {}
        for i, S in lower.items():
            E[i] = [[images[i][c][r] for c in piv] for r in range(S.dim)]
        log.debug("grade %s: %d candidates, dim %d", w, nc, len(piv))
        return GradedPiece(w, words, pg, [c[0] for c in cands], gram, F, E)

    # operator matrices --------------------------------------------------------
    def F_matrix(self, i, w):
        """Matrix of F_i from grade ``w`` to ``w + g_i`` (rows x cols = target x source)."""
        T = self.piece(self.shift(w, i))
        S = self.piece(w)
        if S is None or S.dim == 0 or T.dim == 0:
            return [[ZERO] * (S.dim if S else 0) for _ in range(T.dim)]
        return T.F[i]

    def E_matrix(self, i, w):
        """Matrix of E_i from grade ``w`` to ``w - g_i``; empty when the target is absent."""
        S = self.piece(w)
        T = self.piece(self.shift(w, i, -1))
        if T is None:
            return []
        if S.dim == 0 or T.dim == 0:
            return [[ZERO] * S.dim for _ in range(T.dim)]
        return S.E[i]

    def vacuum(self):
        return ModuleVector(self.zero_grade, [ONE])

    def word_vector(self, word):
        """Coordinates of the class of ``word`` (applied to the vacuum)."""
        vec = self.vacuum()
        for i in reversed(tuple(word)):
            vec = self.apply_F(i, vec)
        return vec

    def apply_F(self, i, u):
        w2 = self.shift(u.grade, i)
        return ModuleVector(w2, matvec(self.F_matrix(i, u.grade), u.coords))

    def apply_E(self, i, u):
        w2 = self.shift(u.grade, i, -1)
        if any(x < 0 for x in w2):
            return None
        return ModuleVector(w2, matvec(self.E_matrix(i, u.grade), u.coords))

    def pair(self, u, w):
        """The form on two vectors of the same grade."""
        if u.grade != w.grade:
            return ZERO
        G = self.piece(u.grade).gram
        acc = ZERO
        for a, x in enumerate(u.coords):
            if x:
                for b, y in enumerate(w.coords):
                    if y and G[a][b]:
                        acc = acc + x * G[a][b] * y
        return acc

    # free-word oracles (no quotient, straight recursion) ------------------
    def free_E(self, i, word):
        """E_i applied to a free word, as {word: coefficient}."""
        word = tuple(word)
        key = (i, word)
        hit = self._free_E.get(key)
        if hit is not None:
            return hit
        if not word:
            out = {}
        else:
            j, rest = word[0], word[1:]
            out = {}
            for u, c in self.free_E(i, rest).items():
                t = (j,) + u
                out[t] = out.get(t, ZERO) + self.q(i, j) * c
            ex = self.extra(i, j, self.grade_of(rest))
            if ex:
                out[rest] = out.get(rest, ZERO) + ex
            out = {k: c for k, c in out.items() if c}
        self._free_E[key] = out
        return out

    def free_form(self, x, y):
        """The form on two free words, by recursion on the left word."""
        x, y = tuple(x), tuple(y)
        if self.grade_of(x) != self.grade_of(y):
            return ZERO
        key = (x, y)
        hit = self._free_form.get(key)
        if hit is not None:
            return hit
        if not x:
            val = ONE if not y else ZERO
        else:
            j, rest = x[0], x[1:]
            val = ZERO
            for u, c in self.free_E(j, y).items():
                val = val + c * self.free_form(rest, u)
        self._free_form[key] = val
        return val

    def words_of_grade(self, w):
        """All free words of grade ``w`` in lexicographic order."""
        w = tuple(w)
        if any(x < 0 for x in w):
            return []
        if w == self.zero_grade:
            return [()]
        out = []
        for i in self.letters:
            for rest in self.words_of_grade(self.shift(w, i, -1)):
                out.append((i,) + rest)
        out.sort(key=self.word_key)
        return out
