"""Symmetric Cartan data with a fixed-point-free diagram involution.

Weights of the root lattice are tuples indexed by the declared index order.
A *symweight* is a tuple indexed by theta-orbits (in order of first
appearance) obtained by summing a weight over each orbit; it is the grading
that survives in the module ``V_theta(lambda)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .coeffs import monomial
from .report import Report

__all__ = [
    "CartanDatum",
    "validate",
    "symmetrize",
    "t_eigenvalue",
    "builtin",
    "BUILTINS",
    "load_cartan",
]


@dataclass(frozen=True)
class CartanDatum:
    indices: tuple
    pairing: dict  # (i, j) -> int, for every ordered pair
    theta: dict = None  # i -> theta(i); None for plain Cartan data
    lam: dict = field(default=None)  # i -> (alpha_i, lambda)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if self.lam is None:
            object.__setattr__(self, "lam", {i: 0 for i in self.indices})
        pos = {i: k for k, i in enumerate(self.indices)}
        object.__setattr__(self, "_pos", pos)
        orbits, orbit_of = [], {}
        for i in self.indices:
            if i in orbit_of:
                continue
            j = self.theta.get(i, i) if self.theta else i
            orb = (i,) if j == i or j not in pos else (i, j)
            for k in orb:
                orbit_of[k] = len(orbits)
            orbits.append(orb)
        object.__setattr__(self, "_orbits", tuple(orbits))
        object.__setattr__(self, "_orbit_of", orbit_of)

    # construction -------------------------------------------------------
    @classmethod
    def from_matrix(cls, indices, matrix, theta=None, lam=None, name=""):
        indices = tuple(indices)
        pairing = {(i, j): int(matrix[a][b]) for a, i in enumerate(indices) for b, j in enumerate(indices)}
        return cls(indices, pairing, dict(theta) if theta is not None else None, dict(lam) if lam else None, name)

    @classmethod
    def from_json(cls, data, name=""):
        indices = list(data["indices"])
        by_str = {str(i): i for i in indices}

        def key(k):
            if k not in by_str:
                raise ValueError(f"unknown index {k!r} in Cartan config")
            return by_str[k]

        theta = data.get("theta")
        if theta is not None:
            theta = {key(str(k)): key(str(v)) for k, v in theta.items()}
        lam = data.get("lambda")
        if lam is not None and lam != "zero":
            lam = {key(str(k)): int(v) for k, v in lam.items()}
            for i in indices:
                lam.setdefault(i, 0)
        else:
            lam = None
        return cls.from_matrix(indices, data["pairing"], theta, lam, name or data.get("name", ""))

    def to_json(self):
        d = {
            "indices": list(self.indices),
            "pairing": [[self.pairing[(i, j)] for j in self.indices] for i in self.indices],
            "lambda": {str(i): self.lam[i] for i in self.indices},
        }
        if self.theta is not None:
            d["theta"] = {str(i): self.theta[i] for i in self.indices}
        if self.name:
            d["name"] = self.name
        return d

    def with_lambda(self, lam):
        return CartanDatum(self.indices, self.pairing, self.theta, dict(lam) if lam else None, self.name)

    # basic accessors ----------------------------------------------------
    def pos(self, i):
        try:
            return self._pos[i]
        except KeyError:
            raise KeyError(f"unknown index {i!r}") from None

    def pair(self, i, j):
        return self.pairing[(i, j)]

    def th(self, i):
        if self.theta is None:
            raise ValueError("this Cartan datum carries no involution")
        return self.theta[i]

    @property
    def orbits(self):
        return self._orbits

    def orbit_of(self, i):
        return self._orbit_of[i]

    @property
    def rank(self):
        return len(self.indices)

    def cartan_matrix(self):
        return [[self.pairing[(i, j)] for j in self.indices] for i in self.indices]

    # weights ------------------------------------------------------------
    def root(self, i):
        w = [0] * self.rank
        w[self.pos(i)] = 1
        return tuple(w)

    def weight(self, word):
        """Q-weight (sum of simple roots, positive convention) of a word."""
        w = [0] * self.rank
        for i in word:
            w[self.pos(i)] += 1
        return tuple(w)

    def symweight_of_word(self, word):
        sw = [0] * len(self._orbits)
        for i in word:
            sw[self._orbit_of[i]] += 1
        return tuple(sw)

    def gamma(self, i):
        """Symmetrized simple root: the symweight of a single letter."""
        sw = [0] * len(self._orbits)
        sw[self._orbit_of[i]] = 1
        return tuple(sw)

    def t_exponent(self, j, sw):
        """Exponent of the T_j eigenvalue on any F-word of symweight ``sw``."""
        e = self.lam[j]
        tj = self.th(j)
        for o, n in enumerate(sw):
            if n:
                k = self._orbits[o][0]
                e -= n * (self.pair(j, k) + self.pair(tj, k))
        return e


def validate(datum, require_theta=True):
    """Check every axiom of a symmetric Cartan datum with involution."""
    rep = Report(f"cartan datum {datum.name or ''}".strip())
    I = datum.indices
    rep.add("indices distinct", len(set(I)) == len(I), list(I))
    missing = [(i, j) for i in I for j in I if (i, j) not in datum.pairing]
    rep.add("pairing defined on I x I", not missing, missing or None)
    if missing:
        return rep
    bad = [(i, j) for i in I for j in I if datum.pair(i, j) != datum.pair(j, i)]
    rep.add("pairing symmetric", not bad, bad or None)
    bad = [i for i in I if datum.pair(i, i) != 2]
    rep.add("pairing(i,i) = 2", not bad, bad or None)
    bad = [(i, j) for i in I for j in I if i != j and datum.pair(i, j) > 0]
    rep.add("pairing(i,j) <= 0 for i != j", not bad, bad or None)
    th = datum.theta
    if th is None:
        if require_theta:
            rep.add("involution present", False, "theta missing")
    else:
        bad = [i for i in I if i not in th or th[i] not in datum._pos]
        rep.add("theta maps I to I", not bad, bad or None)
        if not bad:
            bad = [i for i in I if th[th[i]] != i]
            rep.add("theta^2 = id", not bad, bad or None)
            bad = [(i, j) for i in I for j in I if datum.pair(th[i], th[j]) != datum.pair(i, j)]
            rep.add("pairing(theta i, theta j) = pairing(i, j)", not bad, bad or None)
            bad = [i for i in I if th[i] == i]
            rep.add("theta has no fixed index", not bad, bad or None)
            bad = [i for i in I if datum.lam[i] != datum.lam[th[i]]]
            rep.add("lambda is theta-fixed", not bad, bad or None)
    bad = [i for i in I if datum.lam[i] < 0]
    rep.add("lambda dominant", not bad, bad or None)
    return rep


def symmetrize(w, datum):
    """Sum the coordinates of a Q-weight over each theta-orbit."""
    sw = [0] * len(datum.orbits)
    for i, n in zip(datum.indices, w):
        sw[datum.orbit_of(i)] += n
    return tuple(sw)


def t_eigenvalue(j, word, datum):
    """The scalar v^e by which T_j acts on the F-word ``word`` applied to the vacuum."""
    datum.pos(j)
    for i in word:
        datum.pos(i)
    return monomial(datum.t_exponent(j, datum.symweight_of_word(word)))


# ---------------------------------------------------------------------------
# built-in data


def _chain(n):
    return [[2 if a == b else (-1 if abs(a - b) == 1 else 0) for b in range(n)] for a in range(n)]


BUILTINS = {
    "sl3": lambda: CartanDatum.from_matrix([1, -1], _chain(2), {1: -1, -1: 1}, name="sl3"),
    "a4_chain": lambda: CartanDatum.from_matrix(
        [1, 2, 3, 4], _chain(4), {1: 4, 2: 3, 3: 2, 4: 1}, name="a4_chain"
    ),
    "a1_1": lambda: CartanDatum.from_matrix([0, 1], [[2, -2], [-2, 2]], {0: 1, 1: 0}, name="a1_1"),
    "a2": lambda: CartanDatum.from_matrix([1, 2], _chain(2), name="a2"),
    "a3": lambda: CartanDatum.from_matrix([1, 2, 3], _chain(3), name="a3"),
}


def builtin(name):
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in Cartan datum {name!r}; choose from {sorted(BUILTINS)}") from None


def load_cartan(spec):
    """Built-in name or path to a JSON config."""
    if spec in BUILTINS:
        return builtin(spec)
    path = Path(spec)
    with path.open() as fh:
        return CartanDatum.from_json(json.load(fh), name=path.stem)
