"""theta-quivers: validation, orientations and the closed-form dimension and shift formulas.

Arrows are stored individually (not as multiplicities) so that ``bar`` and
``theta`` are honest involutions on the arrow set.  An orientation is any
iterable of arrow ids.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cartan import CartanDatum
from .linalg import rank
from .report import Report

__all__ = [
    "ThetaQuiver",
    "FlagType",
    "validate_quiver",
    "validate_orientation",
    "is_sink",
    "dim_rep_space",
    "dim_rep_space_bruteforce",
    "shift_F",
    "shift_E",
    "shift_div",
    "shift_div_partner",
    "m_k",
    "res_terms",
    "ind_type",
    "builtin_quiver",
    "load_quiver",
    "random_theta_quiver",
]


@dataclass
class ThetaQuiver:
    vertices: list
    arrows: dict  # id -> (out, in)
    bar: dict
    theta_v: dict
    theta_h: dict
    name: str = ""

    def out(self, h):
        return self.arrows[h][0]

    def inn(self, h):
        return self.arrows[h][1]

    def arrows_between(self, i, j):
        return [h for h, (o, t) in self.arrows.items() if o == i and t == j]

    def cartan_datum(self, lam=None):
        """Pairing (a_i, a_j) = -#{arrows i -> j} off the diagonal, theta from the vertex involution."""
        pairing = {}
        for i in self.vertices:
            for j in self.vertices:
                pairing[(i, j)] = 2 if i == j else -len(self.arrows_between(i, j))
        return CartanDatum(tuple(self.vertices), pairing, dict(self.theta_v), lam, self.name)

    # io -------------------------------------------------------------------
    @classmethod
    def from_json(cls, data, name=""):
        verts = list(data["vertices"])
        by_str = {str(v): v for v in verts}

        def vert(x):
            return by_str[str(x)]

        arrows = {str(a["id"]): (vert(a["out"]), vert(a["in"])) for a in data["arrows"]}
        return cls(
            verts,
            arrows,
            {str(k): str(v) for k, v in data["bar"].items()},
            {vert(k): vert(v) for k, v in data["theta_v"].items()},
            {str(k): str(v) for k, v in data["theta_h"].items()},
            name or data.get("name", ""),
        )

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": h, "out": o, "in": t} for h, (o, t) in sorted(self.arrows.items())],
            "bar": dict(sorted(self.bar.items())),
            "theta_v": {str(k): v for k, v in self.theta_v.items()},
            "theta_h": dict(sorted(self.theta_h.items())),
        }


def validate_quiver(q, datum=None):
    """Per-axiom report for a theta-quiver (and, optionally, agreement with a Cartan datum)."""
    rep = Report(f"theta-quiver {q.name}".strip())
    H = list(q.arrows)
    V = set(q.vertices)
    bad = [h for h in H if q.out(h) not in V or q.inn(h) not in V]
    rep.add("arrow ends are vertices", not bad, bad or None)
    if bad:
        return rep
    bad = [h for h in H if q.out(h) == q.inn(h)]
    rep.add("no loops: out(h) != in(h)", not bad, bad or None)
    bad = [h for h in H if h not in q.bar or q.bar[h] not in q.arrows or q.bar[q.bar[h]] != h or q.bar[h] == h]
    rep.add("bar is a fixed-point-free involution on arrows", not bad, bad or None)
    if bad:
        return rep
    bad = [h for h in H if q.out(q.bar[h]) != q.inn(h) or q.inn(q.bar[h]) != q.out(h)]
    rep.add("bar reverses arrows", not bad, bad or None)
    tv, th = q.theta_v, q.theta_h
    bad = [i for i in q.vertices if i not in tv or tv[i] not in V or tv[tv[i]] != i]
    rep.add("theta is an involution on vertices", not bad, bad or None)
    bad2 = [h for h in H if h not in th or th[h] not in q.arrows or th[th[h]] != h]
    rep.add("theta is an involution on arrows", not bad2, bad2 or None)
    if bad or bad2:
        return rep
    bad = [h for h in H if q.out(th[h]) != tv[q.inn(h)] or q.inn(th[h]) != tv[q.out(h)]]
    rep.add("(a) out(theta h) = theta(in h), in(theta h) = theta(out h)", not bad, bad or None)
    bad = [h for h in H if tv[q.out(h)] == q.inn(h) and th[h] != h]
    rep.add("(b) theta(out h) = in h implies theta h = h", not bad, bad or None)
    bad = [h for h in H if th[q.bar[h]] != q.bar[th[h]]]
    rep.add("(c) theta(bar h) = bar(theta h)", not bad, bad or None)
    bad = [i for i in q.vertices if tv[i] == i]
    rep.add("(d) no theta-fixed vertex", not bad, bad or None)
    if datum is not None:
        bad = [
            (i, j)
            for i in q.vertices
            for j in q.vertices
            if i != j and len(q.arrows_between(i, j)) != -datum.pair(i, j)
        ]
        rep.add("#{h: i -> j} = -(a_i, a_j)", not bad, bad or None)
    return rep


def validate_orientation(q, omega):
    omega = set(omega)
    rep = Report("theta-orientation")
    H = set(q.arrows)
    rep.add("orientation is a set of arrows", omega <= H, sorted(omega - H) or None)
    bars = {q.bar[h] for h in omega if h in q.bar}
    rep.add("Omega and bar(Omega) are disjoint", not (omega & bars), sorted(omega & bars) or None)
    rep.add("Omega and bar(Omega) cover H", omega | bars == H, sorted(H - (omega | bars)) or None)
    th = {q.theta_h[h] for h in omega if h in q.theta_h}
    rep.add("Omega is theta-stable", th == omega, sorted(th ^ omega) or None)
    return rep


def is_sink(i, omega, q):
    return not any(q.out(h) == i for h in omega)


def _split(omega, q):
    om0 = [h for h in omega if q.theta_h[h] == h]
    om1 = [h for h in omega if q.theta_h[h] != h]
    return om0, om1


def dim_rep_space(d, omega, q):
    """Dimension of the space of theta-symmetric representations with dimension vector ``d``."""
    om0, om1 = _split(omega, q)
    twice = sum(d[q.out(h)] * d[q.inn(h)] for h in om1)
    if twice % 2:
        raise ValueError("theta-symmetric dimension vector expected (odd half-sum)")
    return twice // 2 + sum(d[q.out(h)] * (d[q.out(h)] - 1) // 2 for h in om0)


def dim_rep_space_bruteforce(d, omega, q):
    """Coordinate count: unknown matrix entries subject to x_{theta h} = -x_h^T."""
    omega = list(omega)
    index = {}
    for h in omega:
        for r in range(d[q.inn(h)]):
            for c in range(d[q.out(h)]):
                index[(h, r, c)] = len(index)
    rows = []
    for h in omega:
        t = q.theta_h[h]
        for r in range(d[q.inn(h)]):
            for c in range(d[q.out(h)]):
                eq = [Fraction(0)] * len(index)
                eq[index[(h, r, c)]] += 1
                eq[index[(t, c, r)]] += 1
                rows.append(eq)
    n = len(index)
    return n - (rank(rows) if rows and n else 0)


def _out_sum(d, i, omega, q):
    return sum(d[q.inn(h)] for h in omega if q.out(h) == i)


def _loops_to_theta(i, omega, q):
    return sum(1 for h in omega if q.out(h) == i and q.inn(h) == q.theta_v[i])


def shift_F(d, i, omega, q):
    return d[i] + _out_sum(d, i, omega, q)


def shift_E(d, i, omega, q):
    return shift_F(d, i, omega, q) - 2 * d[i]


def shift_div(d, i, a, omega, q):
    """Shift exponent d_a attached to the a-th divided power F_i^(a)."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    base = d[i] + _out_sum(d, i, omega, q)
    return a * base + a * (a - 1) // 2 * _loops_to_theta(i, omega, q)


def shift_div_partner(d, i, a, omega, q):
    """The exponent d with d_a + d = d_(a+1) + a."""
    return d[i] + a + _out_sum(d, i, omega, q) + a * _loops_to_theta(i, omega, q)


# ---------------------------------------------------------------------------
# flag types


@dataclass(frozen=True)
class FlagType:
    i: tuple
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "i", tuple(self.i))
        object.__setattr__(self, "a", tuple(self.a))

    @property
    def m(self):
        return len(self.i) // 2

    def check(self, theta):
        """List of violated invariants (empty when valid)."""
        problems = []
        n = len(self.i)
        if n != len(self.a):
            problems.append("i and a have different lengths")
        if n % 2:
            problems.append("odd length")
        for ell in range(n):
            if theta[self.i[ell]] != self.i[n - 1 - ell]:
                problems.append(f"theta(i_{ell + 1}) != i_{n - ell}")
            if ell < len(self.a) and self.a[ell] != self.a[n - 1 - ell]:
                problems.append(f"a_{ell + 1} != a_{n - ell}")
            if ell < len(self.a) and self.a[ell] < 0:
                problems.append(f"a_{ell + 1} < 0")
        return problems

    def weight(self, indices):
        w = {i: 0 for i in indices}
        for i, a in zip(self.i, self.a):
            w[i] += a
        return tuple(w[i] for i in indices)


def _a_k(ft, k):
    n = len(ft.i)
    return tuple(x - (1 if ell == k - 1 else 0) - (1 if ell == n - k else 0) for ell, x in enumerate(ft.a))


def _precondition(ft, i):
    bad = [ell + 1 for ell, (j, x) in enumerate(zip(ft.i, ft.a)) if j == i and x <= 0]
    if bad:
        raise ValueError(f"entries a_l must be positive wherever i_l = {i!r}; violated at positions {bad}")


def m_k(ft, k, omega, q, i=None):
    """Multiplicity exponent M_k(i, a^(k)) for the 1-based position ``k``.

    Returns ``(M_k, a^(k))``.
    """
    if not 1 <= k <= len(ft.i):
        raise ValueError(f"position {k} out of range")
    if i is None:
        i = ft.i[k - 1]
    if ft.i[k - 1] != i:
        raise ValueError(f"i_{k} = {ft.i[k - 1]!r} differs from the target index {i!r}")
    _precondition(ft, i)
    ak = _a_k(ft, k)
    total = sum(ak[ell] for ell in range(k - 1) if ft.i[ell] == i)
    for ell in range(k, len(ft.i)):
        n_arrows = sum(1 for h in omega if q.out(h) == i and q.inn(h) == ft.i[ell])
        total += n_arrows * ak[ell]
    return total, ak


def res_terms(ft, i, omega, q):
    """Every (FlagType with a^(k), -2 M_k) for positions k with i_k = i."""
    _precondition(ft, i)
    out = []
    for k in range(1, len(ft.i) + 1):
        if ft.i[k - 1] == i:
            M, ak = m_k(ft, k, omega, q, i)
            out.append((FlagType(ft.i, ak), -2 * M))
    return out


def ind_type(ft, i, a, theta):
    return FlagType((i,) + ft.i + (theta[i],), (a,) + ft.a + (a,))


# ---------------------------------------------------------------------------
# built-in quivers and random generation


def _sl3():
    return ThetaQuiver(
        [1, -1],
        {"h": (-1, 1), "hb": (1, -1)},
        {"h": "hb", "hb": "h"},
        {1: -1, -1: 1},
        {"h": "h", "hb": "hb"},
        "sl3",
    ), ["h"]


def _a1_1():
    return ThetaQuiver(
        [0, 1],
        {"a": (0, 1), "b": (0, 1), "ab": (1, 0), "bb": (1, 0)},
        {"a": "ab", "ab": "a", "b": "bb", "bb": "b"},
        {0: 1, 1: 0},
        {"a": "a", "b": "b", "ab": "ab", "bb": "bb"},
        "a1_1",
    ), ["a", "b"]


def _a4_chain():
    arrows = {"12": (1, 2), "21": (2, 1), "23": (2, 3), "32": (3, 2), "34": (3, 4), "43": (4, 3)}
    bar = {"12": "21", "21": "12", "23": "32", "32": "23", "34": "43", "43": "34"}
    theta_h = {"12": "34", "34": "12", "21": "43", "43": "21", "23": "23", "32": "32"}
    return ThetaQuiver([1, 2, 3, 4], arrows, bar, {1: 4, 2: 3, 3: 2, 4: 1}, theta_h, "a4_chain"), ["12", "34", "23"]


_BUILTIN_QUIVERS = {"sl3": _sl3, "a1_1": _a1_1, "a4_chain": _a4_chain}


def builtin_quiver(name):
    """(quiver, a theta-orientation) for a built-in name."""
    try:
        return _BUILTIN_QUIVERS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in quiver {name!r}; choose from {sorted(_BUILTIN_QUIVERS)}") from None


def load_quiver(spec):
    """Built-in name or JSON path; returns (quiver, orientation or None)."""
    if spec in _BUILTIN_QUIVERS:
        return builtin_quiver(spec)
    path = Path(spec)
    with path.open() as fh:
        data = json.load(fh)
    q = ThetaQuiver.from_json(data, name=path.stem)
    omega = data.get("orientation")
    return q, [str(h) for h in omega] if omega is not None else None


def random_theta_quiver(rng: random.Random, n_pairs=None, max_mult=2):
    """A random theta-quiver on 2 or 4 vertices together with a random theta-orientation."""
    n_pairs = n_pairs or rng.choice([1, 2])
    verts = []
    tv = {}
    for p in range(n_pairs):
        a, b = 2 * p, 2 * p + 1
        verts += [a, b]
        tv[a], tv[b] = b, a
    arrows, bar, th = {}, {}, {}
    omega = []
    done = set()
    counter = 0
    for i in verts:
        for j in verts:
            if i >= j or (i, j) in done:
                continue
            partner = tuple(sorted((tv[i], tv[j])))
            done.add((i, j))
            done.add(partner)
            mult = rng.randint(0, max_mult)
            for _ in range(mult):
                counter += 1
                h, hb = f"h{counter}", f"h{counter}b"
                arrows[h], arrows[hb] = (i, j), (j, i)
                bar[h], bar[hb] = hb, h
                if j == tv[i]:
                    th[h], th[hb] = h, hb
                    omega.append(rng.choice([h, hb]))
                else:
                    t, tb = f"t{counter}", f"t{counter}b"
                    # theta sends i -> j to theta(j) -> theta(i)
                    arrows[t], arrows[tb] = (tv[j], tv[i]), (tv[i], tv[j])
                    bar[t], bar[tb] = tb, t
                    th[h], th[t], th[hb], th[tb] = t, h, tb, hb
                    pick = rng.choice([h, hb])
                    omega += [pick, th[pick]]
    q = ThetaQuiver(verts, arrows, bar, tv, th, "random")
    return q, omega
