"""i-string decompositions, modified root operators, the crystal lattice and the crystal graph.

Lattice arithmetic is carried out over the local ring A_0 (rational
functions regular at v = 0) by elimination with minimal-valuation pivots.
Two lattice vectors define the same crystal vertex exactly when their
difference lies in v L, which is decided from lattice coordinates, never
from pivot-word coordinates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coeffs import ONE, ZERO, in_one_plus_vA0, monomial
from .linalg import inverse, matmul, matvec, nullspace, rank
from .report import Report
from ._boson import ModuleVector

log = logging.getLogger(__name__)

__all__ = [
    "StringDecomposition",
    "StringData",
    "LatticeBasis",
    "CrystalVertex",
    "CrystalGraph",
    "string_data",
    "string_decompose",
    "tilde_E",
    "tilde_F",
    "lattice_insert",
    "build_crystal",
    "verify_crystal",
    "CriterionInput",
    "criterion_check",
]


# ---------------------------------------------------------------------------
# string decompositions


@dataclass
class StringDecomposition:
    i: object
    parts: list  # [(n, ModuleVector u_n)] with E_i u_n = 0, nonzero parts only

    def reconstruct(self, model):
        total = None
        for n, un in self.parts:
            term = model.apply_divided_F(self.i, n, un)
            total = term if total is None else total + term
        return total


@dataclass
class StringData:
    """Basis of one weight space adapted to the i-string decomposition."""

    i: object
    sw: tuple
    family: list  # [(n, ModuleVector k)] with k spanning ker E_i at sw - n gamma_i
    matrix: list  # columns F_i^(n) k in pivot coordinates of sw
    inv: list


def _kernel_basis(model, i, sw):
    n = model.dim(sw)
    if n == 0:
        return []
    low = model.shift(sw, i, -1)
    if any(x < 0 for x in low) or model.dim(low) == 0:
        return [ModuleVector(sw, [ONE if r == c else ZERO for r in range(n)]) for c in range(n)]
    return [ModuleVector(sw, vec) for vec in nullspace(model.E_matrix(i, sw))]


def string_data(model, i, sw):
    cache = model.__dict__.setdefault("_string_cache", {})
    key = (i, sw)
    hit = cache.get(key)
    if hit is not None:
        return hit
    dim = model.dim(sw)
    family = []
    n = 0
    cur = sw
    while all(x >= 0 for x in cur):
        for k in _kernel_basis(model, i, cur):
            family.append((n, k))
        n += 1
        cur = model.shift(cur, i, -1)
    cols = [model.apply_divided_F(i, n, k).coords for n, k in family]
    if len(cols) != dim:
        raise ArithmeticError(f"string family for i={i!r} at {sw} has {len(cols)} members, dimension is {dim}")
    mat = [[cols[c][r] for c in range(dim)] for r in range(dim)]
    try:
        inv = inverse(mat) if dim else []
    except ZeroDivisionError:
        raise ArithmeticError(f"string family for i={i!r} at {sw} is linearly dependent") from None
    data = StringData(i, sw, family, mat, inv)
    cache[key] = data
    return data


def string_decompose(i, u, model):
    data = string_data(model, i, u.grade)
    c = matvec(data.inv, u.coords) if data.inv else []
    parts = {}
    for coef, (n, k) in zip(c, data.family):
        if coef:
            prev = parts.get(n)
            term = coef * k
            parts[n] = term if prev is None else prev + term
    return StringDecomposition(i, sorted(parts.items(), key=lambda t: t[0]))


def _tilde_matrix(model, i, sw, step):
    cache = model.__dict__.setdefault("_tilde_cache", {})
    key = (i, sw, step)
    hit = cache.get(key)
    if hit is not None:
        return hit
    data = string_data(model, i, sw)
    tgt = model.shift(sw, i, step)
    m = model.dim(tgt)
    cols = []
    for n, k in data.family:
        if n + step < 0:
            cols.append([ZERO] * m)
        else:
            cols.append(list(model.apply_divided_F(i, n + step, k).coords))
    img = [[cols[c][r] for c in range(len(cols))] for r in range(m)]
    M = matmul(img, data.inv) if (img and data.inv) else [[ZERO] * len(data.family) for _ in range(m)]
    cache[key] = M
    return M


def tilde_E(i, u, model):
    tgt = model.shift(u.grade, i, -1)
    if any(x < 0 for x in tgt):
        return None
    return ModuleVector(tgt, matvec(_tilde_matrix(model, i, u.grade, -1), u.coords))


def tilde_F(i, u, model):
    tgt = model.shift(u.grade, i, 1)
    return ModuleVector(tgt, matvec(_tilde_matrix(model, i, u.grade, 1), u.coords))


# ---------------------------------------------------------------------------
# lattices over A_0


class LatticeBasis:
    """An A_0-lattice inside one weight space, in lower echelon form.

    ``vectors[k]`` has a nonzero entry at ``pivots[k]`` and zeros at every
    earlier pivot row; the pivot entry is normalised to a power of v.
    """

    def __init__(self, grade, dim, vectors=(), pivots=()):
        self.grade = tuple(grade)
        self.dim = dim
        self.vectors = [list(v) for v in vectors]
        self.pivots = list(pivots)

    @classmethod
    def from_generators(cls, grade, dim, gens):
        rem = [list(g) for g in gens if any(g)]
        vectors, pivots = [], []
        for r in range(dim):
            best, best_ord = None, math.inf
            for k, g in enumerate(rem):
                o = g[r].ord()
                if o < best_ord:
                    best, best_ord = k, o
            if best is None:
                continue
            p = rem.pop(best)
            unit = monomial(best_ord) * p[r].inverse()
            p = [unit * x if x else x for x in p]
            new_rem = []
            for g in rem:
                f = g[r]
                if f:
                    c = f * monomial(-best_ord)
                    g = [x - c * y if y else x for x, y in zip(g, p)]
                if any(g):
                    new_rem.append(g)
            rem = new_rem
            vectors.append(p)
            pivots.append(r)
        return cls(grade, dim, vectors, pivots)

    @property
    def rank(self):
        return len(self.vectors)

    def coefficients(self, u):
        """Coordinates of ``u`` over the lattice basis, or None if ``u`` is outside its Q(v)-span."""
        coords = list(u.coords if isinstance(u, ModuleVector) else u)
        c = []
        for p, vec in zip(self.pivots, self.vectors):
            x = coords[p] * vec[p].inverse() if coords[p] else ZERO
            c.append(x)
            if x:
                coords = [a - x * b if b else a for a, b in zip(coords, vec)]
        if any(coords):
            return None
        return c

    def contains(self, u):
        c = self.coefficients(u)
        return c is not None and all(x.ord() >= 0 for x in c)

    def residue(self, u):
        """Image of ``u`` in L / vL as a tuple of rationals; requires ``u`` in L."""
        c = self.coefficients(u)
        if c is None or any(x.ord() < 0 for x in c):
            raise ValueError("vector is not in the lattice")
        return tuple(x.value_at_zero() for x in c)

    def combination(self, coeffs):
        out = [ZERO] * self.dim
        for c, vec in zip(coeffs, self.vectors):
            if c:
                out = [a + c * b if b else a for a, b in zip(out, vec)]
        return ModuleVector(self.grade, out)


def lattice_insert(L, u):
    """Returns ``(L', status)`` with status ``"in-L"`` or ``"new-generator"``."""
    if L.contains(u):
        return L, "in-L"
    coords = u.coords if isinstance(u, ModuleVector) else u
    return LatticeBasis.from_generators(L.grade, L.dim, L.vectors + [list(coords)]), "new-generator"


# ---------------------------------------------------------------------------
# crystal graph


@dataclass
class CrystalVertex:
    id: int
    symweight: tuple
    rep: ModuleVector
    eps: dict = field(default_factory=dict)
    residue: tuple = ()

    @property
    def depth(self):
        return sum(self.symweight)


@dataclass
class CrystalGraph:
    indices: tuple
    vertices: list
    f_edges: dict  # (vertex id, i) -> vertex id
    e_edges: dict  # (vertex id, i) -> vertex id or None
    depth: int
    lattices: dict = field(default_factory=dict)
    anomalies: list = field(default_factory=list)
    extrapolated_from: int = None

    def by_weight(self, sw):
        return [b for b in self.vertices if b.symweight == sw]

    def counts_by_depth(self):
        out = [0] * (self.depth + 1)
        for b in self.vertices:
            out[b.depth] += 1
        return out

    def edges(self):
        return sorted(((s, i, t) for (s, i), t in self.f_edges.items()), key=lambda e: (e[0], str(e[1]), e[2]))

    def _wt(self, b):
        return str(b.symweight[0]) if len(b.symweight) == 1 else ",".join(map(str, b.symweight))

    def label(self, b):
        eps = "|".join(f"eps_{i}={b.eps.get(i, 0)}" for i in self.indices)
        return f"b{b.id}|wt={self._wt(b)}|{eps}"

    def to_dot(self, name="crystal"):
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for b in self.vertices:
            lines.append(f'  b{b.id} [label="{self.label(b)}"];')
        for s, i, t in self.edges():
            lines.append(f'  b{s} -> b{t} [label="{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "indices": list(self.indices),
            "depth": self.depth,
            "vertices": [
                {
                    "id": b.id,
                    "label": self.label(b),
                    "symweight": list(b.symweight),
                    "eps": {str(i): b.eps.get(i, 0) for i in self.indices},
                }
                for b in self.vertices
            ],
            "edges": [{"source": s, "index": i, "target": t} for s, i, t in self.edges()],
            "anomalies": list(self.anomalies),
        }


def _residue_key(res):
    return tuple(Fraction(x) for x in res)


def build_crystal(model, depth):
    """Breadth-first construction of the crystal graph from the vacuum up to ``depth``."""
    I = model.letters
    lattices = {}
    vertices = []
    by_sw = {}
    f_edges, e_edges = {}, {}
    anomalies = []

    zero = model.zero_grade
    L0 = LatticeBasis.from_generators(zero, 1, [[ONE]])
    lattices[zero] = L0
    root = CrystalVertex(0, zero, model.vacuum(), residue=L0.residue(model.vacuum()))
    vertices.append(root)
    by_sw[zero] = [root]

    for n in range(1, depth + 1):
        for sw in model.symweights(n):
            dim = model.dim(sw)
            gens = []
            for i in I:
                low = model.shift(sw, i, -1)
                if any(x < 0 for x in low) or low not in lattices:
                    continue
                for vec in lattices[low].vectors:
                    gens.append(tilde_F(i, ModuleVector(low, vec), model).coords)
            L = LatticeBasis.from_generators(sw, dim, gens)
            lattices[sw] = L
            if L.rank != dim:
                anomalies.append({"kind": "lattice rank", "symweight": list(sw), "rank": L.rank, "dim": dim})
            here = []
            for i in I:
                low = model.shift(sw, i, -1)
                if any(x < 0 for x in low):
                    continue
                for src in by_sw.get(low, []):
                    rep = tilde_F(i, src.rep, model)
                    res = L.residue(rep)
                    if not any(res):
                        anomalies.append({"kind": "F-tilde vanishes mod vL", "source": src.id, "i": i})
                        continue
                    key = _residue_key(res)
                    hit = next((b for b in here if _residue_key(b.residue) == key), None)
                    if hit is None:
                        neg = tuple(-x for x in key)
                        if any(_residue_key(b.residue) == neg for b in here):
                            anomalies.append({"kind": "residue is minus an existing vertex", "source": src.id, "i": i})
                        hit = CrystalVertex(len(vertices), sw, rep, residue=res)
                        vertices.append(hit)
                        here.append(hit)
                    f_edges[(src.id, i)] = hit.id
            by_sw[sw] = here

    # E-tilde edges and epsilon
    for b in vertices:
        for i in I:
            u = tilde_E(i, b.rep, model)
            if u is None:
                e_edges[(b.id, i)] = None
                continue
            L = lattices[u.grade]
            if not L.contains(u):
                anomalies.append({"kind": "E-tilde leaves the lattice", "vertex": b.id, "i": i})
                e_edges[(b.id, i)] = None
                continue
            res = L.residue(u)
            if not any(res):
                e_edges[(b.id, i)] = None
                continue
            key = _residue_key(res)
            hit = next((c for c in by_sw.get(u.grade, []) if _residue_key(c.residue) == key), None)
            if hit is None:
                anomalies.append({"kind": "E-tilde residue is not a vertex", "vertex": b.id, "i": i})
            e_edges[(b.id, i)] = hit.id if hit else None
        for i in I:
            b.eps[i] = _epsilon(model, lattices, i, b.rep)
    for a in anomalies:
        log.warning("crystal anomaly: %s", a)
    return CrystalGraph(tuple(I), vertices, f_edges, e_edges, depth, lattices, anomalies)


def _epsilon(model, lattices, i, u):
    count = 0
    while True:
        u = tilde_E(i, u, model)
        if u is None:
            return count
        L = lattices.get(u.grade)
        if L is None or not L.contains(u) or not any(L.residue(u)):
            return count
        count += 1


def verify_crystal(model, graph):
    """Crystal axioms, lattice stability and the residue-basis property."""
    rep = Report(f"crystal ({getattr(model, 'datum', None) and model.datum.name}, depth {graph.depth})")
    I = graph.indices
    D = graph.depth
    rep.add("no construction anomalies", not graph.anomalies, graph.anomalies[:5] or None)

    bad = []
    for b in graph.vertices:
        if b.depth < D:
            for i in I:
                if (b.id, i) not in graph.f_edges:
                    bad.append({"vertex": b.id, "i": i})
    rep.add("every vertex below the top has one outgoing F-tilde edge per index", not bad, bad or None)

    bad = []
    for (s, i), t in graph.f_edges.items():
        if graph.e_edges.get((t, i)) != s:
            bad.append({"vertex": s, "i": i, "f": t, "e(f)": graph.e_edges.get((t, i))})
    rep.add("E-tilde F-tilde = id on vertices", not bad, bad or None)

    bad = []
    for (s, i), t in graph.e_edges.items():
        if t is not None and graph.f_edges.get((t, i)) != s:
            bad.append({"vertex": s, "i": i})
    rep.add("F-tilde E-tilde b = b whenever E-tilde b != 0", not bad, bad or None)

    bad = []
    for b in graph.vertices:
        for i in I:
            cur, steps = b.id, 0
            while graph.e_edges.get((cur, i)) is not None:
                cur = graph.e_edges[(cur, i)]
                steps += 1
            if steps != b.eps[i]:
                bad.append({"vertex": b.id, "i": i, "eps": b.eps[i], "string length": steps})
    rep.add("eps_i(b) = max{n : E-tilde^n b != 0}", not bad, bad or None)

    bad_e, bad_f = [], []
    for sw, L in graph.lattices.items():
        for vec in L.vectors:
            u = ModuleVector(sw, vec)
            for i in I:
                e = tilde_E(i, u, model)
                if e is not None and not graph.lattices[e.grade].contains(e):
                    bad_e.append({"symweight": list(sw), "i": i})
                if sum(sw) < D:
                    f = tilde_F(i, u, model)
                    if not graph.lattices[f.grade].contains(f):
                        bad_f.append({"symweight": list(sw), "i": i})
    rep.add("E-tilde preserves the lattice", not bad_e, bad_e or None)
    rep.add("F-tilde preserves the lattice", not bad_f, bad_f or None)

    bad = []
    for sw, L in graph.lattices.items():
        dim = model.dim(sw)
        res = [list(b.residue) for b in graph.by_weight(sw)]
        r = rank(res) if res and res[0] else 0
        if L.rank != dim or len(res) != dim or r != dim:
            bad.append({"symweight": list(sw), "dim": dim, "vertices": len(res), "rank": r, "lattice rank": L.rank})
    rep.add("vertex residues form a basis of L/vL in every weight space", not bad, bad or None)
    return rep


# ---------------------------------------------------------------------------
# criterion for a family of generators


@dataclass
class CriterionInput:
    """Data for one index i: eps, crystal maps and the E/F expansion coefficients."""

    vertices: list
    eps: dict  # b -> eps_i(b)
    f_tilde: dict  # b -> f-tilde b (absent when outside the computed range)
    e_tilde: dict  # b -> e-tilde b or None
    E: dict  # b -> {b': coefficient}
    F: dict  # b -> {b': coefficient}
    label: str = ""


def criterion_check(data: CriterionInput):
    """Evaluate the six valuation conditions for every pair (b, b')."""
    rep = Report(f"crystal criterion {data.label}".strip())
    fails = {k: [] for k in range(1, 7)}
    counts = {k: 0 for k in range(1, 7)}
    for b in data.vertices:
        ell = data.eps[b]
        for bp, c in data.F.get(b, {}).items():
            if not c:
                continue
            lp = data.eps[bp]
            counts[1] += 1
            if c.ord() < 1 - lp:
                fails[1].append({"b": b, "b'": bp, "coeff": str(c), "ord": c.ord(), "bound": 1 - lp})
            if ell < lp and bp != data.f_tilde.get(b):
                counts[5] += 1
                if not c.ord() > 1 - lp:
                    fails[5].append({"b": b, "b'": bp, "coeff": str(c)})
        for bp, c in data.E.get(b, {}).items():
            if not c:
                continue
            lp = data.eps[bp]
            counts[2] += 1
            if c.ord() < -lp:
                fails[2].append({"b": b, "b'": bp, "coeff": str(c), "ord": c.ord(), "bound": -lp})
            if ell < lp + 1 and bp != data.e_tilde.get(b):
                counts[6] += 1
                if not c.ord() > -lp:
                    fails[6].append({"b": b, "b'": bp, "coeff": str(c)})
        fb = data.f_tilde.get(b)
        if fb is not None:
            counts[3] += 1
            c = data.F.get(b, {}).get(fb, ZERO)
            if not c or not in_one_plus_vA0(c, -ell):
                fails[3].append({"b": b, "f~b": fb, "coeff": str(c)})
        eb = data.e_tilde.get(b)
        if eb is not None:
            counts[4] += 1
            c = data.E.get(b, {}).get(eb, ZERO)
            if not c or not in_one_plus_vA0(c, 1 - ell):
                fails[4].append({"b": b, "e~b": eb, "coeff": str(c)})
    names = {
        1: "ord F(b,b') >= 1 - eps(b')",
        2: "ord E(b,b') >= -eps(b')",
        3: "F(b, f~b) in v^-eps(b) (1 + v A_0)",
        4: "E(b, e~b) in v^(1-eps(b)) (1 + v A_0)",
        5: "ord F(b,b') > 1 - eps(b') when eps(b) < eps(b') and b' != f~b",
        6: "ord E(b,b') > -eps(b') when eps(b) < eps(b') + 1 and b' != e~b",
    }
    for k in range(1, 7):
        rep.add(f"({k}) {names[k]} [{counts[k]} cases]", not fails[k], fails[k][:5] or None)
    return rep
