"""Bar involution, lower global basis, balancedness and the estimate checks.

Every F-word applied to the vacuum is bar-invariant, so bar acts on pivot-word
coordinates coefficient by coefficient.

G(b) is found weight by weight.  The integral form is spanned by the
divided-power generators ``F_i^(a) G(b')`` with ``b'`` of lower weight; we
look for a combination with bar-symmetric Laurent coefficients supported in
``[-D, D]`` whose lattice coordinates are regular at ``v = 0`` with residue
``b``.  This is a linear system over Q in the Laurent coefficients.  ``D`` is
raised in steps of two until the system is solvable, and every solution of
the homogeneous system is required to give the zero vector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .coeffs import ONE, ZERO, RationalFunction, monomial, qbinom_rf, qint_rf
from .crystal import CriterionInput, criterion_check
from .linalg import det, inverse, matvec, nullspace, rank, solve
from .report import Report
from ._boson import ModuleVector

log = logging.getLogger(__name__)

__all__ = [
    "GlobalBasisError",
    "GlobalBasisTable",
    "bar_vector",
    "solve_global",
    "compute_global_basis",
    "verify_global",
    "verify_estimates",
    "verify_balanced",
    "verify_divided_power_lemma",
    "adapted_path",
    "adapted_monomial",
    "verify_adapted_monomials",
    "criterion_inputs",
    "run_criterion",
]


class GlobalBasisError(RuntimeError):
    pass


def bar_vector(u):
    """Coefficient-wise bar in pivot-word coordinates."""
    return u.bar()


def _sym_laurent(coeffs):
    """sum_e x_e (v^e + v^-e), with the e = 0 term counted once."""
    terms = {}
    for e, x in enumerate(coeffs):
        if x:
            terms[e] = terms.get(e, 0) + x
            if e:
                terms[-e] = terms.get(-e, 0) + x
    out = ZERO
    for e, x in terms.items():
        out = out + monomial(e, x)
    return out


@dataclass
class GlobalBasisTable:
    model: object
    graph: object
    depth: int
    G: dict = field(default_factory=dict)  # vertex id -> ModuleVector
    solve_D: dict = field(default_factory=dict)  # symweight -> D used
    generators: dict = field(default_factory=dict)  # symweight -> [((i, a, b'), ModuleVector)]
    _ginv: dict = field(default_factory=dict)

    def vertices_at(self, sw):
        return [b.id for b in self.graph.by_weight(sw)]

    def vertex(self, b):
        return self.graph.vertices[b]

    def expand(self, u):
        """Coordinates of ``u`` in the basis {G(b)} of its weight space, as {b: coefficient}."""
        sw = u.grade
        ids = self.vertices_at(sw)
        inv = self._ginv.get(sw)
        if inv is None:
            mat = [[self.G[b].coords[r] for b in ids] for r in range(self.model.dim(sw))]
            inv = inverse(mat) if mat else []
            self._ginv[sw] = inv
        c = matvec(inv, u.coords) if inv else []
        return {b: x for b, x in zip(ids, c) if x}

    def to_json(self):
        out = []
        for b in self.graph.vertices:
            if b.id not in self.G:
                continue
            piece = self.model.piece(b.symweight)
            g = self.G[b.id]
            entry = {
                "id": b.id,
                "label": self.graph.label(b),
                "symweight": list(b.symweight),
                "G": {" ".join(map(str, w)) or "vac": c.to_json() for w, c in zip(piece.words, g.coords) if c},
                "E": {},
                "F": {},
            }
            for i in self.model.letters:
                e = self.model.apply_E(i, g)
                if e is not None and e.grade in self.solve_D:
                    entry["E"][str(i)] = {str(k): c.to_json() for k, c in sorted(self.expand(e).items())}
                if b.depth < self.depth:
                    f = self.model.apply_F(i, g)
                    entry["F"][str(i)] = {str(k): c.to_json() for k, c in sorted(self.expand(f).items())}
            out.append(entry)
        return {"depth": self.depth, "degree_bounds": {",".join(map(str, k)): v for k, v in sorted(self.solve_D.items())}, "vertices": out}


def _generators(table, sw):
    model = table.model
    gens = []
    for i in model.letters:
        a = 1
        while True:
            low = sw
            for _ in range(a):
                low = model.shift(low, i, -1)
            if any(x < 0 for x in low):
                break
            for bp in table.vertices_at(low):
                gens.append(((i, a, bp), model.apply_divided_F(i, a, table.G[bp])))
            a += 1
    return gens


def _system(lat_coords, D, dim_lat):
    """Matrix rows indexed by (lattice coordinate k, exponent m <= 0); columns by (generator j, e)."""
    ords = [c.ord() for col in lat_coords for c in col if c]
    if not ords:
        return [], []
    mlo = min(min(ords) - D, 0)
    series = []
    for col in lat_coords:
        s = []
        for c in col:
            lo = c.ord() if c else 0
            s.append((lo, c.series(lo, D) if c else []))
        series.append(s)

    def coef(j, k, t):
        lo, vals = series[j][k]
        idx = t - lo
        if 0 <= idx < len(vals):
            return vals[idx]
        return Fraction(0)

    rows, keys = [], []
    ncols = len(lat_coords) * (D + 1)
    for k in range(dim_lat):
        for m in range(mlo, 1):
            row = [Fraction(0)] * ncols
            nz = False
            for j in range(len(lat_coords)):
                if not lat_coords[j][k]:
                    continue
                for e in range(D + 1):
                    x = coef(j, k, m - e)
                    if e:
                        x = x + coef(j, k, m + e)
                    if x:
                        row[j * (D + 1) + e] = x
                        nz = True
            if nz or m == 0:
                rows.append(row)
                keys.append((k, m))
    return rows, keys


def solve_global(table, sw, dmax):
    """Compute G(b) for every vertex b of symweight ``sw``; lower weights must be done."""
    model, graph = table.model, table.graph
    ids = table.vertices_at(sw)
    if sum(sw) == 0:
        for b in ids:
            table.G[b] = model.vacuum()
        table.solve_D[sw] = 0
        table.generators[sw] = []
        return
    L = graph.lattices[sw]
    gens = _generators(table, sw)
    table.generators[sw] = gens
    lat = []
    for _, m in gens:
        c = L.coefficients(m)
        if c is None:
            raise GlobalBasisError(f"generator outside the lattice span at {sw}")
        lat.append(c)
    D = sum(sw)
    while D <= dmax:
        A, keys = _system(lat, D, L.rank)
        sols = {}
        ok = True
        for b in ids:
            res = graph.vertices[b].residue
            rhs = [Fraction(res[k]) if m == 0 else Fraction(0) for k, m in keys]
            x = solve(A, rhs) if A else None
            if x is None:
                ok = False
                break
            sols[b] = x
        if ok:
            break
        log.info("symweight %s: no solution with D=%d, escalating", sw, D)
        D += 2
    else:
        raise GlobalBasisError(f"no bar-invariant lift found at symweight {sw} with degree bound {dmax}")

    def vector(x):
        out = [ZERO] * model.dim(sw)
        for j, (_, m) in enumerate(gens):
            c = _sym_laurent(x[j * (D + 1):(j + 1) * (D + 1)])
            if c:
                out = [a + c * y if y else a for a, y in zip(out, m.coords)]
        return ModuleVector(sw, out)

    for x in nullspace(A, len(gens) * (D + 1)) if A else []:
        if not vector(x).is_zero():
            raise GlobalBasisError(f"lift at symweight {sw} is not unique for D={D}")
    for b, x in sols.items():
        table.G[b] = vector(x)
    table.solve_D[sw] = D


def compute_global_basis(model, graph, depth, dmax=None):
    dmax = depth + 8 if dmax is None else dmax
    if dmax < depth:
        raise ValueError("dmax must be at least the depth")
    table = GlobalBasisTable(model, graph, depth)
    for n in range(depth + 1):
        for sw in model.symweights(n):
            if table.vertices_at(sw):
                solve_global(table, sw, dmax)
    return table


# ---------------------------------------------------------------------------
# checks


def _is_int_laurent(c):
    return c.is_integral_laurent()


def verify_bar_structure(model, depth):
    rep = Report("bar structure")
    bad = []
    for sw in model.all_symweights(depth - 1 if depth else 0):
        for i in model.letters:
            if sum(sw) + 1 > depth:
                continue
            M = model.F_matrix(i, sw)
            if any(x.bar() != x for row in M for x in row):
                bad.append({"i": i, "symweight": list(sw)})
    rep.add("F-matrices in pivot-word coordinates are bar-invariant", not bad, bad or None)
    return rep


def verify_global(table):
    """bar-invariance, lattice membership, residues and integrality of {G(b)}."""
    model, graph = table.model, table.graph
    rep = Report(f"global basis ({model.datum.name}, depth {table.depth})")
    rep.extend(verify_bar_structure(model, table.depth))
    bad_bar, bad_L, bad_barL, bad_res = [], [], [], []
    for b in graph.vertices:
        if b.id not in table.G:
            continue
        g = table.G[b.id]
        L = graph.lattices[b.symweight]
        if bar_vector(g) != g:
            bad_bar.append(b.id)
        if not L.contains(g):
            bad_L.append(b.id)
        elif tuple(L.residue(g)) != tuple(b.residue):
            bad_res.append(b.id)
        if not L.contains(bar_vector(g)):
            bad_barL.append(b.id)
    rep.add("bar G(b) = G(b)", not bad_bar, bad_bar or None)
    rep.add("G(b) lies in L", not bad_L, bad_L or None)
    rep.add("G(b) lies in bar(L)", not bad_barL, bad_barL or None)
    rep.add("G(b) = b mod vL", not bad_res, bad_res or None)

    bad = []
    for sw, gens in table.generators.items():
        for (i, a, bp), m in gens:
            for k, c in table.expand(m).items():
                if not _is_int_laurent(c):
                    bad.append({"generator": [i, a, bp], "G": k, "coeff": str(c)})
    rep.add("divided-power generators expand over {G(b)} with Z[v,v^-1] coefficients", not bad, bad[:5] or None)

    bad = []
    for b in graph.vertices:
        g = table.G[b.id]
        for i in model.letters:
            e = model.apply_E(i, g)
            if e is not None:
                for k, c in table.expand(e).items():
                    if not _is_int_laurent(c):
                        bad.append({"op": f"E_{i}", "b": b.id, "b'": k, "coeff": str(c)})
            if b.depth < table.depth:
                for k, c in table.expand(model.apply_F(i, g)).items():
                    if not _is_int_laurent(c):
                        bad.append({"op": f"F_{i}", "b": b.id, "b'": k, "coeff": str(c)})
    rep.add("E_i G(b) and F_i G(b) expand with Z[v,v^-1] coefficients", not bad, bad[:5] or None)
    rep.extend(verify_adapted_monomials(table))
    return rep


def verify_estimates(table):
    """Leading terms and support/valuation bounds for F_i G(b) and E_i G(b)."""
    model, graph = table.model, table.graph
    rep = Report(f"estimates ({model.datum.name}, depth {table.depth})")
    fail_fl, fail_fr, fail_el, fail_er = [], [], [], []
    nf = ne = 0
    for b in graph.vertices:
        g = table.G[b.id]
        for i in model.letters:
            eps = b.eps[i]
            if b.depth < table.depth:
                nf += 1
                exp = table.expand(model.apply_F(i, g))
                ft = graph.f_edges[(b.id, i)]
                lead = exp.get(ft, ZERO)
                if lead != qint_rf(eps + 1):
                    fail_fl.append({"b": b.id, "i": i, "f~b": ft, "coeff": str(lead), "expected": str(qint_rf(eps + 1))})
                for bp, c in exp.items():
                    if bp == ft:
                        continue
                    ep = graph.vertices[bp].eps[i]
                    okay = ep > eps + 1 and c.is_integral_laurent() and c.ord() >= 2 - ep and c.bar() == c
                    if not okay:
                        fail_fr.append({"b": b.id, "i": i, "b'": bp, "eps'": ep, "coeff": str(c)})
            e = model.apply_E(i, g)
            if e is None:
                continue
            ne += 1
            exp = table.expand(e)
            et = graph.e_edges.get((b.id, i))
            if et is not None:
                lead = exp.get(et, ZERO)
                if lead != monomial(1 - eps):
                    fail_el.append({"b": b.id, "i": i, "e~b": et, "coeff": str(lead), "expected": str(monomial(1 - eps))})
            for bp, c in exp.items():
                if bp == et:
                    continue
                ep = graph.vertices[bp].eps[i]
                okay = ep > eps - 1 and c.is_integral_laurent() and c.ord() >= 1 - ep
                if not okay:
                    fail_er.append({"b": b.id, "i": i, "b'": bp, "eps'": ep, "coeff": str(c)})
    rep.add(f"F_i G(b) has coefficient [eps+1] on G(f~b) [{nf} cases]", not fail_fl, fail_fl[:5] or None)
    rep.add("other F_i G(b) terms: eps' > eps+1, coefficient in v^(2-eps') Z[v], bar-symmetric", not fail_fr, fail_fr[:5] or None)
    rep.add(f"E_i G(b) has coefficient v^(1-eps) on G(e~b) [{ne} cases]", not fail_el, fail_el[:5] or None)
    rep.add("other E_i G(b) terms: eps' > eps-1, coefficient in v^(1-eps') Z[v]", not fail_er, fail_er[:5] or None)
    return rep


def verify_divided_power_lemma(table, amax=None):
    """F_i^(a) G(b) = [eps+a choose a] G(f~^a b) + terms with eps' > eps + a and Z[v,v^-1] coefficients."""
    model, graph = table.model, table.graph
    rep = Report(f"divided-power expansion ({model.datum.name})")
    bad = []
    count = 0
    for b in graph.vertices:
        for i in model.letters:
            eps = b.eps[i]
            a = 1
            while b.depth + a <= table.depth and (amax is None or a <= amax):
                count += 1
                exp = table.expand(model.apply_divided_F(i, a, table.G[b.id]))
                tgt = b.id
                for _ in range(a):
                    tgt = graph.f_edges[(tgt, i)]
                if exp.get(tgt, ZERO) != qbinom_rf(eps + a, a):
                    bad.append({"b": b.id, "i": i, "a": a, "coeff": str(exp.get(tgt, ZERO))})
                for bp, c in exp.items():
                    if bp != tgt and not (graph.vertices[bp].eps[i] > eps + a and c.is_integral_laurent()):
                        bad.append({"b": b.id, "i": i, "a": a, "b'": bp, "coeff": str(c)})
                a += 1
    rep.add(f"F_i^(a) G(b) leading binomial and eps-larger integral remainder [{count} cases]", not bad, bad[:5] or None)
    return rep


def verify_balanced(table, drop=None, scale=None):
    """Residue-basis and A_0-unimodularity checks; ``drop``/``scale`` corrupt the family for negative controls.

    ``drop`` is a vertex id to omit, ``scale`` a pair (vertex id, RationalFunction).
    """
    model, graph = table.model, table.graph
    rep = Report(f"balanced triple ({model.datum.name}, depth {table.depth})")
    fam = dict(table.G)
    if drop is not None:
        fam.pop(drop, None)
    if scale is not None:
        b, c = scale
        fam[b] = c * fam[b]
    bad_res, bad_unit, bad_bar = [], [], []
    for n in range(table.depth + 1):
        for sw in model.symweights(n):
            dim = model.dim(sw)
            if not dim:
                continue
            L = graph.lattices[sw]
            ids = [b for b in table.vertices_at(sw) if b in fam]
            inL = [b for b in ids if L.contains(fam[b])]
            residues = [list(L.residue(fam[b])) for b in inL]
            r = rank(residues) if residues else 0
            if len(ids) != dim or len(inL) != dim or r != dim:
                bad_res.append({"symweight": list(sw), "dim": dim, "family": len(ids), "in L": len(inL), "residue rank": r})
            notbar = [b for b in ids if not L.contains(bar_vector(fam[b]))]
            if notbar:
                bad_bar.append({"symweight": list(sw), "vertices": notbar})
            if len(ids) == dim and len(inL) == dim:
                T = [[L.coefficients(fam[b])[k] for b in ids] for k in range(L.rank)]
                d = det(T)
                if not d or d.ord() != 0:
                    bad_unit.append({"symweight": list(sw), "det": str(d)})
            else:
                bad_unit.append({"symweight": list(sw), "reason": "family is not square inside L"})
    rep.add("residues of G(b) form a basis of L/vL", not bad_res, bad_res[:5] or None)
    rep.add("G(b) lies in bar(L)", not bad_bar, bad_bar[:5] or None)
    rep.add("transition from the lattice basis to {G(b)} is invertible over A_0", not bad_unit, bad_unit[:5] or None)
    return rep


def adapted_path(b, graph):
    """[(i_1, a_1), ..., (i_m, a_m)] with b = f~_{i_1}^{a_1} ... f~_{i_m}^{a_m} vacuum."""
    path = []
    cur = graph.vertices[b] if isinstance(b, int) else b
    while cur.depth > 0:
        i = max(graph.indices, key=lambda j: (cur.eps[j], -graph.indices.index(j)))
        a = cur.eps[i]
        if a == 0:
            raise ValueError(f"vertex {cur.id} has no nonzero eps but positive depth")
        path.append((i, a))
        nid = cur.id
        for _ in range(a):
            nid = graph.e_edges[(nid, i)]
        cur = graph.vertices[nid]
    return path


def adapted_monomial(b, model, graph):
    u = model.vacuum()
    for i, a in reversed(adapted_path(b, graph)):
        u = model.apply_divided_F(i, a, u)
    return u


def verify_adapted_monomials(table):
    model, graph = table.model, table.graph
    rep = Report("adapted monomials")
    bad_span, bad_int, bad_diag = [], [], []
    for n in range(table.depth + 1):
        for sw in model.symweights(n):
            ids = table.vertices_at(sw)
            if not ids:
                continue
            mons = {b: adapted_monomial(b, model, graph) for b in ids}
            r = rank([list(m.coords) for m in mons.values()])
            if r != model.dim(sw):
                bad_span.append({"symweight": list(sw), "rank": r, "dim": model.dim(sw)})
                continue
            T = []
            for b in ids:
                exp = table.expand(mons[b])
                if exp.get(b, ZERO) != ONE:
                    bad_diag.append({"b": b, "coeff": str(exp.get(b, ZERO))})
                for k, c in exp.items():
                    if not c.is_integral_laurent():
                        bad_int.append({"b": b, "b'": k, "coeff": str(c)})
                T.append([exp.get(k, ZERO) for k in ids])
            d = det(T)
            if not (d.is_integral_laurent() and len(d.num) == 1 and abs(d.num[0]) == 1):
                bad_int.append({"symweight": list(sw), "det": str(d)})
    rep.add("adapted monomials span every weight space", not bad_span, bad_span or None)
    rep.add("adapted monomial M(b) has coefficient 1 on G(b)", not bad_diag, bad_diag[:5] or None)
    rep.add("transition between adapted monomials and {G(b)} is unimodular over Z[v,v^-1]", not bad_int, bad_int[:5] or None)
    return rep


def criterion_inputs(table, perturb=None):
    """One CriterionInput per index, built from the E/F expansions of {G(b)}."""
    model, graph = table.model, table.graph
    out = []
    for i in model.letters:
        verts = [b.id for b in graph.vertices]
        eps = {b.id: b.eps[i] for b in graph.vertices}
        f_t = {b.id: graph.f_edges[(b.id, i)] for b in graph.vertices if (b.id, i) in graph.f_edges}
        e_t = {b.id: graph.e_edges.get((b.id, i)) for b in graph.vertices}
        E, F = {}, {}
        for b in graph.vertices:
            g = table.G[b.id]
            e = model.apply_E(i, g)
            E[b.id] = table.expand(e) if e is not None else {}
            if b.depth < table.depth:
                F[b.id] = table.expand(model.apply_F(i, g))
        data = CriterionInput(verts, eps, f_t, e_t, E, F, label=f"i={i}")
        if perturb:
            data = perturb(data)
        out.append(data)
    return out


def run_criterion(table, perturb=None):
    rep = Report(f"criterion ({table.model.datum.name}, depth {table.depth})")
    for data in criterion_inputs(table, perturb):
        rep.extend(criterion_check(data))
    return rep
