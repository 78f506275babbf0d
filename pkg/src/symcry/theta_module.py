"""The module V_theta(lambda) over B_theta(g), realised as F-words modulo the form radical.

Grading is by symweight.  ``E_i`` straightens past ``F_j`` with an extra
``T_i`` term when ``j = theta(i)``; ``T_i`` acts on every F-word of a given
symweight by the same power of ``v``.
"""

from __future__ import annotations

import itertools
import logging

from .cartan import CartanDatum
from .coeffs import ONE, ZERO, monomial, qfact_rf, qint_rf
from .linalg import madd, matmul, mequal, mscale, msub, rank, transpose, zeros
from .report import Report
from ._boson import BosonModule, ModuleVector

log = logging.getLogger(__name__)

__all__ = [
    "ThetaModule",
    "ModuleVector",
    "apply_E",
    "contravariant_form",
    "build_weight_space",
    "divided_F",
    "verify_relations",
    "highest_weight_check",
    "verify_adjointness",
    "verify_divided_powers",
    "serre_exponent",
]


def serre_exponent(datum, i, j):
    return 1 - datum.pair(i, j)


class ThetaModule(BosonModule):
    """V_theta(lambda) for a validated Cartan datum with involution."""

    def __init__(self, datum: CartanDatum, depth=None):
        self.datum = datum
        self.depth = depth

        def extra(i, j, sw):
            val = ZERO
            if i == j:
                val = val + ONE
            if datum.th(i) == j:
                val = val + monomial(datum.t_exponent(i, sw))
            return val

        super().__init__(
            datum.indices,
            datum.gamma,
            lambda i, j: monomial(-datum.pair(i, j)),
            extra,
        )

    # symweight enumeration ----------------------------------------------------
    def symweights(self, n):
        """All symweights of total depth n, in lexicographic order."""
        k = len(self.zero_grade)
        out = [sw for sw in itertools.product(range(n + 1), repeat=k) if sum(sw) == n]
        return sorted(out)

    def all_symweights(self, depth=None):
        depth = self.depth if depth is None else depth
        return [sw for n in range(depth + 1) for sw in self.symweights(n)]

    def build(self, depth=None):
        """Force every weight space up to ``depth``; returns {symweight: piece}."""
        return {sw: self.piece(sw) for sw in self.all_symweights(depth)}

    def dims_by_depth(self, depth=None):
        depth = self.depth if depth is None else depth
        return [sum(self.dim(sw) for sw in self.symweights(n)) for n in range(depth + 1)]

    # extra operators ----------------------------------------------------------
    def T_scalar(self, i, sw):
        return monomial(self.datum.t_exponent(i, sw))

    def divided_F_matrix(self, i, a, sw):
        """Matrix of F_i^(a) on symweight ``sw``."""
        n = self.dim(sw)
        M = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
        cur = sw
        for _ in range(a):
            M = _mul(self.F_matrix(i, cur), M, self.dim(self.shift(cur, i)), n)
            cur = self.shift(cur, i)
        if a > 1:
            M = mscale(qfact_rf(a).inverse(), M)
        return M

    def E_power_matrix(self, i, a, sw):
        n = self.dim(sw)
        M = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
        cur = sw
        for _ in range(a):
            nxt = self.shift(cur, i, -1)
            if any(x < 0 for x in nxt):
                return None
            M = _mul(self.E_matrix(i, cur), M, self.dim(nxt), n)
            cur = nxt
        return M

    def apply_divided_F(self, i, a, u):
        M = self.divided_F_matrix(i, a, u.grade)
        w = u.grade
        for _ in range(a):
            w = self.shift(w, i)
        return ModuleVector(w, [sum((x * y for x, y in zip(row, u.coords) if x and y), ZERO) for row in M])

    def weight_space(self, sw):
        return self.piece(sw)


def _mul(A, B, rows, cols):
    """Matrix product that tolerates empty factors."""
    if rows == 0:
        return []
    if not B or not A or not A[0]:
        return zeros(rows, cols)
    return matmul(A, B)


# ---------------------------------------------------------------------------
# free-module level operations


def apply_E(i, u, model):
    """E_i on a free combination {word: coefficient} of F-words applied to the vacuum."""
    out = {}
    for word, c in u.items():
        for w2, d in model.free_E(i, word).items():
            out[w2] = out.get(w2, ZERO) + c * d
    return {w: c for w, c in out.items() if c}


def contravariant_form(w1, w2, model):
    return model.free_form(w1, w2)


def build_weight_space(sw, model):
    return model.piece(sw)


def divided_F(i, a, u, model):
    if a < 0:
        raise ValueError("divided power needs a >= 0")
    return model.apply_divided_F(i, a, u)


# ---------------------------------------------------------------------------
# verification


def _fits(model, sw, depth):
    return sw is not None and all(x >= 0 for x in sw) and sum(sw) <= depth


def verify_relations(model, depth, perturb=None):
    """Check every defining relation of B_theta(g) as matrix identities.

    ``perturb`` is a hook for negative controls: a callable receiving
    ``(kind, i, sw, matrix)`` and returning the matrix to use.
    """
    d = model.datum
    I = d.indices
    rep = Report(f"B_theta relations ({d.name}, depth {depth})")

    def F(i, sw):
        M = model.F_matrix(i, sw)
        return perturb("F", i, sw, M) if perturb else M

    def E(i, sw):
        M = model.E_matrix(i, sw)
        return perturb("E", i, sw, M) if perturb else M

    def Fdiv(i, a, sw):
        M = model.divided_F_matrix(i, a, sw)
        if perturb and a >= 1:
            # rebuild from possibly perturbed single steps
            n = model.dim(sw)
            M = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
            cur = sw
            for _ in range(a):
                M = _mul(F(i, cur), M, model.dim(model.shift(cur, i)), n)
                cur = model.shift(cur, i)
            if a > 1:
                M = mscale(qfact_rf(a).inverse(), M)
        return M

    def Epow_div(i, a, sw):
        n = model.dim(sw)
        M = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
        cur = sw
        for _ in range(a):
            nxt = model.shift(cur, i, -1)
            if any(x < 0 for x in nxt):
                return zeros(0, n)
            M = _mul(E(i, cur), M, model.dim(nxt), n)
            cur = nxt
        if a > 1:
            M = mscale(qfact_rf(a).inverse(), M)
        return M

    sws = model.all_symweights(depth)
    bad_comm, bad_t, bad_fs, bad_es = [], [], [], []
    n_comm = n_t = n_fs = n_es = 0
    for sw in sws:
        n = model.dim(sw)
        if n == 0:
            continue
        for i in I:
            for j in I:
                up = model.shift(sw, j)
                tgt = model.shift(up, i, -1)
                if not _fits(model, up, depth):
                    continue
                m = model.dim(tgt)
                lhs = _mul(E(i, up), F(j, sw), m, n)
                down = model.shift(sw, i, -1)
                if all(x >= 0 for x in down):
                    rhs = _mul(F(j, down), E(i, sw), m, n)
                    lhs = msub(lhs, mscale(model.q(i, j), rhs)) if rhs else lhs
                scal = ZERO
                if i == j:
                    scal = scal + ONE
                if d.th(i) == j:
                    scal = scal + model.T_scalar(i, sw)
                expect = [[scal if r == c else ZERO for c in range(n)] for r in range(m)] if tgt == sw else zeros(m, n)
                n_comm += 1
                if not mequal(lhs, expect):
                    bad_comm.append({"i": i, "j": j, "symweight": list(sw)})
        # T relations: T_theta(i) = T_i and the conjugation scalars
        for i in I:
            n_t += 1
            if model.T_scalar(i, sw) != model.T_scalar(d.th(i), sw):
                bad_t.append({"rule": "T_theta(i)=T_i", "i": i, "symweight": list(sw)})
            for j in I:
                up = model.shift(sw, j)
                if _fits(model, up, depth) and model.dim(up):
                    ratio = model.T_scalar(i, up) * model.T_scalar(i, sw).inverse()
                    want = monomial(-(d.pair(i, j) + d.pair(d.th(i), j)))
                    Fm = F(j, sw)
                    n_t += 1
                    if not mequal(mscale(ratio, Fm), mscale(want, model.F_matrix(j, sw))):
                        bad_t.append({"rule": "T F T^-1", "i": i, "j": j, "symweight": list(sw)})
                down = model.shift(sw, j, -1)
                if all(x >= 0 for x in down) and model.dim(down):
                    ratio = model.T_scalar(i, down) * model.T_scalar(i, sw).inverse()
                    want = monomial(d.pair(i, j) + d.pair(d.th(i), j))
                    n_t += 1
                    if not mequal(mscale(ratio, E(j, sw)), mscale(want, model.E_matrix(j, sw))):
                        bad_t.append({"rule": "T E T^-1", "i": i, "j": j, "symweight": list(sw)})
        # Serre relations
        for i in I:
            for j in I:
                if i == j:
                    continue
                b = serre_exponent(d, i, j)
                tgt = sw
                for _ in range(b):
                    tgt = model.shift(tgt, i)
                tgt = model.shift(tgt, j)
                if _fits(model, tgt, depth):
                    m = model.dim(tgt)
                    acc = zeros(m, n)
                    for k in range(b + 1):
                        mid1 = sw
                        for _ in range(b - k):
                            mid1 = model.shift(mid1, i)
                        mid2 = model.shift(mid1, j)
                        A = Fdiv(i, b - k, sw)
                        B = F(j, mid1)
                        C = Fdiv(i, k, mid2)
                        term = _mul(C, _mul(B, A, model.dim(mid2), n), m, n)
                        acc = madd(acc, term) if k % 2 == 0 else msub(acc, term)
                    n_fs += 1
                    if any(x for row in acc for x in row):
                        bad_fs.append({"i": i, "j": j, "symweight": list(sw)})
                low = sw
                for _ in range(b):
                    low = model.shift(low, i, -1)
                low = model.shift(low, j, -1)
                if all(x >= 0 for x in low):
                    m = model.dim(low)
                    acc = zeros(m, n)
                    for k in range(b + 1):
                        A = Epow_div(i, b - k, sw)
                        mid1 = sw
                        for _ in range(b - k):
                            mid1 = model.shift(mid1, i, -1)
                        mid2 = model.shift(mid1, j, -1)
                        B = E(j, mid1) if model.dim(mid1) else zeros(model.dim(mid2), 0)
                        C = Epow_div(i, k, mid2)
                        term = _mul(C, _mul(B, A, model.dim(mid2), n), m, n)
                        acc = madd(acc, term) if k % 2 == 0 else msub(acc, term)
                    n_es += 1
                    if any(x for row in acc for x in row):
                        bad_es.append({"i": i, "j": j, "symweight": list(sw)})
    rep.add(f"E_iF_j - v^-(a_i,a_j) F_jE_i = delta_ij + delta_(theta i, j) T_i [{n_comm} cases]", not bad_comm, bad_comm[:5] or None)
    rep.add(f"T relations [{n_t} cases]", not bad_t, bad_t[:5] or None)
    rep.add(f"F-Serre relations [{n_fs} cases]", not bad_fs, bad_fs[:5] or None)
    rep.add(f"E-Serre relations [{n_es} cases]", not bad_es, bad_es[:5] or None)
    return rep


def _eye(n):
    return [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]


def verify_adjointness(model, depth):
    """(E_i u, w) = (u, F_i w) and Gram symmetry on every adjacent pair of weight spaces."""
    rep = Report(f"contravariant form ({model.datum.name}, depth {depth})")
    bad_sym, bad_adj = [], []
    for sw in model.all_symweights(depth):
        P = model.piece(sw)
        if not mequal(P.cand_gram, transpose(P.cand_gram) if P.cand_gram else []):
            bad_sym.append(list(sw))
        if P.dim and rank(P.gram) != P.dim:
            bad_sym.append({"singular pivot gram": list(sw)})
        for i in model.letters:
            low = model.shift(sw, i, -1)
            if any(x < 0 for x in low) or not P.dim or not model.dim(low):
                continue
            G_low = model.piece(low).gram
            lhs = matmul(transpose(model.E_matrix(i, sw)), G_low)  # (E u, w) as u^T E^T G_low w
            rhs = matmul(P.gram, model.F_matrix(i, low))  # (u, F w) as u^T G F w
            if not mequal(lhs, rhs):
                bad_adj.append({"i": i, "symweight": list(sw)})
    rep.add("Gram matrices symmetric and pivot Gram nonsingular", not bad_sym, bad_sym or None)
    rep.add("E_i adjoint to F_i", not bad_adj, bad_adj or None)
    return rep


def verify_divided_powers(model, depth, amax=3):
    """F_i F_i^(a) = F_i^(a) F_i = [a+1] F_i^(a+1) as matrices."""
    rep = Report(f"divided powers ({model.datum.name}, depth {depth})")
    bad = []
    count = 0
    for sw in model.all_symweights(depth):
        n = model.dim(sw)
        if not n:
            continue
        for i in model.letters:
            for a in range(amax + 1):
                if sum(sw) + a + 1 > depth:
                    break
                top = sw
                for _ in range(a + 1):
                    top = model.shift(top, i)
                m = model.dim(top)
                mid = top
                mid = model.shift(mid, i, -1)
                Fa = model.divided_F_matrix(i, a, sw)
                lhs1 = _mul(model.F_matrix(i, mid), Fa, m, n)
                lhs2 = _mul(model.divided_F_matrix(i, a, model.shift(sw, i)), model.F_matrix(i, sw), m, n)
                rhs = mscale(qint_rf(a + 1), model.divided_F_matrix(i, a + 1, sw))
                count += 1
                if not (mequal(lhs1, rhs) and mequal(lhs2, rhs)):
                    bad.append({"i": i, "a": a, "symweight": list(sw)})
    rep.add(f"F_i F_i^(a) = F_i^(a) F_i = [a+1] F_i^(a+1) for a <= {amax} [{count} cases]", not bad, bad or None)
    return rep


def highest_weight_check(model, depth):
    """The joint kernel of all E_i is the vacuum line."""
    rep = Report(f"highest weight ({model.datum.name}, depth {depth})")
    for sw in model.all_symweights(depth):
        n = model.dim(sw)
        if sum(sw) == 0:
            rep.add("depth 0: kernel is the vacuum line", n == 1, {"dim": n})
            continue
        if n == 0:
            continue
        stacked = []
        for i in model.letters:
            low = model.shift(sw, i, -1)
            if all(x >= 0 for x in low):
                stacked.extend(model.E_matrix(i, sw))
        r = rank(stacked) if stacked else 0
        rep.add(f"symweight {list(sw)}: joint E-kernel trivial", r == n, {"dim": n, "rank": r})
    return rep
