"""End-to-end acceptance run: one test per criterion, each printing a PASS/FAIL line.

Every check is exact (rational-function arithmetic); the only numeric
tolerances are the wall-clock bounds on criteria 1 and 3.
"""

import copy
import itertools
import random
import time

import pytest

from symcry.cartan import builtin
from symcry.coeffs import ONE, monomial
from symcry.crystal import LatticeBasis, build_crystal, verify_crystal
from symcry.geometry_model import ICVertex, ReferenceGraph, check_isomorphism, reference_graph
from symcry.global_basis import (
    GlobalBasisTable,
    compute_global_basis,
    run_criterion,
    verify_balanced,
    verify_divided_power_lemma,
    verify_estimates,
    verify_global,
)
from symcry.half_quantum import HalfQuantum, folding_dims_by_depth, kostant_partition_count, serre_in_radical
from symcry.quiver import random_theta_quiver, shift_div, shift_div_partner
from symcry.theta_module import (
    ThetaModule,
    highest_weight_check,
    verify_divided_powers,
    verify_relations,
)

TEST_DATA = [("sl3", 5), ("a4_chain", 4), ("a1_1", 3)]
GLOBAL_DATA = [("sl3", 4), ("a4_chain", 3), ("a1_1", 3)]


def _summary(reports):
    failed = [f"{r.title}: {c.name}" for r in reports for c in r.failures()]
    return not failed, failed


@pytest.fixture(scope="module")
def models():
    return {name: ThetaModule(builtin(name), depth) for name, depth in TEST_DATA}


@pytest.fixture(scope="module")
def crystals(models):
    return {name: build_crystal(models[name], depth) for name, depth in TEST_DATA}


@pytest.fixture(scope="module")
def tables():
    out = {}
    for name, depth in GLOBAL_DATA:
        m = ThetaModule(builtin(name), depth)
        out[name] = compute_global_basis(m, build_crystal(m, depth), depth)
    return out


@pytest.fixture(scope="module")
def sl3_reference_match():
    start = time.perf_counter()
    m = ThetaModule(builtin("sl3"), 5)
    g = build_crystal(m, 5)
    rep = check_isomorphism(reference_graph(5), g)
    elapsed = time.perf_counter() - start
    return g, rep, elapsed


def test_criterion_01_sl3_crystal_matches_reference(sl3_reference_match, criterion):
    g, rep, elapsed = sl3_reference_match
    counts = g.counts_by_depth()
    ok = rep.ok and counts == [1, 1, 2, 2, 3, 3] and elapsed < 30.0
    criterion(1, ok, f"isomorphic={rep.ok} counts={counts} time={elapsed:.2f}s (<30s)")
    assert ok, rep


def test_criterion_02_eps_one_formula(sl3_reference_match, criterion):
    g, rep, _ = sl3_reference_match
    bij = rep.checks[0].witness if rep.ok else {}
    bad = []
    for x in reference_graph(5).vertices:
        b = g.vertices[int(bij[str(x)][1:])] if str(x) in bij else None
        if b is None or b.eps[1] != x.n - 2 * x.r:
            bad.append(str(x))
    ok = rep.ok and not bad
    criterion(2, ok, f"{len(bij)} vertices checked, mismatches={bad}")
    assert ok


def test_criterion_03_defining_relations(criterion):
    start = time.perf_counter()
    reports = []
    for name, depth in TEST_DATA + [("a1_1", 4)]:
        reports.append(verify_relations(ThetaModule(builtin(name), depth), depth))
    elapsed = time.perf_counter() - start
    ok, failed = _summary(reports)
    ok = ok and elapsed < 300.0
    criterion(3, ok, f"{sum(len(r) for r in reports)} relation families, time={elapsed:.2f}s (<300s) {failed or ''}")
    assert ok, failed


def test_criterion_04_joint_kernel_trivial(models, criterion):
    reports = [highest_weight_check(models[name], depth) for name, depth in TEST_DATA]
    ok, failed = _summary(reports)
    criterion(4, ok, f"{sum(len(r) for r in reports)} weight spaces {failed or ''}")
    assert ok, failed


def test_criterion_05_crystal_axioms(models, crystals, criterion):
    reports = [verify_crystal(models[name], crystals[name]) for name, _ in TEST_DATA]
    ok, failed = _summary(reports)
    criterion(5, ok, f"{sum(len(g.vertices) for g in crystals.values())} vertices {failed or ''}")
    assert ok, failed


def test_criterion_06_global_basis(tables, criterion):
    reports = []
    for t in tables.values():
        reports.append(verify_global(t))
        reports.append(verify_balanced(t))
    ok, failed = _summary(reports)
    criterion(6, ok, f"{sum(len(t.G) for t in tables.values())} basis elements {failed or ''}")
    assert ok, failed


def test_criterion_07_estimates_and_criterion(tables, criterion):
    reports = []
    for t in tables.values():
        reports.append(verify_estimates(t))
        reports.append(verify_divided_power_lemma(t))
        reports.append(run_criterion(t))
    ok, failed = _summary(reports)
    criterion(7, ok, f"{sum(len(r) for r in reports)} checks {failed or ''}")
    assert ok, failed


def test_criterion_08_divided_powers(models, criterion):
    reports = [verify_divided_powers(models[name], depth, amax=3) for name, depth in TEST_DATA]
    ok, failed = _summary(reports)
    rng = random.Random(8)
    bad = []
    for _ in range(50):
        q, omega = random_theta_quiver(rng)
        d = {}
        for v in q.vertices:
            if v not in d:
                d[v] = d[q.theta_v[v]] = rng.randint(0, 4)
        i = rng.choice(q.vertices)
        a = rng.randint(0, 4)
        lhs = shift_div(d, i, a, omega, q) + shift_div_partner(d, i, a, omega, q)
        if lhs != shift_div(d, i, a + 1, omega, q) + a:
            bad.append((d, i, a))
    ok = ok and not bad
    criterion(8, ok, f"matrix identities ok={not failed}, 50 random shift cases, failures={len(bad)}")
    assert ok


def test_criterion_09_folding_quotient_agreement(models, criterion):
    mine = models["sl3"].dims_by_depth(5)
    theirs = folding_dims_by_depth(5, builtin("sl3"))
    ok = mine == theirs
    criterion(9, ok, f"V_theta(0)={mine} quotient={theirs}")
    assert ok


def test_criterion_10_half_quantum_oracles(criterion):
    bad_dims = []
    for name in ("a2", "a3"):
        hq = HalfQuantum(builtin(name))
        for h in range(6):
            for w in hq.weights(h):
                if hq.dim(w) != kostant_partition_count(w):
                    bad_dims.append((name, w))
    bad_serre = []
    count = 0
    for name in ("a2", "a3", "sl3", "a1_1"):
        d = builtin(name)
        for i in d.indices:
            for j in d.indices:
                if i == j:
                    continue
                length = 2 - d.pair(i, j)
                for extra in range(6 - length):
                    for k in range(extra + 1):
                        for left in itertools.product(d.indices, repeat=k):
                            for right in itertools.product(d.indices, repeat=extra - k):
                                count += 1
                                if not serre_in_radical(i, j, d, left, right):
                                    bad_serre.append((name, i, j, left, right))
    ok = not bad_dims and not bad_serre
    criterion(10, ok, f"dimension mismatches={len(bad_dims)}, Serre elements checked={count}, outside radical={len(bad_serre)}")
    assert ok


class _BrokenE(ThetaModule):
    """E_i acts by zero on one weight space."""

    def __init__(self, datum, depth, target):
        super().__init__(datum, depth)
        self._target = target

    def E_matrix(self, i, w):
        M = super().E_matrix(i, w)
        if w == self._target:
            return [[x - x for x in row] for row in M]
        return M


def test_criterion_11_negative_controls(tables, models, crystals, criterion):
    outcomes = {}

    def failed_with_witness(rep):
        return (not rep.ok) and any(c.witness for c in rep.failures())

    sl3, g5, t = models["sl3"], crystals["sl3"], tables["sl3"]

    def perturb(kind, i, sw, M):
        if kind == "F" and i == 1 and sw == (2,):
            M = [list(r) for r in M]
            M[0][0] = M[0][0] + ONE
        return M

    outcomes["relations"] = failed_with_witness(verify_relations(sl3, 4, perturb=perturb))
    outcomes["highest-weight"] = failed_with_witness(highest_weight_check(_BrokenE(builtin("sl3"), 3, (2,)), 3))

    g = copy.copy(g5)
    g.e_edges = dict(g5.e_edges)
    g.e_edges[next(k for k, v in g.e_edges.items() if v is not None)] = None
    outcomes["crystal"] = failed_with_witness(verify_crystal(sl3, g))

    g = copy.copy(g5)
    g.lattices = dict(g5.lattices)
    L = g.lattices[(3,)]
    g.lattices[(3,)] = LatticeBasis((3,), L.dim, [[monomial(1) * x for x in v] for v in L.vectors], L.pivots)
    outcomes["lattice"] = failed_with_witness(verify_crystal(sl3, g))

    victim = next(b.id for b in t.graph.vertices if b.depth == 2 and b.eps[1] == 2)
    G = dict(t.G)
    G[victim] = monomial(1) * G[victim]
    rescaled = GlobalBasisTable(t.model, t.graph, t.depth, G, dict(t.solve_D), dict(t.generators))
    outcomes["global"] = failed_with_witness(verify_global(rescaled))
    outcomes["estimates"] = failed_with_witness(verify_estimates(rescaled))
    outcomes["balanced"] = failed_with_witness(verify_balanced(t, scale=(victim, monomial(1))))

    def corrupt(data):
        if data.label == "i=1":
            b = next(b for b in data.vertices if b in data.f_tilde and b in data.F)
            data.F[b][data.f_tilde[b]] = monomial(-data.eps[b], 2)
        return data

    outcomes["criterion"] = failed_with_witness(run_criterion(t, perturb=corrupt))

    ref = reference_graph(5)
    edges = [(s, i, ICVertex(2, 0)) if (s, i, e) == (ICVertex(1, 0), -1, ICVertex(2, 1)) else (s, i, e) for s, i, e in ref.edges]
    outcomes["geometry"] = failed_with_witness(check_isomorphism(ReferenceGraph(5, ref.vertices, edges), g5))

    wrong = ThetaModule(builtin("sl3").with_lambda({1: 1, -1: 1}), 5).dims_by_depth(5)
    outcomes["folding-dims"] = wrong != folding_dims_by_depth(5, builtin("sl3"))

    ok = all(outcomes.values())
    missed = [k for k, v in outcomes.items() if not v]
    criterion(11, ok, f"{len(outcomes)} corrupted inputs, undetected={missed}")
    assert ok, missed
