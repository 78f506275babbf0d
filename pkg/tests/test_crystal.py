import copy

import pytest

from symcry.cartan import builtin
from symcry.coeffs import ONE, ZERO, monomial, qint_rf
from symcry.crystal import (
    CriterionInput,
    LatticeBasis,
    build_crystal,
    criterion_check,
    lattice_insert,
    string_decompose,
    tilde_E,
    tilde_F,
    verify_crystal,
)
from symcry.theta_module import ThetaModule


@pytest.fixture(scope="module")
def sl3():
    m = ThetaModule(builtin("sl3"), 5)
    m.build(5)
    return m


@pytest.fixture(scope="module")
def sl3_graph(sl3):
    return build_crystal(sl3, 5)


# --- string decompositions ------------------------------------------------------


def test_string_decomposition_examples(sl3):
    phi = sl3.vacuum()
    d = string_decompose(1, sl3.word_vector((1,)), sl3)
    assert [(n, u) for n, u in d.parts] == [(1, phi)]
    d = string_decompose(1, phi, sl3)
    assert [(n, u) for n, u in d.parts] == [(0, phi)]
    d = string_decompose(1, sl3.word_vector((1, 1)), sl3)
    assert [(n, u) for n, u in d.parts] == [(2, qint_rf(2) * phi)]


def test_string_decomposition_reconstructs_and_parts_are_highest(sl3):
    for n in range(1, 6):
        for word in sl3.words_of_grade((n,)):
            u = sl3.word_vector(word)
            for i in (1, -1):
                d = string_decompose(i, u, sl3)
                assert d.reconstruct(sl3) == u
                for k, part in d.parts:
                    e = sl3.apply_E(i, part)
                    assert e is None or e.is_zero()


# --- modified root operators ----------------------------------------------------


def test_tilde_operator_examples(sl3):
    phi = sl3.vacuum()
    f1 = sl3.word_vector((1,))
    assert tilde_E(1, f1, sl3) == phi
    assert tilde_F(1, f1, sl3) == sl3.apply_divided_F(1, 2, phi)
    assert tilde_E(1, phi, sl3) is None


def test_tilde_E_inverts_tilde_F_on_vectors(sl3):
    for n in range(0, 4):
        for word in sl3.words_of_grade((n,)):
            u = sl3.word_vector(word)
            for i in (1, -1):
                assert tilde_E(i, tilde_F(i, u, sl3), sl3) == u


# --- lattices ----------------------------------------------------------------------


def test_lattice_insert_examples(sl3):
    phi = sl3.vacuum()
    L = LatticeBasis.from_generators((0,), 1, [])
    L, status = lattice_insert(L, phi)
    assert status == "new-generator"
    L, status = lattice_insert(L, phi)
    assert status == "in-L"
    L2, status = lattice_insert(L, monomial(-1) * phi)
    assert status == "new-generator"
    assert L2.contains(monomial(-1) * phi) and not L.contains(monomial(-1) * phi)


def test_lattice_insert_divided_power_then_square(sl3):
    phi = sl3.vacuum()
    f2 = sl3.apply_divided_F(1, 2, phi)
    sq = sl3.word_vector((1, 1))
    L = LatticeBasis.from_generators((2,), 2, [])
    L, s1 = lattice_insert(L, f2)
    L, s2 = lattice_insert(L, sq)
    assert (s1, s2) == ("new-generator", "new-generator")
    # [2] has ord -1, so F1^2 phi = [2] F1^(2) phi enlarges the lattice
    assert L.contains(f2) and L.contains(sq)
    assert L.coefficients(f2)[0].ord() >= 1


def test_lattice_residue_and_membership(sl3):
    u = sl3.word_vector((1, 1))
    assert u == sl3.word_vector((1, -1))  # F_-1 phi = F_1 phi
    L = LatticeBasis.from_generators((2,), 2, [u.coords])
    assert L.residue(u) == (1,)
    assert L.residue(monomial(1) * u) == (0,)
    with pytest.raises(ValueError):
        L.residue(monomial(-1) * u)
    other = sl3.word_vector((-1, 1))
    assert L.coefficients(other) is None and not L.contains(other)


# --- crystal graph ------------------------------------------------------------------


def test_sl3_vertex_counts(sl3_graph):
    assert sl3_graph.counts_by_depth() == [1, 1, 2, 2, 3, 3]
    assert not sl3_graph.anomalies


def test_sl3_edges_near_the_root(sl3_graph):
    g = sl3_graph
    root = g.vertices[0]
    assert g.f_edges[(root.id, 1)] == g.f_edges[(root.id, -1)]
    b1 = g.f_edges[(root.id, 1)]
    assert g.f_edges[(b1, 1)] != g.f_edges[(b1, -1)]
    top = [g.vertices[g.f_edges[(b1, i)]] for i in (1, -1)]
    assert sorted(b.eps[1] for b in top) == [0, 2]


def test_eps_equals_string_length(sl3_graph):
    g = sl3_graph
    for b in g.vertices:
        for i in g.indices:
            steps, cur = 0, b.id
            while g.e_edges[(cur, i)] is not None:
                cur = g.e_edges[(cur, i)]
                steps += 1
            assert steps == b.eps[i]


@pytest.mark.parametrize("name, depth", [("sl3", 5), ("a4_chain", 4), ("a1_1", 3)])
def test_crystal_axioms(name, depth):
    m = ThetaModule(builtin(name), depth)
    g = build_crystal(m, depth)
    rep = verify_crystal(m, g)
    assert rep.ok, rep
    assert g.counts_by_depth() == m.dims_by_depth(depth)


def test_corrupted_graph_fails_crystal_check(sl3, sl3_graph):
    g = copy.copy(sl3_graph)
    g.e_edges = dict(sl3_graph.e_edges)
    victim = next(k for k, v in g.e_edges.items() if v is not None)
    g.e_edges[victim] = None
    rep = verify_crystal(sl3, g)
    assert not rep.ok
    assert any(c.witness for c in rep.failures())


def test_corrupted_lattice_fails_residue_check(sl3, sl3_graph):
    g = copy.copy(sl3_graph)
    g.lattices = dict(sl3_graph.lattices)
    L = g.lattices[(2,)]
    g.lattices[(2,)] = LatticeBasis((2,), L.dim, [[monomial(-1) * x for x in v] for v in L.vectors], L.pivots)
    rep = verify_crystal(sl3, g)
    assert not rep.ok


def test_dot_and_json_output(sl3_graph):
    dot = sl3_graph.to_dot()
    assert dot.startswith("digraph crystal {")
    assert 'b0 [label="b0|wt=0|eps_1=0|eps_-1=0"]' in dot
    assert "b0 -> b1" in dot
    data = sl3_graph.to_json()
    assert len(data["vertices"]) == 12
    assert len(data["edges"]) == 2 * (1 + 1 + 2 + 2 + 3)


# --- criterion checker ------------------------------------------------------------


def _toy_input():
    # one i-string b0 -> b1 -> b2 with exact values
    eps = {0: 0, 1: 1, 2: 2}
    f_t = {0: 1, 1: 2}
    e_t = {0: None, 1: 0, 2: 1}
    F = {0: {1: ONE}, 1: {2: qint_rf(2)}}
    E = {0: {}, 1: {0: ONE}, 2: {1: monomial(-1)}}
    return CriterionInput([0, 1, 2], eps, f_t, e_t, E, F, "toy")


def test_criterion_passes_on_exact_string():
    assert criterion_check(_toy_input()).ok


def test_criterion_detects_bad_leading_coefficient():
    data = _toy_input()
    data.F[1][2] = monomial(-1, 2)
    rep = criterion_check(data)
    failed = [c.name for c in rep.failures()]
    assert any(n.startswith("(3)") for n in failed)


def test_criterion_detects_bad_off_diagonal():
    data = _toy_input()
    data.F[0][2] = monomial(-2)
    rep = criterion_check(data)
    failed = [c.name for c in rep.failures()]
    assert any(n.startswith("(1)") for n in failed)


def test_criterion_detects_bad_E_coefficient():
    data = _toy_input()
    data.E[2][1] = ONE
    rep = criterion_check(data)
    assert any(c.name.startswith("(4)") for c in rep.failures())
    data.E[2][1] = ZERO
    assert any(c.name.startswith("(4)") for c in criterion_check(data).failures())
