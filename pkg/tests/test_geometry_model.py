import pytest

from symcry.cartan import builtin
from symcry.crystal import build_crystal
from symcry.geometry_model import (
    TABULATED_DEPTH,
    TABULATED_EDGES,
    ICVertex,
    ReferenceGraph,
    check_isomorphism,
    reference_graph,
    rule_edges,
)
from symcry.theta_module import ThetaModule


@pytest.fixture(scope="module")
def computed5():
    m = ThetaModule(builtin("sl3"), 5)
    return build_crystal(m, 5)


def test_rule_reproduces_tabulated_edges():
    assert sorted(rule_edges(TABULATED_DEPTH)) == sorted(TABULATED_EDGES)


def test_reference_examples():
    g1 = reference_graph(1)
    assert sorted(g1.edges, key=str) == sorted(
        [(ICVertex(0, 0), 1, ICVertex(1, 0)), (ICVertex(0, 0), -1, ICVertex(1, 0))], key=str
    )
    g2 = reference_graph(2)
    assert (ICVertex(1, 0), 1, ICVertex(2, 0)) in g2.edges
    assert (ICVertex(1, 0), -1, ICVertex(2, 1)) in g2.edges
    g4 = reference_graph(4)
    assert (ICVertex(3, 0), -1, ICVertex(4, 1)) in g4.edges
    assert (ICVertex(3, 1), -1, ICVertex(4, 2)) in g4.edges


def test_eps_one_is_n_minus_two_r():
    for x in reference_graph(5).vertices:
        assert x.eps1 == x.n - 2 * x.r


def test_ic_vertex_bounds():
    with pytest.raises(ValueError):
        ICVertex(3, 2)


def test_extrapolation_is_labelled():
    assert reference_graph(5).extrapolated_from is None
    g = reference_graph(7)
    assert g.extrapolated_from == TABULATED_DEPTH
    assert "extrapolated" in g.to_dot()
    with pytest.raises(ValueError):
        reference_graph(13)


def test_computed_crystal_matches_reference(computed5):
    rep = check_isomorphism(reference_graph(5), computed5)
    assert rep.ok, rep
    bij = rep.checks[0].witness
    assert len(bij) == 12
    for x in reference_graph(5).vertices:
        b = computed5.vertices[int(bij[str(x)][1:])]
        assert b.eps[1] == x.n - 2 * x.r
        assert b.depth == x.n


def test_relabelled_edge_gives_counterexample(computed5):
    ref = reference_graph(5)
    edges = list(ref.edges)
    k = edges.index((ICVertex(1, 0), -1, ICVertex(2, 1)))
    edges[k] = (ICVertex(1, 0), -1, ICVertex(2, 0))
    bad = ReferenceGraph(5, ref.vertices, edges)
    rep = check_isomorphism(bad, computed5)
    assert not rep.ok
    assert rep.checks[0].witness


def test_depth_zero_is_trivially_isomorphic():
    m = ThetaModule(builtin("sl3"), 0)
    rep = check_isomorphism(reference_graph(0), build_crystal(m, 0))
    assert rep.ok


def test_depth_mismatch_is_reported(computed5):
    assert not check_isomorphism(reference_graph(4), computed5).ok


def test_reference_serialisation():
    g = reference_graph(2)
    data = g.to_json()
    assert data["n_max"] == 2 and len(data["vertices"]) == 4
    assert "IC^1_0" in g.to_dot()
