import itertools
import json
import random

import pytest

from symcry.cartan import builtin
from symcry.quiver import (
    FlagType,
    ThetaQuiver,
    builtin_quiver,
    dim_rep_space,
    dim_rep_space_bruteforce,
    ind_type,
    is_sink,
    load_quiver,
    m_k,
    random_theta_quiver,
    res_terms,
    shift_div,
    shift_div_partner,
    shift_E,
    shift_F,
    validate_orientation,
    validate_quiver,
)


def symmetric_dims(q, values):
    d = {}
    for i, x in zip(q.vertices, values):
        if i not in d:
            d[i] = x
            d[q.theta_v[i]] = x
    return d


# --- validation ----------------------------------------------------------------


@pytest.mark.parametrize("name", ["sl3", "a1_1", "a4_chain"])
def test_builtin_quivers_are_valid_and_match_cartan(name):
    q, omega = builtin_quiver(name)
    rep = validate_quiver(q, builtin(name))
    assert rep.ok, rep
    assert validate_orientation(q, omega).ok
    assert q.cartan_datum().pairing == builtin(name).pairing


def test_sl3_arrow_is_theta_fixed():
    q, _ = builtin_quiver("sl3")
    assert q.theta_h["h"] == "h"
    q.theta_h = {"h": "hb", "hb": "h"}
    names = [c.name for c in validate_quiver(q).failures()]
    assert "(b) theta(out h) = in h implies theta h = h" in names


def test_loop_is_invalid():
    q = ThetaQuiver(
        [1, -1],
        {"l": (1, 1), "lb": (1, 1)},
        {"l": "lb", "lb": "l"},
        {1: -1, -1: 1},
        {"l": "l", "lb": "lb"},
    )
    rep = validate_quiver(q)
    assert "no loops: out(h) != in(h)" in [c.name for c in rep.failures()]


def test_theta_fixed_vertex_is_invalid():
    q, _ = builtin_quiver("sl3")
    q.theta_v = {1: 1, -1: -1}
    names = [c.name for c in validate_quiver(q).failures()]
    assert "(d) no theta-fixed vertex" in names


def test_orientation_must_be_theta_stable():
    q, _ = builtin_quiver("a4_chain")
    # all arrows pointing toward the middle pair {2, 3}
    rep = validate_orientation(q, ["12", "43", "23"])
    assert not rep.ok
    assert "Omega is theta-stable" in [c.name for c in rep.failures()]


def test_orientation_must_pick_one_of_each_bar_pair():
    q, _ = builtin_quiver("sl3")
    assert not validate_orientation(q, ["h", "hb"]).ok
    assert not validate_orientation(q, []).ok


# --- sinks and dimensions ------------------------------------------------------


def test_sink_examples():
    q, omega = builtin_quiver("sl3")
    assert is_sink(1, omega, q)
    assert not is_sink(-1, omega, q)


def test_a4_vertex_one_is_sink_with_reversed_orientation():
    q, _ = builtin_quiver("a4_chain")
    omega = ["21", "43", "23"]
    assert validate_orientation(q, omega).ok
    assert is_sink(1, omega, q)
    assert not is_sink(4, omega, q)


@pytest.mark.parametrize("n", range(6))
def test_sl3_rep_space_is_skew_matrices(n):
    q, omega = builtin_quiver("sl3")
    d = {1: n, -1: n}
    assert dim_rep_space(d, omega, q) == n * (n - 1) // 2
    assert dim_rep_space_bruteforce(d, omega, q) == n * (n - 1) // 2


def test_empty_orientation_gives_zero():
    q, _ = builtin_quiver("sl3")
    assert dim_rep_space({1: 3, -1: 3}, [], q) == 0


def test_a4_rep_space_formula_matches_coordinate_count():
    q, omega = builtin_quiver("a4_chain")
    d = {1: 1, 2: 1, 3: 1, 4: 1}
    assert dim_rep_space(d, omega, q) == dim_rep_space_bruteforce(d, omega, q) == 1
    for vals in itertools.product(range(4), repeat=2):
        d = symmetric_dims(q, [vals[0], vals[1], vals[1], vals[0]])
        assert dim_rep_space(d, omega, q) == dim_rep_space_bruteforce(d, omega, q)


def test_rep_space_formula_on_random_quivers():
    rng = random.Random(20261015)
    checked = 0
    for _ in range(40):
        q, omega = random_theta_quiver(rng)
        assert validate_quiver(q).ok
        assert validate_orientation(q, omega).ok
        for vals in itertools.product(range(4), repeat=len(q.vertices) // 2):
            d = {}
            for p, x in enumerate(vals):
                d[2 * p] = d[2 * p + 1] = x
            assert dim_rep_space(d, omega, q) == dim_rep_space_bruteforce(d, omega, q)
            checked += 1
    assert checked > 100


# --- shifts --------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_sl3_shift_examples(n):
    q, omega = builtin_quiver("sl3")
    d = {1: n - 1, -1: n - 1}
    assert shift_F(d, 1, omega, q) == n - 1
    assert shift_E(d, 1, omega, q) == -(n - 1)
    assert shift_div(d, 1, 1, omega, q) == shift_F(d, 1, omega, q)
    assert shift_div(d, 1, 2, omega, q) == 2 * (n - 1)


def test_zero_dimension_shifts_vanish():
    q, omega = builtin_quiver("a4_chain")
    d = {i: 0 for i in q.vertices}
    for i in q.vertices:
        assert shift_F(d, i, omega, q) == 0
        assert shift_E(d, i, omega, q) == 0


def test_shift_E_identity_and_divided_power_identity_randomized():
    rng = random.Random(7)
    cases = 0
    while cases < 50:
        q, omega = random_theta_quiver(rng)
        d = symmetric_dims(q, [rng.randint(0, 4) for _ in q.vertices])
        i = rng.choice(q.vertices)
        a = rng.randint(0, 4)
        assert shift_E(d, i, omega, q) == shift_F(d, i, omega, q) - 2 * d[i]
        lhs = shift_div(d, i, a, omega, q) + shift_div_partner(d, i, a, omega, q)
        assert lhs == shift_div(d, i, a + 1, omega, q) + a
        cases += 1


def test_divided_power_identity_with_arrow_to_theta_partner():
    q, omega = builtin_quiver("a1_1")
    for n in range(4):
        d = {0: n, 1: n}
        for i in q.vertices:
            for a in range(5):
                d_next = shift_div(d, i, a + 1, omega, q)
                assert shift_div(d, i, a, omega, q) + shift_div_partner(d, i, a, omega, q) == d_next + a


def test_shift_div_rejects_negative_power():
    q, omega = builtin_quiver("sl3")
    with pytest.raises(ValueError):
        shift_div({1: 1, -1: 1}, 1, -1, omega, q)


# --- flag types ----------------------------------------------------------------


def test_m_k_examples():
    q, omega = builtin_quiver("sl3")
    M, ak = m_k(FlagType((1, -1), (1, 1)), 1, omega, q)
    assert (M, ak) == (0, (0, 0))
    M, ak = m_k(FlagType((1, -1, 1, -1), (1, 1, 1, 1)), 3, omega, q)
    assert (M, ak) == (1, (1, 0, 0, 1))


def test_res_terms_example():
    q, omega = builtin_quiver("sl3")
    terms = res_terms(FlagType((1, -1), (1, 1)), 1, omega, q)
    assert len(terms) == 1
    ft, shift = terms[0]
    assert ft == FlagType((1, -1), (0, 0)) and shift == 0


def test_res_terms_keep_flag_invariants_and_lower_weight():
    q, omega = builtin_quiver("a4_chain")
    ft = ind_type(ind_type(FlagType((), ()), 2, 1, q.theta_v), 1, 2, q.theta_v)
    assert ft == FlagType((1, 2, 3, 4), (2, 1, 1, 2))
    idx = q.vertices
    for i in (1, 2):
        for sub, _ in res_terms(ft, i, omega, q):
            assert sub.check(q.theta_v) == []
            drop = [x - y for x, y in zip(ft.weight(idx), sub.weight(idx))]
            expect = [1 if j in (i, q.theta_v[i]) else 0 for j in idx]
            assert drop == expect


def test_m_k_rejects_mismatched_index():
    q, omega = builtin_quiver("sl3")
    with pytest.raises(ValueError):
        m_k(FlagType((1, -1), (1, 1)), 1, omega, q, i=-1)


def test_res_terms_requires_positive_entries():
    q, omega = builtin_quiver("sl3")
    with pytest.raises(ValueError):
        res_terms(FlagType((1, 1, -1, -1), (0, 1, 1, 0)), 1, omega, q)


def test_ind_type_examples():
    theta = {1: -1, -1: 1}
    assert ind_type(FlagType((), ()), 1, 1, theta) == FlagType((1, -1), (1, 1))
    out = ind_type(FlagType((1, -1), (1, 1)), 1, 1, theta)
    assert out == FlagType((1, 1, -1, -1), (1, 1, 1, 1))
    assert out.check(theta) == []


def test_flag_type_check_names_violations():
    theta = {1: -1, -1: 1}
    assert FlagType((1, 1), (1, 1)).check(theta)
    assert FlagType((1, -1), (1, 2)).check(theta)
    assert FlagType((1,), (1,)).check(theta)


# --- io ------------------------------------------------------------------------


def test_quiver_json_roundtrip(tmp_path):
    q, omega = builtin_quiver("a1_1")
    data = q.to_json()
    data["orientation"] = omega
    path = tmp_path / "q.json"
    path.write_text(json.dumps(data))
    q2, omega2 = load_quiver(str(path))
    assert q2.arrows == q.arrows and q2.bar == q.bar
    assert q2.theta_v == q.theta_v and q2.theta_h == q.theta_h
    assert omega2 == omega
