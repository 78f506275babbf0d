import itertools

import pytest

from symcry.cartan import builtin
from symcry.coeffs import ONE, ZERO, monomial
from symcry.half_quantum import (
    HalfQuantum,
    e_prime,
    folding_dims_by_depth,
    half_weight_space,
    kashiwara_form,
    kostant_partition_count,
    quotient_by_folding_ideal,
    serre_element,
    serre_in_radical,
)


@pytest.fixture(scope="module")
def sl3():
    return builtin("sl3")


def test_e_prime_examples(sl3):
    assert e_prime(1, (1,), sl3) == {(): ONE}
    assert e_prime(1, (-1,), sl3) == {}
    assert e_prime(1, (-1, 1), sl3) == {(-1,): monomial(1)}
    assert e_prime(1, (), sl3) == {}


def test_kashiwara_form_examples(sl3):
    assert kashiwara_form((), (), sl3) == ONE
    assert kashiwara_form((1,), (1,), sl3) == ONE
    assert kashiwara_form((1, -1), (-1, 1), sl3) == monomial(1)
    assert kashiwara_form((1,), (1, 1), sl3) == ZERO


def test_kashiwara_form_is_symmetric(sl3):
    for word_a in itertools.product((1, -1), repeat=3):
        for word_b in itertools.product((1, -1), repeat=3):
            assert kashiwara_form(word_a, word_b, sl3) == kashiwara_form(word_b, word_a, sl3)


@pytest.mark.parametrize("weight, dim", [((1, 1), 2), ((2, 0), 1), ((0, 0), 1), ((2, 1), 2), ((2, 2), 3)])
def test_half_weight_space_dims(sl3, weight, dim):
    assert half_weight_space(weight, sl3).dim == dim


def test_radical_is_a_left_ideal(sl3):
    """Every radical element stays in the radical after left multiplication by f_i."""
    hw = half_weight_space((2, 1), sl3)
    serre = serre_element(1, -1, sl3)
    assert all(kashiwara_form(serre, w, sl3) == ZERO for w in hw.words)
    for i in (1, -1):
        assert serre_in_radical(1, -1, sl3, left=(i,))
        assert serre_in_radical(1, -1, sl3, right=(i,))


def test_serre_examples(sl3):
    assert serre_in_radical(1, -1, sl3)
    assert serre_in_radical(-1, 1, sl3)
    affine = builtin("a1_1")
    assert len(next(iter(serre_element(0, 1, affine)))) == 4
    assert serre_in_radical(0, 1, affine)
    assert serre_in_radical(1, 0, affine)
    with pytest.raises(ValueError):
        serre_in_radical(1, 1, sl3)


def test_non_serre_element_is_not_in_radical(sl3):
    elem = {(1, 1, -1): ONE, (-1, 1, 1): ONE}
    words = half_weight_space((2, 1), sl3).words
    assert any(kashiwara_form(elem, w, sl3) != ZERO for w in words)


@pytest.mark.parametrize("name", ["a2", "a3"])
def test_dims_match_kostant_partitions(name):
    d = builtin(name)
    hq = HalfQuantum(d)
    for height in range(6):
        for w in hq.weights(height):
            assert hq.dim(w) == kostant_partition_count(w), w


@pytest.mark.parametrize("name", ["a2", "a3", "sl3", "a1_1"])
def test_serre_elements_up_to_height_five_lie_in_radical(name):
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
                            assert serre_in_radical(i, j, d, left, right)


def test_folding_quotient_examples(sl3):
    dims = quotient_by_folding_ideal(2, sl3)
    assert dims[(0,)] == 1
    assert dims[(1,)] == 1
    assert dims[(2,)] == 2
    assert folding_dims_by_depth(5, sl3) == [1, 1, 2, 2, 3, 3]


def test_folding_quotient_depth_ceiling(sl3):
    with pytest.raises(ValueError):
        quotient_by_folding_ideal(9, sl3)


def test_kostant_oracle_small_cases():
    assert kostant_partition_count((1, 1)) == 2
    assert kostant_partition_count((1, 1, 1)) == 4
    assert kostant_partition_count((0, 0)) == 1
