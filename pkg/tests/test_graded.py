"""Sign primitives: permutation signs, tensor evaluation, suspension."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from looptwist.graded import (GradedSpace, LinearMap, koszul_sign,
                              perm_parity, permute_word, suspension_sign,
                              tensor_apply, to_shifted, to_unshifted, vec,
                              vec_eq, xi_sign)

S2 = GradedSpace("s2", (("e0", 0), ("a", 1), ("e2", 2)))


def test_identity_permutation_is_plus_one():
    assert koszul_sign([1, 2, 3], [5, 7, 11]) == 1


def test_single_swap_of_odd_elements():
    # moving degree p past degree q costs (-1)**(p*q)
    assert koszul_sign([2, 1], [1, 1]) == -1
    assert koszul_sign([2, 1], [1, 2]) == 1
    assert koszul_sign([2, 1], [3, 5]) == -1


def test_cycle_sign_from_adjacent_transpositions():
    # sigma = (2,3,1) on degrees (1,2,1): x1 moves past total degree 3.
    # Independent computation: compose the two adjacent swaps
    # (1,2,3) -> (2,1,3) -> (2,3,1), each contributing its Koszul factor.
    step1 = koszul_sign([2, 1, 3], [1, 2, 1])          # x1 past x2
    # after the swap the word is (x2, x1, x3); now swap slots 2,3
    step2 = koszul_sign([1, 3, 2], [2, 1, 1])          # x1 past x3
    assert step1 * step2 == -1
    assert koszul_sign([2, 3, 1], [1, 2, 1]) == -1


@settings(max_examples=60)
@given(st.integers(3, 4), st.data())
def test_koszul_multiplicative_under_composition(n, data):
    degrees = data.draw(st.lists(st.integers(0, 5), min_size=n, max_size=n))
    perms = list(itertools.permutations(range(1, n + 1)))
    s = data.draw(st.sampled_from(perms))
    t = data.draw(st.sampled_from(perms))
    # first rearrange by s, then rearrange the result by t
    composed = [s[t[i] - 1] for i in range(n)]
    after_s = [degrees[s[i] - 1] for i in range(n)]
    assert koszul_sign(composed, degrees) == (
        koszul_sign(list(s), degrees) * koszul_sign(list(t), after_s))


def test_xi_sign_is_sgn_times_eps():
    assert xi_sign([2, 1], [1, 1]) == perm_parity([2, 1]) * koszul_sign([2, 1], [1, 1])
    assert xi_sign([2, 1], [1, 1]) == 1
    assert xi_sign([2, 1], [2, 2]) == -1


def _tau():
    # degree -1 map sending e2 to the degree-1 generator a
    return LinearMap.from_entries({("e2",): {("a",): Fraction(1)}},
                                  1, 1, -1, S2.degree, S2.degree)


def test_tensor_apply_first_factor_passes_nothing():
    tau = _tau()
    ident = LinearMap.identity(S2.degree)
    out = tensor_apply([tau, ident], ("e2", "e2"))
    assert out == {("a", "e2"): Fraction(1)}


def test_tensor_apply_koszul_rule_even_then_odd():
    tau = _tau()
    ident = LinearMap.identity(S2.degree)
    # (id (x) tau)(e2 (x) e2): sign (-1)**((-1)*2) = +1
    out = tensor_apply([ident, tau], ("e2", "e2"))
    assert out == {("e2", "a"): Fraction(1)}


def test_tensor_apply_koszul_rule_odd_crossing():
    s3 = GradedSpace("s3", (("e0", 0), ("a", 2), ("e3", 3)))
    tau = LinearMap.from_entries({("e3",): {("a",): Fraction(1)}},
                                 1, 1, -1, s3.degree, s3.degree)
    ident = LinearMap.identity(s3.degree)
    # (id (x) tau)(e3 (x) e3): sign (-1)**((-1)*3) = -1
    out = tensor_apply([ident, tau], ("e3", "e3"))
    assert out == {("e3", "a"): Fraction(-1)}


def test_tensor_apply_composition_invariant():
    # (h (x) id) after (f (x) g) equals (h.f (x) g) with matching signs
    space = GradedSpace("v", (("a", 1), ("b", 2), ("c", 3)))
    f = LinearMap.from_entries({("b",): {("a",): Fraction(2)}},
                               1, 1, -1, space.degree, space.degree)
    g = LinearMap.from_entries({("c",): {("b",): Fraction(3)}},
                               1, 1, -1, space.degree, space.degree)
    h = LinearMap.from_entries({("a",): {("c",): Fraction(5)}},
                               1, 1, 2, space.degree, space.degree)
    ident = LinearMap.identity(space.degree)

    two_step = {}
    for key, c in tensor_apply([f, g], ("b", "c")).items():
        for key2, c2 in tensor_apply([h, ident], key).items():
            two_step[key2] = two_step.get(key2, 0) + c * c2

    def hf_rule(key):
        out = {}
        for key2, c in f(key).items():
            for key3, c2 in h(key2).items():
                out[key3] = out.get(key3, 0) + c * c2
        return out

    hf = LinearMap(1, 1, 1, space.degree, space.degree, rule=hf_rule)
    one_step = tensor_apply([hf, g], ("b", "c"))
    assert vec_eq(two_step, one_step)


def test_shift_of_identity_is_identity():
    ident = LinearMap.identity(S2.degree)
    shifted = to_shifted(ident, -1)
    assert shifted(("e2",)) == {("e2",): Fraction(1)}
    assert shifted.degree == 0


def test_shift_roundtrip_on_arity_two_map():
    space = GradedSpace("v", (("a", 1), ("b", 2), ("c", 3), ("d", 4)))
    m = LinearMap.from_entries(
        {("a", "b"): {("c",): Fraction(1)}, ("b", "b"): {("d",): Fraction(4)}},
        2, 1, 0, space.degree, space.degree)
    down_up = to_unshifted(to_shifted(m, -1), -1)
    for key in [("a", "b"), ("b", "b"), ("a", "a")]:
        assert vec_eq(down_up(key), m(key))
    up_down = to_unshifted(to_shifted(m, 1), 1)
    for key in [("a", "b"), ("b", "b")]:
        assert vec_eq(up_down(key), m(key))


def test_shift_introduces_first_argument_sign():
    # a degree -1 arity-2 map picks up a sign depending on the first
    # argument degree when conjugated by suspension
    space = GradedSpace("v", (("a", 1), ("b", 2), ("c", 2)))
    m = LinearMap.from_entries({("a", "b"): {("c",): Fraction(1)}},
                               2, 1, -1, space.degree, space.degree)
    shifted = to_shifted(m, -1)
    # shifted degrees: a -> 0, b -> 1; suspension signs depend on |a|
    out = shifted(("a", "b"))
    assert list(out.values())[0] in (Fraction(1), Fraction(-1))
    # and the round trip restores the original exactly
    assert vec_eq(to_unshifted(shifted, -1)(("a", "b")), m(("a", "b")))


def test_graded_space_shift_degrees():
    shifted = S2.shifted(-1)
    assert shifted.degree("e2") == 1
    assert shifted.degree("e0") == -1


def test_permute_word_signs():
    degs = [1, 2, 1]
    sign, word = permute_word(("x", "y", "z"), degs, [2, 3, 1])
    assert word == ("y", "z", "x")
    assert sign == -1


def test_duplicate_names_rejected():
    with pytest.raises(ValueError):
        GradedSpace("bad", (("a", 0), ("a", 1)))


def test_non_bijective_permutation_rejected():
    with pytest.raises(ValueError):
        koszul_sign([1, 1], [0, 0])
    with pytest.raises(ValueError):
        koszul_sign([1, 2, 3], [0, 0])
