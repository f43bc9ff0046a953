"""Tensor words, shuffles, the super-Lyndon basis and Lie expansion."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from looptwist.graded import GradedSpace, Vector, add_into, is_zero, vec_eq
from looptwist.words import (LieWord, TruncationPolicy, deconcatenate,
                             enumerate_words, lie_coordinates, lie_to_tensor,
                             lyndon_basis, nested_bracket,
                             nested_bracket_words, antipode_word, shuffle,
                             unshuffle, word_degree)

ODD = GradedSpace("odd", (("a", 1),))
TWO = GradedSpace("two", (("a", 1), ("b", 2)))
POLICY = TruncationPolicy(max_total_degree=6, max_word_length=6)


def test_deconcatenate_counts():
    assert deconcatenate(("a", "b")) == [((), ("a", "b")), (("a",), ("b",)),
                                         (("a", "b"), ())]
    assert deconcatenate(()) == [((), ())]
    assert len(deconcatenate(("a", "b", "c"))) == 4


def test_deconcatenate_coassociative():
    # exhaustive words of length <= 6 over a two-letter alphabet
    for n in range(7):
        for word in itertools.product("ab", repeat=n):
            lhs = {}
            rhs = {}
            for left, right in deconcatenate(word):
                for l2, r2 in deconcatenate(left):
                    lhs[(l2, r2, right)] = lhs.get((l2, r2, right), 0) + 1
                for l2, r2 in deconcatenate(right):
                    rhs[(left, l2, r2)] = rhs.get((left, l2, r2), 0) + 1
            assert lhs == rhs


def test_shuffle_unit():
    assert shuffle(TWO, (), ("a", "b")) == {("a", "b"): Fraction(1)}


def test_shuffle_two_odds_anticommute():
    out = shuffle(ODD, ("a",), ("a",))
    # ab - ba collapses on one letter: aa - aa = 0
    assert is_zero(out) or out == {}
    space = GradedSpace("uv", (("u", 1), ("v", 1)))
    out = shuffle(space, ("u",), ("v",))
    assert out == {("u", "v"): Fraction(1), ("v", "u"): Fraction(-1)}


def test_shuffle_one_against_two():
    space = GradedSpace("abc", (("a", 2), ("b", 1), ("c", 1)))
    out = shuffle(space, ("a",), ("b", "c"))
    assert set(out) == {("a", "b", "c"), ("b", "a", "c"), ("b", "c", "a")}
    assert out[("a", "b", "c")] == 1
    assert out[("b", "a", "c")] == 1
    assert out[("b", "c", "a")] == 1


def test_shuffle_graded_commutative_and_associative():
    space = GradedSpace("uv", (("u", 1), ("v", 2)))
    words = [w for w in enumerate_words(space, TruncationPolicy(5, 3))
             if len(w) <= 2]
    for u in words:
        for v in words:
            if len(u) + len(v) > 5:
                continue
            uv = shuffle(space, u, v)
            vu = shuffle(space, v, u)
            sign = -1 if (word_degree(space, u) * word_degree(space, v)) % 2 else 1
            assert vec_eq(uv, {k: sign * c for k, c in vu.items()})
    for u in words[:4]:
        for v in words[:4]:
            for w in words[:4]:
                if len(u) + len(v) + len(w) > 5:
                    continue
                lhs: Vector = {}
                for key, c in shuffle(space, u, v).items():
                    add_into(lhs, shuffle(space, key, w), c)
                rhs: Vector = {}
                for key, c in shuffle(space, v, w).items():
                    add_into(rhs, shuffle(space, u, key), c)
                assert vec_eq(lhs, rhs)


def test_unshuffle_adjoint_sign():
    space = GradedSpace("uv", (("u", 1), ("v", 1)))
    out = unshuffle(space, ("u", "v"))
    assert out[((), ("u", "v"))] == 1
    assert out[(("u",), ("v",))] == 1
    assert out[(("v",), ("u",))] == -1
    assert out[(("u", "v"), ())] == 1


def test_lyndon_one_even_generator():
    space = GradedSpace("even", (("a", 2),))
    basis = lyndon_basis(space, TruncationPolicy(8, 4))
    assert [w.expr for w in basis] == ["a"]


def test_lyndon_one_odd_generator():
    basis = lyndon_basis(ODD, TruncationPolicy(8, 4))
    assert [w.expr for w in basis] == ["a", ("a", "a")]


def test_lyndon_two_generators_length_two():
    basis = lyndon_basis(TWO, TruncationPolicy(6, 2))
    exprs = [w.expr for w in basis]
    assert "a" in exprs and "b" in exprs
    assert ("a", "b") in exprs
    assert ("a", "a") in exprs        # |a| odd
    assert ("b", "b") not in exprs    # |b| even


def test_lie_to_tensor_bracket_definition():
    space = GradedSpace("uv", (("u", 1), ("v", 2)))
    # [u,v] = uv - (-1)**(|u||v|) vu with |u||v| = 2
    out = lie_to_tensor(space, ("u", "v"))
    assert out == {("u", "v"): Fraction(1), ("v", "u"): Fraction(-1)}
    out = lie_to_tensor(space, ("v", "v"))
    assert is_zero(out)


def test_lie_to_tensor_odd_square():
    out = lie_to_tensor(ODD, ("a", "a"))
    assert out == {("a", "a"): Fraction(2)}


def test_lie_to_tensor_primitive():
    # every super-Lyndon basis element expands to a primitive tensor
    for lw in lyndon_basis(TWO, TruncationPolicy(6, 4)):
        exp = lie_to_tensor(TWO, lw.expr)
        red: Vector = {}
        for word, c in exp.items():
            add_into(red, unshuffle(TWO, word, reduced=True), c)
        assert is_zero(red), f"not primitive: {lw.expr}"


def test_lie_basis_spans_primitives():
    # rank of expanded super-Lyndon elements equals the dimension of the
    # primitives of T(V), computed degree by degree by brute force
    space = TWO
    policy = TruncationPolicy(6, 6)
    words = enumerate_words(space, policy)
    basis = lyndon_basis(space, policy)
    for degree in range(1, 7):
        degree_words = [w for w in words if word_degree(space, w) == degree and w]
        if not degree_words:
            continue
        # brute-force primitives: kernel of the reduced unshuffle
        pairs = sorted({key for w in degree_words
                        for key in unshuffle(space, w, reduced=True)})
        mat = []
        for w in degree_words:
            red = unshuffle(space, w, reduced=True)
            mat.append([red.get(p, Fraction(0)) for p in pairs])
        rank = _rank([list(col) for col in zip(*mat)]) if pairs else 0
        primitive_dim = len(degree_words) - rank
        lie_elements = [lie_to_tensor(space, lw.expr) for lw in basis
                        if lw.degree(space) == degree]
        lie_mat = [[e.get(w, Fraction(0)) for w in degree_words]
                   for e in lie_elements]
        lie_rank = _rank(lie_mat) if lie_elements else 0
        assert lie_rank == len(lie_elements), f"dependent basis in degree {degree}"
        assert lie_rank == primitive_dim, f"rank mismatch in degree {degree}"


def _rank(mat):
    if not mat:
        return 0
    mat = [row[:] for row in mat]
    rows, cols = len(mat), len(mat[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
    return r


def test_nested_bracket_single():
    v = {("a",): Fraction(3)}
    assert nested_bracket(ODD, [v], [1]) == v


def test_nested_bracket_two_odd_distinct():
    space = GradedSpace("uv", (("u", 1), ("v", 1)))
    u = {("u",): Fraction(1)}
    v = {("v",): Fraction(1)}
    out = nested_bracket(space, [u, v], [1, 1])
    # [u,v] + [v,u] = 2[u,v] for odd generators
    expected: Vector = {}
    add_into(expected, lie_to_tensor(space, ("u", "v")), 2)
    assert vec_eq(out, expected)


def test_nested_bracket_triple_repeated_odd_vanishes():
    a = {("a",): Fraction(1)}
    out = nested_bracket(ODD, [a, a, a], [1, 1, 1])
    assert is_zero(out)


def test_nested_bracket_words_matches_expansion():
    basis = lyndon_basis(TWO, TruncationPolicy(4, 2))
    words = [w for w in basis if not isinstance(w.expr, tuple)]
    out = nested_bracket_words(TWO, words)
    direct = nested_bracket(TWO, [lie_to_tensor(TWO, w.expr) for w in words],
                            [w.degree(TWO) for w in words])
    assert vec_eq(out, direct)


def test_antipode_on_unit_and_letters():
    sign, rev = antipode_word(TWO, ())
    assert sign == 1 and rev == ()
    sign, rev = antipode_word(TWO, ("a",))
    assert sign == -1 and rev == ("a",)


def test_antipode_two_letters():
    # s(xy) = (+1)(-1)**(|x||y|) yx  from s(y)s(x) with each s = -1
    space = GradedSpace("uv", (("u", 1), ("v", 2)))
    sign, rev = antipode_word(space, ("u", "v"))
    assert rev == ("v", "u")
    assert sign == (-1) ** (1 * 2) * 1  # (-1)**2 from the two minus signs


def test_enumerate_words_truncation_exact():
    words = enumerate_words(TWO, TruncationPolicy(4, 4))
    assert () in words
    assert all(word_degree(TWO, w) <= 4 for w in words)
    # degree-4 words over degrees (1,2): aaaa, aab, aba, baa, bb
    assert len([w for w in words if word_degree(TWO, w) == 4]) == 5


def test_lie_coordinates_roundtrip():
    basis = lyndon_basis(TWO, POLICY)
    target: Vector = {}
    add_into(target, lie_to_tensor(TWO, ("a", "b")), Fraction(3, 2))
    add_into(target, lie_to_tensor(TWO, ("a", "a")), Fraction(-2))
    coords = lie_coordinates(TWO, target, basis)
    rebuilt: Vector = {}
    for lw, c in coords.items():
        add_into(rebuilt, lie_to_tensor(TWO, lw.expr), c)
    assert vec_eq(rebuilt, target)


def test_lie_coordinates_rejects_non_lie():
    basis = lyndon_basis(TWO, POLICY)
    # ab alone is not primitive, hence not a Lie element
    assert lie_coordinates(TWO, {("a", "b"): Fraction(1)}, basis) is None
    # aa is: it equals [a,a]/2 for odd a
    coords = lie_coordinates(TWO, {("a", "a"): Fraction(1)}, basis)
    assert coords == {LieWord(("a", "a"), normal=True): Fraction(1, 2)}
