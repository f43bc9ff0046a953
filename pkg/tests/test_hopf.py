"""Hopf backends: tensor algebra and exterior algebra."""

from fractions import Fraction

import pytest

from looptwist.graded import GradedSpace, add_into, is_zero, vec_eq
from looptwist.hopf import ExteriorHopf, TensorHopf, check_hopf_axioms
from looptwist.words import TruncationPolicy, lie_to_tensor

POLICY = TruncationPolicy(max_total_degree=4, max_word_length=4)


def tensor_on_a():
    return TensorHopf(GradedSpace("V", (("a", 1),)))


def exterior_on_u():
    return ExteriorHopf(GradedSpace("G", (("u", 1),)))


def test_tensor_hopf_axioms():
    assert check_hopf_axioms(tensor_on_a(), POLICY) == []


def test_tensor_hopf_axioms_two_generators():
    h = TensorHopf(GradedSpace("V", (("a", 1), ("b", 3))))
    assert check_hopf_axioms(h, POLICY) == []


def test_exterior_hopf_axioms():
    h = ExteriorHopf(GradedSpace("G", (("u", 1), ("v", 3))))
    assert check_hopf_axioms(h, TruncationPolicy(6, 4)) == []


def test_exterior_square_vanishes():
    h = exterior_on_u()
    assert h.mul((("u",), ("u",))) == {}


def test_exterior_anticommutes():
    h = ExteriorHopf(GradedSpace("G", (("u", 1), ("v", 1))))
    assert h.mul((("u",), ("v",))) == {(("u", "v"),): Fraction(1)}
    assert h.mul((("v",), ("u",))) == {(("u", "v"),): Fraction(-1)}


def test_antipode_negates_primitives():
    h = exterior_on_u()
    assert h.antipode((("u",),)) == {(("u",),): Fraction(-1)}
    t = tensor_on_a()
    assert t.antipode((("a",),)) == {(("a",),): Fraction(-1)}
    assert t.antipode(((),)) == {((),): Fraction(1)}


def test_tensor_generators_primitive():
    t = tensor_on_a()
    assert t.is_primitive({("a",): Fraction(1)})
    # aa = [a,a]/2 is primitive for odd a; bb is not for even b
    assert t.is_primitive({("a", "a"): Fraction(1)})
    h = TensorHopf(GradedSpace("W", (("b", 2),)))
    assert not h.is_primitive({("b", "b"): Fraction(1)})


def test_lie_elements_primitive_in_tensor_hopf():
    gens = GradedSpace("V", (("a", 1), ("b", 2)))
    t = TensorHopf(gens)
    assert t.is_primitive(lie_to_tensor(gens, ("a", "b")))
    assert t.is_primitive(lie_to_tensor(gens, ("a", ("a", "b"))))


def test_tensor_differential_is_derivation():
    gens = GradedSpace("V", (("a", 1), ("b", 3)))
    # d(b) = [a,a]/1 = 2aa, d(a) = 0: squares to zero since d(aa)=0
    h = TensorHopf(gens, {"b": {("a", "a"): Fraction(2)}})
    assert check_hopf_axioms(h, TruncationPolicy(6, 4)) == []
    # d squares to zero on the basis
    for w in h.basis(TruncationPolicy(6, 4)):
        out = {}
        for (w2,), c in h.diff((w,)).items():
            add_into(out, h.diff((w2,)), c)
        assert is_zero(out)


def test_tensor_differential_degree_validated():
    gens = GradedSpace("V", (("a", 1), ("b", 3)))
    with pytest.raises(ValueError):
        TensorHopf(gens, {"b": {("a",): Fraction(1)}})


def test_exterior_needs_odd_generators():
    with pytest.raises(ValueError):
        ExteriorHopf(GradedSpace("G", (("u", 2),)))


def test_exterior_basis():
    h = ExteriorHopf(GradedSpace("G", (("u", 1), ("v", 3))))
    words = h.basis()
    assert ((),) not in words
    assert set(words) == {(), ("u",), ("v",), ("u", "v")}
