"""Hopf algebra backends for the fiber factor of twisted tensor products.

Two realizations share one small interface (degree / basis / mul / comul /
antipode / diff / unit):

* ``TensorHopf`` -- the tensor algebra T(V) on a shifted generator space,
  with concatenation product, unshuffle coproduct (generators primitive),
  reversal antipode, and a differential extended as a derivation from its
  values on generators.  This models chains on a based loop space.

* ``ExteriorHopf`` -- the exterior Hopf algebra on odd primitive
  generators with zero differential.  This models the homology of a
  connected Lie group.

Atoms are tuples of generator names in both cases, so the same machinery
consumes either.
"""

from __future__ import annotations

from fractions import Fraction

from .graded import (GradedSpace, LinearMap, Vector, accumulate, add_into,
                     is_zero, koszul_sign)
from .words import (TruncationPolicy, antipode_word, derivation_extend,
                    enumerate_words, unshuffle, word_degree)


class TensorHopf:
    """T(V) for a finite shifted generator space V, all degrees >= 1."""

    def __init__(self, gens: GradedSpace, diff_on_gens: dict | None = None):
        self.gens = gens
        if any(gens.degree(a) < 1 for a in gens.atoms()):
            raise ValueError("tensor Hopf generators must have degree >= 1")
        self.diff_on_gens = {k: dict(v) for k, v in (diff_on_gens or {}).items()}
        for name, val in self.diff_on_gens.items():
            want = gens.degree(name) - 1
            for w, c in val.items():
                if c and word_degree(gens, w) != want:
                    raise ValueError(f"differential of {name} is not degree -1")
        self._derivation = derivation_extend(gens, self.diff_on_gens, -1)

    unit: tuple = ()

    def degree(self, word: tuple) -> int:
        return word_degree(self.gens, word)

    def basis(self, policy: TruncationPolicy) -> list[tuple]:
        return enumerate_words(self.gens, policy)

    @property
    def mul(self) -> LinearMap:
        def rule(key):
            return {(key[0] + key[1],): Fraction(1)}
        return LinearMap(2, 1, 0, self.degree, self.degree, rule=rule)

    @property
    def comul(self) -> LinearMap:
        def rule(key):
            return unshuffle(self.gens, key[0])
        return LinearMap(1, 2, 0, self.degree, self.degree, rule=rule)

    @property
    def antipode(self) -> LinearMap:
        def rule(key):
            sign, rev = antipode_word(self.gens, key[0])
            return {(rev,): Fraction(sign)}
        return LinearMap(1, 1, 0, self.degree, self.degree, rule=rule)

    @property
    def diff(self) -> LinearMap:
        def rule(key):
            return {(w,): c for w, c in self._derivation(key[0]).items()}
        return LinearMap(1, 1, -1, self.degree, self.degree, rule=rule)

    def is_primitive(self, v: Vector) -> bool:
        red: Vector = {}
        for word, coeff in v.items():
            add_into(red, unshuffle(self.gens, word, reduced=True), coeff)
        return is_zero(red)


class ExteriorHopf:
    """Exterior Hopf algebra on odd primitive generators, zero differential.

    Words are tuples of generator names sorted in the declared order;
    repeated letters vanish (forced over the rationals by odd degree).
    """

    def __init__(self, gens: GradedSpace):
        self.gens = gens
        for a in gens.atoms():
            if gens.degree(a) % 2 == 0:
                raise ValueError(f"exterior generator {a} must have odd degree")
        self._order = {a: i for i, a in enumerate(gens.atoms())}

    unit: tuple = ()

    def degree(self, word: tuple) -> int:
        return word_degree(self.gens, word)

    def basis(self, policy: TruncationPolicy | None = None) -> list[tuple]:
        import itertools
        names = self.gens.atoms()
        out = []
        for r in range(len(names) + 1):
            for combo in itertools.combinations(names, r):
                w = tuple(sorted(combo, key=self._order.get))
                if policy is None or self.degree(w) <= policy.max_total_degree:
                    out.append(w)
        return sorted(out, key=lambda w: (self.degree(w), w))

    def normalize(self, letters: tuple):
        """(sign, sorted word) or (0, None) when a letter repeats."""
        if len(set(letters)) != len(letters):
            return 0, None
        order = sorted(range(len(letters)), key=lambda i: self._order[letters[i]])
        perm = [i + 1 for i in order]
        sign = koszul_sign(perm, [self.gens.degree(a) for a in letters])
        return sign, tuple(letters[i] for i in order)

    @property
    def mul(self) -> LinearMap:
        def rule(key):
            sign, word = self.normalize(key[0] + key[1])
            if not sign:
                return {}
            return {(word,): Fraction(sign)}
        return LinearMap(2, 1, 0, self.degree, self.degree, rule=rule)

    @property
    def comul(self) -> LinearMap:
        def rule(key):
            return unshuffle(self.gens, key[0])
        return LinearMap(1, 2, 0, self.degree, self.degree, rule=rule)

    @property
    def antipode(self) -> LinearMap:
        def rule(key):
            sign, rev = antipode_word(self.gens, key[0])
            s2, word = self.normalize(rev)
            return {(word,): Fraction(sign * s2)}
        return LinearMap(1, 1, 0, self.degree, self.degree, rule=rule)

    @property
    def diff(self) -> LinearMap:
        return LinearMap.zero(1, 1, -1, self.degree, self.degree)

    def is_primitive(self, v: Vector) -> bool:
        red: Vector = {}
        for word, coeff in v.items():
            add_into(red, unshuffle(self.gens, word, reduced=True), coeff)
        return is_zero(red)


def check_hopf_axioms(hopf, policy: TruncationPolicy) -> list[str]:
    """Exact checks of coassociativity, the antipode axiom and the
    derivation property of the differential on the basis within policy."""
    failures = []
    words = hopf.basis(policy)
    comul, mul, anti, diff = hopf.comul, hopf.mul, hopf.antipode, hopf.diff
    for w in words:
        # coassociativity
        lhs: Vector = {}
        rhs: Vector = {}
        for (pair, c) in comul((w,)).items():
            for (pair2, c2) in comul((pair[0],)).items():
                accumulate(lhs, pair2 + (pair[1],), c * c2)
            for (pair2, c2) in comul((pair[1],)).items():
                accumulate(rhs, (pair[0],) + pair2, c * c2)
        if not all(lhs.get(k, 0) == rhs.get(k, 0) for k in set(lhs) | set(rhs)):
            failures.append(f"coassociativity fails on {w}")
        # antipode axiom m(1 (x) s)Delta = unit counit
        acc: Vector = {}
        for (pair, c) in comul((w,)).items():
            for (sw, cs) in anti((pair[1],)).items():
                for (prod, cp) in mul((pair[0],) + sw).items():
                    accumulate(acc, prod, c * cs * cp)
        expect: Vector = {(hopf.unit,): Fraction(1)} if len(w) == 0 else {}
        if not all(acc.get(k, 0) == expect.get(k, 0) for k in set(acc) | set(expect)):
            failures.append(f"antipode axiom fails on {w}")
        # differential is a derivation of the product (checked on pairs below)
    for u in words:
        for v in words:
            if hopf.degree(u) + hopf.degree(v) > policy.max_total_degree:
                continue
            lhs = {}
            for pkey, c in mul((u, v)).items():
                add_into(lhs, diff(pkey), c)
            rhs = {}
            for dw, c in diff((u,)).items():
                add_into(rhs, mul(dw + (v,)), c)
            sign = -1 if hopf.degree(u) % 2 else 1
            for dw, c in diff((v,)).items():
                add_into(rhs, mul((u,) + dw), c * sign)
            if not all(lhs.get(k, 0) == rhs.get(k, 0) for k in set(lhs) | set(rhs)):
                failures.append(f"differential not a derivation on {u}, {v}")
    return failures
