"""Twisting cochains and the Maurer-Cartan equation.

A twisting cochain is a degree -1 map tau: C -> H from a C-infinity
coalgebra into a strict dg (bi/Hopf) algebra.  Viewed on the desuspended
source it has degree 0, so the Maurer-Cartan sum

    d_H(tau(x)) + sum_n mu^(n)(tau (x) ... (x) tau)(c_n(x))

can be evaluated without any signs beyond those already stored in the
shifted structure maps c_n; this is the same equation as the literal
convolution form on the unshifted side (the compensated suspension pair
in ``graded`` makes the two formulations agree term by term).

The cochain <-> morphism correspondence extends tau multiplicatively to
the tensor algebra on the reduced desuspension of C (or, in lie mode, to
the free Lie algebra inside it) and measures the chain-map defect against
the derivation assembled from the reduced structure maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import (GradedSpace, LinearMap, Vector, accumulate, add_into,
                     is_zero)
from .structures import (DefectReport, StructureFamily, StructureError,
                         space_basis)
from .words import TruncationPolicy, enumerate_words, lie_to_tensor, lyndon_basis


class TwistingError(ValueError):
    pass


@dataclass
class TwistingCochain:
    """Degree -1 map C -> H given by its values on the basis of C."""

    space: GradedSpace
    target: object  # a Hopf backend
    entries: dict
    primitive_image: bool = False
    target_kind: str = "tensor-algebra"

    def __post_init__(self):
        clean = {}
        for name, val in self.entries.items():
            val = {w: Fraction(c) for w, c in val.items() if c}
            if not val:
                continue
            want = self.space.degree(name) - 1
            if self.space.degree(name) <= 1:
                raise TwistingError(
                    f"tau must vanish in degrees <= 1 (reduced convention), "
                    f"got a value on {name} of degree {self.space.degree(name)}")
            for w, c in val.items():
                if self.target.degree(w) != want:
                    raise TwistingError(
                        f"tau({name}) has a component of degree "
                        f"{self.target.degree(w)}, expected {want}")
            clean[name] = val
        self.entries = clean
        if self.primitive_image:
            for name, val in self.entries.items():
                if not self.target.is_primitive(val):
                    raise TwistingError(f"tau({name}) is not primitive")

    def value(self, name) -> Vector:
        return dict(self.entries.get(name, {}))

    def is_zero(self) -> bool:
        return not self.entries

    def as_map(self) -> LinearMap:
        def rule(key):
            return self.value(key[0])
        return LinearMap(1, 1, -1, self.space.degree, self.target.degree,
                         rule=rule)


@dataclass
class MaurerCartanReport:
    defects: dict = field(default_factory=dict)
    term_breakdown: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(is_zero(v) for v in self.defects.values())

    def summary(self) -> str:
        if self.ok:
            return "Maurer-Cartan equation holds exactly"
        bad = {k: v for k, v in self.defects.items() if not is_zero(v)}
        lines = [f"Maurer-Cartan defect on {len(bad)} basis element(s):"]
        for k, v in list(bad.items())[:8]:
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def _fold_mul(hopf, key: tuple) -> Vector:
    acc: Vector = {key[0]: Fraction(1)}
    for h in key[1:]:
        new: Vector = {}
        for w, c in acc.items():
            add_into(new, hopf.mul((w, h)), c)
        acc = new
    return acc


def check_maurer_cartan(tau: TwistingCochain, coalgebra: StructureFamily,
                        policy: TruncationPolicy) -> MaurerCartanReport:
    """Exact evaluation of the Maurer-Cartan sum on every basis element."""
    hopf = tau.target
    report = MaurerCartanReport()
    for x in coalgebra.space.atoms():
        total: Vector = {}
        terms = {}
        dval: Vector = {}
        for w, c in tau.value(x).items():
            add_into(dval, hopf.diff((w,)), c)
        if dval:
            terms["dH"] = dval
            add_into(total, dval, 1)
        for n in range(1, coalgebra.max_arity + 1):
            cn = coalgebra.map(n)
            term: Vector = {}
            for legs, coeff in cn((x,)).items():
                vals = [tau.value(y) for y in legs]
                if any(not v for v in vals):
                    continue
                for combo in itertools.product(*(v.items() for v in vals)):
                    c2 = coeff
                    words = []
                    for w, cw in combo:
                        c2 *= cw
                        words.append(w)
                    add_into(term, _fold_mul(hopf, tuple(words)), c2)
            if term:
                terms[f"m{n}"] = term
                add_into(total, term, 1)
        report.defects[x] = total
        report.term_breakdown[x] = terms
    return report


def reduced_generators(space: GradedSpace) -> GradedSpace:
    """The desuspended reduced space: basis names of degree >= 2, shifted."""
    basis = tuple((name, d - 1) for name, d in space.basis if d >= 2)
    return GradedSpace(f"{space.name}-red[-1]", basis)


def cobar_derivation(coalgebra: StructureFamily):
    """The derivation on T(reduced C[-1]) assembled from the reduced
    structure maps; returns (generator space, word -> Vector function)."""
    gens = reduced_generators(coalgebra.space)

    def gen_value(name) -> Vector:
        out: Vector = {}
        for n in range(1, coalgebra.max_arity + 1):
            cn = coalgebra.map(n)
            for legs, coeff in cn((name,)).items():
                if all(leg in gens for leg in legs):
                    accumulate(out, tuple(legs), coeff)
        return out

    def apply(word: tuple) -> Vector:
        out: Vector = {}
        crossed = 0
        for i, a in enumerate(word):
            sign = -1 if crossed % 2 else 1
            for mid, coeff in gen_value(a).items():
                accumulate(out, word[:i] + mid + word[i + 1:], coeff * sign)
            crossed += gens.degree(a)
        return out

    return gens, apply


@dataclass
class MorphismReport:
    mode: str
    values: dict
    defects: dict

    @property
    def ok(self) -> bool:
        return all(is_zero(v) for v in self.defects.values())

    def summary(self) -> str:
        if self.ok:
            return f"{self.mode} extension is a chain map"
        bad = [k for k, v in self.defects.items() if not is_zero(v)]
        return f"chain-map defect on {len(bad)} word(s), first: {bad[:4]}"


def cochain_to_morphism(tau: TwistingCochain, coalgebra: StructureFamily,
                        policy: TruncationPolicy,
                        mode: str = "assoc") -> MorphismReport:
    """Extend tau multiplicatively (assoc) or as a Lie map (lie) and
    report the chain-map defect on every word within the policy."""
    if mode not in ("assoc", "lie"):
        raise TwistingError(f"unknown morphism mode {mode!r}")
    if mode == "lie" and not tau.primitive_image:
        raise TwistingError("lie-mode extension requires a primitive image")
    hopf = tau.target
    gens, derivation = cobar_derivation(coalgebra)

    def tau_T(word: tuple) -> Vector:
        acc: Vector = {hopf.unit: Fraction(1)}
        for letter in word:
            val = tau.value(letter)
            new: Vector = {}
            for w, c in acc.items():
                for w2, c2 in val.items():
                    add_into(new, hopf.mul((w, w2)), c * c2)
            acc = new
        return acc

    def defect_on(expansion: Vector) -> Vector:
        out: Vector = {}
        for word, coeff in expansion.items():
            for w, c in tau_T(word).items():
                add_into(out, hopf.diff((w,)), coeff * c)
            for word2, c in derivation(word).items():
                add_into(out, tau_T(word2), coeff * c)
        return out

    values = {}
    defects = {}
    if mode == "assoc":
        for word in enumerate_words(gens, policy):
            values[word] = tau_T(word)
            defects[word] = defect_on({word: Fraction(1)})
    else:
        for lw in lyndon_basis(gens, policy):
            expansion = lie_to_tensor(gens, lw.expr)
            val: Vector = {}
            for word, c in expansion.items():
                add_into(val, tau_T(word), c)
            values[lw.expr] = val
            defects[lw.expr] = defect_on(expansion)
            if val and not hopf.is_primitive(val):
                raise TwistingError(
                    f"lie extension left the primitives on {lw.expr}")
    return MorphismReport(mode, values, defects)


def check_mc_element(family: StructureFamily, element: Vector) -> Vector:
    """Defect of the Maurer-Cartan equation for an element of an
    A-infinity algebra: sum_n b_n(tau, ..., tau) in shifted form.
    The element must be homogeneous of shifted degree 0."""
    if family.is_coalgebra():
        raise StructureError("MC elements live in algebra families")
    for atom, c in element.items():
        if c and family.shifted_degree(atom) != 0:
            raise StructureError(
                f"MC element must have shifted degree 0, {atom} has "
                f"{family.shifted_degree(atom)}")
    defect: Vector = {}
    for n in range(1, family.max_arity + 1):
        bn = family.map(n)
        for combo in itertools.product(element.items(), repeat=n):
            coeff = Fraction(1)
            key = []
            for atom, c in combo:
                coeff *= c
                key.append(atom)
            add_into(defect, bn(tuple(key)), coeff)
    return defect


class AInfMorphism:
    """A family {f_n} of shifted-degree-0 maps between two families."""

    def __init__(self, source: StructureFamily, target: StructureFamily,
                 components: dict):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.max_arity = max(components) if components else 1
        for n, f in components.items():
            if f.degree != 0:
                raise StructureError(
                    f"morphism component f_{n} must have shifted degree 0")

    def component(self, n: int) -> LinearMap:
        if n in self.components:
            return self.components[n]
        return LinearMap.zero(n, 1, 0, self.source.shifted_degree,
                              self.target.shifted_degree)

    def check(self, policy: TruncationPolicy,
              max_arity: int | None = None) -> DefectReport:
        """The A-infinity morphism identity, evaluated mechanically."""
        from .graded import tensor_apply
        report = DefectReport()
        atoms = space_basis(self.source.space, policy)
        ident = LinearMap.identity(self.source.shifted_degree)
        top = max_arity or max(2 * self.max_arity - 1, self.source.max_arity)
        for n in range(1, top + 1):
            if n > policy.max_word_length:
                break
            for word in itertools.product(atoms, repeat=n):
                if sum(self.source.space.degree(a) for a in word) > policy.max_total_degree:
                    continue
                lhs: Vector = {}
                for k in range(1, n + 1):
                    fk = self.component(n - k + 1)
                    bk = self.source.map(k)
                    for j in range(n - k + 1):
                        factors = [ident] * j + [bk] + [ident] * (n - k - j)
                        for key, coeff in tensor_apply(factors, word).items():
                            add_into(lhs, fk(key), coeff)
                rhs: Vector = {}
                for r in range(1, n + 1):
                    br = self.target.map(r)
                    for split in _compositions(n, r):
                        factors = [self.component(i) for i in split]
                        for key, coeff in tensor_apply(factors, word).items():
                            add_into(rhs, br(key), coeff)
                defect = dict(lhs)
                add_into(defect, rhs, -1)
                report.add(n, word, defect)
        return report

    def push(self, element: Vector) -> Vector:
        """tau' = f_1(tau) + f_2(tau, tau) + ... for an MC element."""
        out: Vector = {}
        for n in range(1, self.max_arity + 1):
            fn = self.component(n)
            for combo in itertools.product(element.items(), repeat=n):
                coeff = Fraction(1)
                key = []
                for atom, c in combo:
                    coeff *= c
                    key.append(atom)
                add_into(out, fn(tuple(key)), coeff)
        return out


def _compositions(n: int, r: int):
    """All ways to write n as an ordered sum of r positive integers."""
    if r == 1:
        yield (n,)
        return
    for first in range(1, n - r + 2):
        for rest in _compositions(n - first, r - 1):
            yield (first,) + rest


def pushforward_mc(element: Vector, morphism: AInfMorphism,
                   policy: TruncationPolicy) -> Vector:
    """Push a verified MC element through a verified morphism; the image
    is re-verified exactly before being returned."""
    src_defect = check_mc_element(morphism.source, element)
    if not is_zero(src_defect):
        raise StructureError(f"input is not Maurer-Cartan: {src_defect}")
    mcheck = morphism.check(policy)
    if not mcheck.ok:
        raise StructureError("morphism fails its identity:\n" + mcheck.summary())
    image = morphism.push(element)
    out_defect = check_mc_element(morphism.target, image)
    if not is_zero(out_defect):
        raise StructureError(f"pushforward failed to be Maurer-Cartan: {out_defect}")
    return image
