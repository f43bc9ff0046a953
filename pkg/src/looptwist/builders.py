"""Twisted tensor structures on C (x) H.

Given a C-infinity coalgebra C, a strict Hopf backend H and a twisting
cochain tau with primitive image, the maps built here are:

* the untwisted structure  c_n (x) (iterated coproduct of H);
* the twisted coalgebra {d_tau, c_2^tau, ...}: the arity-k map receives a
  correction from every higher c_n that feeds its last n-k output legs
  through tau, brackets the resulting primitives into a single one, lets
  it act on the H factor (left multiplication, bracket action, or
  conjugation), and only then applies the iterated coproduct;
* the twisted algebra {d_tau, m_2, m_3, ...} whose higher maps are the
  untwisted combination of the pairing-dual products on C with the
  product of H;
* the symmetrized bracket family restricted to C (x) Prim(H).

All signs come from the Koszul primitives; the exact Stasheff suites in
the tests are the certification that the conventions cohere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graded import (LinearMap, Vector, accumulate, add_into, is_zero,
                     koszul_sign, tensor_apply)
from .structures import (Pairing, ProductView, StructureError,
                         StructureFamily, check_ainf, pair_to_algebra,
                         symmetrize_to_linf)
from .twisting import TwistingCochain, check_maurer_cartan
from .words import TruncationPolicy, lyndon_basis, lie_to_tensor, nested_bracket

ACTION_KINDS = ("left_mult", "bracket", "conjugation")


def hopf_action(hopf, kind: str, a: Vector, word: tuple) -> Vector:
    """Act by the (homogeneous) element a on a basis word of H."""
    if kind not in ACTION_KINDS:
        raise StructureError(f"unknown action kind {kind!r}")
    degrees = {hopf.degree(w) for w in a}
    if len(degrees) > 1:
        raise StructureError("action requires a homogeneous acting element")
    da = degrees.pop() if degrees else 0
    dw = hopf.degree(word)
    out: Vector = {}
    if kind == "left_mult":
        for w, c in a.items():
            add_into(out, hopf.mul((w, word)), c)
        return out
    if kind == "bracket":
        sign = -1 if (da * dw) % 2 else 1
        for w, c in a.items():
            add_into(out, hopf.mul((w, word)), c)
            add_into(out, hopf.mul((word, w)), -sign * c)
        return out
    # conjugation: sum over Delta(a) of +-(a_1 . word . s(a_2))
    for w, c in a.items():
        for (a1, a2), c2 in hopf.comul((w,)).items():
            sign = -1 if (dw * hopf.degree(a2)) % 2 else 1
            for (sa2,), c3 in hopf.antipode((a2,)).items():
                for (left,), c4 in hopf.mul((a1, word)).items():
                    add_into(out, hopf.mul((left, sa2)), c * c2 * c3 * c4 * sign)
    return out


def _hopf_bracket(hopf, u: Vector, du: int, v: Vector, dv: int) -> Vector:
    """[u, v] through the product of the backend (not bare concatenation)."""
    out: Vector = {}
    sign = -1 if (du * dv) % 2 else 1
    for wl, cl in u.items():
        for wr, cr in v.items():
            add_into(out, hopf.mul((wl, wr)), cl * cr)
            add_into(out, hopf.mul((wr, wl)), -sign * cl * cr)
    return out


def hopf_nested_bracket(hopf, elements: list[Vector],
                        degrees: list[int]) -> Vector:
    """Symmetrized left-nested bracket inside the backend's product."""
    from .graded import xi_sign
    n = len(elements)
    if n == 1:
        return dict(elements[0])
    out: Vector = {}
    for perm in itertools.permutations(range(1, n + 1)):
        sign = xi_sign(perm, degrees)
        acc = dict(elements[perm[-1] - 1])
        dacc = degrees[perm[-1] - 1]
        for idx in reversed(perm[:-1]):
            acc = _hopf_bracket(hopf, elements[idx - 1], degrees[idx - 1],
                                acc, dacc)
            dacc += degrees[idx - 1]
        add_into(out, acc, sign)
    return out


def iterated_coproduct(hopf, word: tuple, n: int) -> Vector:
    """Delta^{(n)}: H -> H^{(x) n}; n = 1 is the identity."""
    acc: Vector = {(word,): Fraction(1)}
    for _ in range(n - 1):
        new: Vector = {}
        for key, c in acc.items():
            # expand the last leg (coassociativity makes the choice moot)
            for (l, r), c2 in hopf.comul((key[-1],)).items():
                accumulate(new, key[:-1] + (l, r), c * c2)
        acc = new
    return acc


def _interleave(cdeg, hopf, clegs: tuple, hlegs: tuple):
    """(sign, product atoms) for (y_1..y_n, h_1..h_n) -> ((y_1,h_1),...)."""
    n = len(clegs)
    degs = [cdeg(y) for y in clegs] + [hopf.degree(h) for h in hlegs]
    perm = []
    for i in range(n):
        perm.extend([i + 1, n + i + 1])
    sign = koszul_sign(perm, degs)
    atoms = tuple((clegs[i], hlegs[i]) for i in range(n))
    return sign, atoms


@dataclass
class TwistedFamily:
    """A verified-on-demand twisted structure on C (x) H."""

    coalgebra: StructureFamily          # the input structure on C
    hopf: object
    tau: TwistingCochain
    action: str
    family: StructureFamily             # the structure on C (x) H
    policy: TruncationPolicy

    def check(self, max_defect_arity: int | None = None):
        return check_ainf(self.family, self.policy, max_defect_arity)

    def arity_one_entries(self) -> dict:
        """Unshifted entries of the differential, for homology assembly."""
        view = self.family.space
        d = self.family.unshifted_map(1)
        out = {}
        for atom in view.basis(self.policy):
            val = d((atom,))
            if val:
                out[atom] = {k[0]: c for k, c in val.items()}
        return out


def _entry_policy(coalgebra: StructureFamily,
                  policy: TruncationPolicy) -> TruncationPolicy:
    """Entry tables cover a slightly larger window than the verification
    policy so that intermediate legs of composed identities never fall
    off the table (higher maps raise unshifted degree by up to n-2)."""
    pad = max(coalgebra.max_arity, 2)
    return TruncationPolicy(policy.max_total_degree + pad,
                            policy.max_word_length + pad)


def _twisted_coalgebra_entries(coalgebra: StructureFamily, hopf,
                               tau: TwistingCochain, action: str,
                               policy: TruncationPolicy,
                               arities: range) -> dict:
    view = ProductView(coalgebra.space, hopf)
    cdeg = coalgebra.space.degree
    atoms = view.basis(_entry_policy(coalgebra, policy))
    tau_map = tau.as_map()
    ident_c = LinearMap.identity(cdeg)
    max_arity = coalgebra.max_arity
    entries_by_arity: dict = {}

    # unshifted structure maps of C
    cu = {n: coalgebra.unshifted_map(n) for n in range(1, max_arity + 1)}

    for k in arities:
        entries = {}
        for (c, h) in atoms:
            out: Vector = {}
            # untwisted part; the arity-1 piece is the tensor differential
            if k == 1:
                for (y,), coeff in cu[1]((c,)).items():
                    accumulate(out, ((y, h),), coeff)
                sign = -1 if cdeg(c) % 2 else 1
                for (h2,), coeff in hopf.diff((h,)).items():
                    accumulate(out, ((c, h2),), coeff * sign)
            elif k <= max_arity:
                for clegs, coeff in cu[k]((c,)).items():
                    for hkey, c2 in iterated_coproduct(hopf, h, k).items():
                        sign, okey = _interleave(cdeg, hopf, clegs, hkey)
                        accumulate(out, okey, coeff * c2 * sign)
            # twisted corrections from every higher structure map
            for n in range(max(k + 1, 2), max_arity + 1):
                factors = [ident_c] * k + [tau_map] * (n - k)
                for clegs, coeff in cu[n]((c,)).items():
                    for key, c2 in tensor_apply(factors, clegs).items():
                        kept, values = key[:k], key[k:]
                        prim = hopf_nested_bracket(
                            hopf, [{w: Fraction(1)} for w in values],
                            [hopf.degree(w) for w in values])
                        acted: Vector = {}
                        for bw, c3 in prim.items():
                            add_into(acted,
                                     hopf_action(hopf, action,
                                                 {bw: Fraction(1)}, h), c3)
                        for hw, c4 in acted.items():
                            for hkey, c5 in iterated_coproduct(hopf, hw, k).items():
                                sign, okey = _interleave(cdeg, hopf, kept, hkey)
                                accumulate(out, okey, coeff * c2 * c4 * c5 * sign)
            if out:
                entries[(c, h)] = out
        if entries:
            entries_by_arity[k] = entries
    return entries_by_arity


def build_twisted_coalgebra(coalgebra: StructureFamily, hopf,
                            tau: TwistingCochain, action: str,
                            policy: TruncationPolicy,
                            verify_mc: bool = True) -> TwistedFamily:
    """The twisted A-infinity coalgebra {d_tau, c_2^tau, ...} on C (x) H."""
    if action not in ACTION_KINDS:
        raise StructureError(f"unknown action kind {action!r}")
    if not tau.primitive_image and not tau.is_zero():
        raise StructureError(
            "twisted coalgebra construction requires Im(tau) in the primitives")
    if action == "conjugation" and not hasattr(hopf, "antipode"):
        raise StructureError("conjugation action needs an antipode")
    if verify_mc:
        mc = check_maurer_cartan(tau, coalgebra, policy)
        if not mc.ok:
            raise StructureError("tau fails Maurer-Cartan:\n" + mc.summary())
    view = ProductView(coalgebra.space, hopf)
    entries = _twisted_coalgebra_entries(coalgebra, hopf, tau, action, policy,
                                         range(1, coalgebra.max_arity + 1))
    family = StructureFamily.from_unshifted(
        "ainf_coalgebra", view, -1, entries, coalgebra.max_arity)
    return TwistedFamily(coalgebra, hopf, tau, action, family, policy)


def untwisted_tensor_coalgebra(coalgebra: StructureFamily, hopf,
                               policy: TruncationPolicy) -> TwistedFamily:
    """The untwisted family: tau = 0 reproduces it bit for bit."""
    zero = TwistingCochain(coalgebra.space, hopf, {}, primitive_image=True)
    return build_twisted_coalgebra(coalgebra, hopf, zero, "left_mult", policy,
                                   verify_mc=False)


def build_twisted_algebra(coalgebra: StructureFamily, pairing: Pairing, hopf,
                          tau: TwistingCochain, action: str,
                          policy: TruncationPolicy,
                          verify_mc: bool = True) -> TwistedFamily:
    """{d_tau, m_2, m_3, ...}: twisted differential, untwisted higher maps
    combining the pairing-dual products on C with the product of H."""
    if action not in ("bracket", "conjugation"):
        raise StructureError(
            "the twisted algebra requires a derivation action "
            "(bracket or conjugation), not left multiplication")
    algebra_on_c = pair_to_algebra(coalgebra, pairing, policy)
    d = pairing.degree
    view = ProductView(coalgebra.space, hopf)
    cdeg = coalgebra.space.degree

    diff_entries = _twisted_coalgebra_entries(coalgebra, hopf, tau, action,
                                              policy, range(1, 2))
    if verify_mc:
        mc = check_maurer_cartan(tau, coalgebra, policy)
        if not mc.ok:
            raise StructureError("tau fails Maurer-Cartan:\n" + mc.summary())

    entries_by_arity = dict(diff_entries)
    atoms = view.basis(_entry_policy(coalgebra, policy))
    for n in range(2, coalgebra.max_arity + 1):
        mn = algebra_on_c.unshifted_map(n)
        # pairs are tabulated on a doubled window so products of homology
        # classes anywhere in the window stay on the table
        bound = (2 * policy.max_total_degree if n == 2
                 else policy.max_total_degree + d)
        entries = {}
        for word in itertools.product(atoms, repeat=n):
            if sum(view.degree(a) for a in word) > bound:
                continue
            clegs = tuple(a[0] for a in word)
            hlegs = tuple(a[1] for a in word)
            # rearrange ((c1,h1)...(cn,hn)) -> (c1..cn, h1..hn)
            degs = []
            for cl, hl in word:
                degs.extend([cdeg(cl), hopf.degree(hl)])
            perm = [2 * i + 1 for i in range(n)] + [2 * i + 2 for i in range(n)]
            sign = koszul_sign(perm, degs)
            cval = mn(clegs)
            if not cval:
                continue
            hval: Vector = {hlegs[0]: Fraction(1)}
            for hl in hlegs[1:]:
                new: Vector = {}
                for w, c in hval.items():
                    add_into(new, hopf.mul((w, hl)), c)
                hval = new
            out: Vector = {}
            for (cout,), c1 in cval.items():
                # the product of H crosses nothing further: mu degree 0
                for hout, c2 in hval.items():
                    accumulate(out, ((cout, hout),), c1 * c2 * sign)
            if out:
                entries[word] = out
        if entries:
            entries_by_arity[n] = entries
    family = StructureFamily.from_unshifted(
        "ainf_algebra", view, 1 - d, entries_by_arity, coalgebra.max_arity)
    return TwistedFamily(coalgebra, hopf, tau, action, family, policy)


def derivation_defect(alg: TwistedFamily) -> dict:
    """d_tau m_2 - m_2 (d_tau (x) 1 + 1 (x) d_tau) on all basis pairs,
    in unshifted terms; exact zeros certify the derivation identity."""
    view = alg.family.space
    d1 = alg.family.unshifted_map(1)
    m2 = alg.family.unshifted_map(2)
    ident = LinearMap.identity(view.degree)
    defects = {}
    atoms = view.basis(alg.policy)
    for x in atoms:
        for y in atoms:
            if view.degree(x) + view.degree(y) > alg.policy.max_total_degree:
                continue
            lhs: Vector = {}
            for key, c in m2((x, y)).items():
                add_into(lhs, d1(key), c)
            rhs: Vector = {}
            for key, c in tensor_apply([d1, ident], (x, y)).items():
                add_into(rhs, m2(key), c)
            for key, c in tensor_apply([ident, d1], (x, y)).items():
                add_into(rhs, m2(key), c)
            defect = dict(lhs)
            add_into(defect, rhs, -1)
            if not is_zero(defect):
                defects[(x, y)] = defect
    return defects


def primitive_basis(hopf, policy: TruncationPolicy) -> list[Vector]:
    """A basis of Prim(H) within the policy, as expansions."""
    from .hopf import TensorHopf
    if isinstance(hopf, TensorHopf):
        return [lie_to_tensor(hopf.gens, lw.expr)
                for lw in lyndon_basis(hopf.gens, policy)]
    # exterior Hopf: the generators themselves
    return [{(g,): Fraction(1)} for g in hopf.gens.atoms()]


@dataclass
class PrimitiveRestrictionReport:
    closed: bool
    failures: list

    def summary(self) -> str:
        if self.closed:
            return "all symmetrized brackets of primitive legs have primitive H-legs"
        return f"{len(self.failures)} closure failure(s): {self.failures[:4]}"


def restrict_linf_to_primitives(alg: TwistedFamily,
                                policy: TruncationPolicy | None = None,
                                max_word_length: int = 2) -> tuple:
    """Symmetrize the algebra family and verify it closes on
    C (x) Prim(H); closure failure indicates a sign bug upstream."""
    policy = policy or alg.policy
    linf = symmetrize_to_linf(alg.family)
    coeff = alg.coalgebra.space
    prims = primitive_basis(alg.hopf, policy)
    elements = []
    for cname in coeff.atoms():
        for p in prims:
            deg = coeff.degree(cname) + alg.hopf.degree(next(iter(p)))
            if deg <= policy.max_total_degree:
                elements.append((cname, p))
    failures = []
    for n in range(2, alg.family.max_arity + 1):
        ln = linf.map(n)
        for combo in itertools.product(elements, repeat=n):
            total = sum(coeff.degree(c) + alg.hopf.degree(next(iter(p)))
                        for c, p in combo)
            if total > policy.max_total_degree:
                continue
            value: Vector = {}
            for expansion in itertools.product(*(p.items() for c, p in combo)):
                coefficient = Fraction(1)
                key = []
                for (c, _), (w, cw) in zip(combo, expansion):
                    coefficient *= cw
                    key.append((c, w))
                add_into(value, ln(tuple(key)), coefficient)
            # group the H parts per coefficient leg and test primitivity
            by_c: dict = {}
            for (atom, coefficient) in value.items():
                cpart, hpart = atom[0]
                by_c.setdefault(cpart, {})
                accumulate(by_c[cpart], hpart, coefficient)
            for cpart, hvec in by_c.items():
                if hvec and not alg.hopf.is_primitive(hvec):
                    failures.append((n, tuple(c for c, _ in combo), cpart))
    report = PrimitiveRestrictionReport(not failures, failures)
    if failures:
        raise StructureError("L-infinity restriction failed to close: "
                             + report.summary())
    return linf, report
