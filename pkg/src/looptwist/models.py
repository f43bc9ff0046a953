"""End-to-end drivers: path spaces, free loop spaces, principal bundles.

A ``ManifoldModel`` couples the homology coalgebra of a simply connected
closed manifold with the free Lie model of its based loops: the tensor
Hopf algebra on the reduced desuspension carries the derivation dual to
the reduced structure maps (with the sign that makes the inclusion a
twisting cochain), and the three twisted constructions produce

* the based path space complex (left multiplication action),
* the free loop space complex (conjugation action),
* the loop product (twisted algebra, conjugation action).

A ``BundleModel`` replaces the loop Hopf algebra by the exterior homology
of a connected Lie group and reads the twisting cochain off the
characteristic classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graded import (GradedSpace, LinearMap, Vector, accumulate, add_into,
                     is_zero)
from .builders import (TwistedFamily, build_twisted_algebra,
                       build_twisted_coalgebra, untwisted_tensor_coalgebra)
from .homology import (HomologyResult, assemble_complex, homology,
                       induced_product)
from .hopf import ExteriorHopf, TensorHopf
from .structures import (Pairing, ProductView, StructureError,
                         StructureFamily, check_ainf, check_cinfty,
                         check_cyclic)
from .twisting import TwistingCochain, check_maurer_cartan
from .words import TruncationPolicy, lie_coordinates, lyndon_basis


class ModelError(ValueError):
    pass


def _default_policy(max_degree: int) -> TruncationPolicy:
    return TruncationPolicy(max_degree, max(max_degree, 1))


@dataclass
class ManifoldModel:
    name: str
    space: GradedSpace
    coalgebra: StructureFamily
    pairing: Pairing
    rename: dict                       # homology class -> shifted generator
    hopf: TensorHopf
    tau: TwistingCochain

    @classmethod
    def from_declared(cls, name: str, space: GradedSpace,
                      coalgebra: StructureFamily, pairing: Pairing,
                      rename: dict | None = None,
                      check_policy: TruncationPolicy | None = None
                      ) -> "ManifoldModel":
        """Assemble the loop Hopf algebra and inclusion cochain from a
        declared coalgebra; the generator differential is minus the Lie
        form of the reduced structure maps, which makes the inclusion
        Maurer-Cartan on the nose."""
        if any(d == 1 for _, d in space.basis):
            raise ModelError(f"{name}: degree-1 homology present; "
                             "the model requires a simply connected space")
        rename = dict(rename or {})
        reduced = [(b, d) for b, d in space.basis if d >= 2]
        for b, _ in reduced:
            rename.setdefault(b, f"t{b}")
        gens = GradedSpace(f"{name}-loops",
                           tuple((rename[b], d - 1) for b, d in reduced))
        lookup = {b: rename[b] for b, _ in reduced}

        policy = check_policy or _default_policy(
            2 * max((d for _, d in space.basis), default=2))
        basis = lyndon_basis(gens, policy)
        diff_on_gens: dict = {}
        for b, d in reduced:
            value: Vector = {}
            for n in range(2, coalgebra.max_arity + 1):
                cn = coalgebra.map(n)
                for legs, coeff in cn((b,)).items():
                    if all(leg in lookup for leg in legs):
                        word = tuple(lookup[leg] for leg in legs)
                        accumulate(value, word, -coeff)
            if not value:
                continue
            coords = lie_coordinates(gens, value, basis)
            if coords is None:
                raise ModelError(
                    f"{name}: reduced structure map of {b} is not a Lie "
                    "element; the declared coalgebra is not C-infinity")
            diff_on_gens[rename[b]] = value
        hopf = TensorHopf(gens, diff_on_gens)
        # differential squares to zero on generators
        for g in gens.atoms():
            out: Vector = {}
            for (w,), c in hopf.diff(((g,),)).items():
                add_into(out, hopf.diff((w,)), c)
            if not is_zero(out):
                raise ModelError(f"{name}: loop differential fails d^2 = 0 on {g}")
        tau = TwistingCochain(
            space, hopf,
            {b: {(rename[b],): Fraction(1)} for b, _ in reduced},
            primitive_image=True, target_kind="tensor-algebra")
        return cls(name, space, coalgebra, pairing, rename, hopf, tau)

    def verify(self, policy: TruncationPolicy) -> list[str]:
        failures = []
        r = check_ainf(self.coalgebra, policy)
        if not r.ok:
            failures.append("coalgebra identities: " + r.summary())
        r = check_cinfty(self.coalgebra, policy)
        if not r.ok:
            failures.append("shuffle-vanishing: " + r.summary())
        r = check_cyclic(self.coalgebra, self.pairing)
        if not r.ok:
            failures.append("cyclic invariance: " + r.summary())
        mc = check_maurer_cartan(self.tau, self.coalgebra, policy)
        if not mc.ok:
            failures.append("Maurer-Cartan: " + mc.summary())
        return failures


def path_space_model(model: ManifoldModel, max_degree: int) -> HomologyResult:
    """Homology of the twisted complex modeling the based path space."""
    policy = _default_policy(max_degree + 1)
    tw = build_twisted_coalgebra(model.coalgebra, model.hopf, model.tau,
                                 "left_mult", policy)
    return homology(assemble_complex(tw, max_degree + 1))


def free_loop_model(model: ManifoldModel, max_degree: int,
                    untwisted: bool = False) -> HomologyResult:
    """Homology of the conjugation-twisted complex modeling free loops."""
    policy = _default_policy(max_degree + 1)
    if untwisted:
        tw = untwisted_tensor_coalgebra(model.coalgebra, model.hopf, policy)
    else:
        tw = build_twisted_coalgebra(model.coalgebra, model.hopf, model.tau,
                                     "conjugation", policy)
    return homology(assemble_complex(tw, max_degree + 1))


def loop_algebra(model: ManifoldModel, max_degree: int) -> TwistedFamily:
    policy = _default_policy(max_degree + 1)
    return build_twisted_algebra(model.coalgebra, model.pairing, model.hopf,
                                 model.tau, "conjugation", policy)


def loop_product_table(model: ManifoldModel, max_degree: int):
    """The induced product on the free-loop homology classes."""
    alg = loop_algebra(model, max_degree)
    result = homology(assemble_complex(alg, max_degree + 1))
    table = induced_product(result, alg, max_degree)
    return result, table, alg


@dataclass
class BundleModel:
    name: str
    base: ManifoldModel
    group: ExteriorHopf
    characteristic: dict               # group generator -> functional on H_*(M)
    tau: TwistingCochain = field(init=False)

    def __post_init__(self):
        entries: dict = {}
        deg = self.base.space.degree
        for u in self.group.gens.atoms():
            p = self.characteristic.get(u, {})
            want = self.group.gens.degree(u) + 1
            for x, c in p.items():
                if not c:
                    continue
                if deg(x) != want:
                    raise ModelError(
                        f"{self.name}: characteristic class for {u} pairs a "
                        f"class of degree {deg(x)}, expected {want}")
                entries.setdefault(x, {})
                accumulate(entries[x], (u,), Fraction(c))
        self.tau = TwistingCochain(self.base.space, self.group, entries,
                                   primitive_image=True, target_kind="Hopf")


def bundle_model(bundle: BundleModel, max_degree: int,
                 variant: str = "homology"):
    """Twisted complex of a principal bundle; the cohomology variant also
    emits the dual algebra family together with its exact check report."""
    if variant not in ("homology", "cohomology"):
        raise ModelError(f"unknown bundle variant {variant!r}")
    policy = _default_policy(max_degree + 1)
    mc = check_maurer_cartan(bundle.tau, bundle.base.coalgebra, policy)
    if not mc.ok:
        raise ModelError("bundle cochain fails Maurer-Cartan:\n" + mc.summary())
    tw = build_twisted_coalgebra(bundle.base.coalgebra, bundle.group,
                                 bundle.tau, "left_mult", policy,
                                 verify_mc=False)
    result = homology(assemble_complex(tw, max_degree + 1))
    if variant == "homology":
        return result, tw, None
    dual = dual_algebra_family(tw.family, policy)
    report = check_ainf(dual, policy)
    return result, tw, (dual, report)


class DualView:
    """Atoms of the linear dual with negated homological degrees."""

    def __init__(self, view):
        self.view = view

    def degree(self, atom) -> int:
        return -self.view.degree(atom)

    def basis(self, policy: TruncationPolicy) -> list:
        return self.view.basis(policy)


def dual_algebra_family(family: StructureFamily,
                        policy: TruncationPolicy) -> StructureFamily:
    """Transpose a coalgebra family into the algebra family on the dual
    space (cohomological side), entry tables within the policy window."""
    if not family.is_coalgebra():
        raise StructureError("dual_algebra_family expects a coalgebra family")
    view = family.space
    dual_view = DualView(view)
    atoms = view.basis(policy)
    entries_by_arity: dict = {}
    for n in range(1, family.max_arity + 1):
        cn = family.map(n)
        entries: dict = {}
        for x in atoms:
            sx = family.shifted_degree(x)
            for legs, coeff in cn((x,)).items():
                sdegs = [family.shifted_degree(a) for a in legs]
                # transpose sign: reversal Koszul on the shifted legs
                rev = sum(sdegs[i] * sdegs[j]
                          for i in range(n) for j in range(i + 1, n))
                sign = -1 if rev % 2 else 1
                entries.setdefault(legs, {})
                accumulate(entries[legs], (x,), coeff * sign)
        if entries:
            entries_by_arity[n] = entries
    maps = {}
    offset = -family.offset

    def sdeg(atom, dual_view=dual_view, offset=offset):
        return dual_view.degree(atom) + offset

    for n, entries in entries_by_arity.items():
        maps[n] = LinearMap(n, 1, -1, sdeg, sdeg,
                            rule=lambda key, e=entries: dict(e.get(key, {})))
    return StructureFamily("ainf_algebra", dual_view, offset, maps,
                           family.max_arity)
