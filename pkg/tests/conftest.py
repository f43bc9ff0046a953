"""Shared model fixtures: spheres, the projective plane, small bundles."""

from fractions import Fraction

import pytest

from looptwist.graded import GradedSpace
from looptwist.hopf import ExteriorHopf
from looptwist.models import BundleModel, ManifoldModel
from looptwist.structures import Pairing, StructureFamily
from looptwist.words import TruncationPolicy

ONE = Fraction(1)


def _coalgebra(space: GradedSpace, coproducts: dict) -> StructureFamily:
    """Strict (arity <= 2) counital coproduct tables in unshifted form."""
    entries = {1: {}, 2: {}}
    for name, terms in coproducts.items():
        table = {}
        for (left, right, coeff) in terms:
            table[(left, right)] = table.get((left, right), 0) + Fraction(coeff)
        entries[2][(name,)] = table
    entries = {n: t for n, t in entries.items() if t}
    return StructureFamily.from_unshifted("cinf_coalgebra", space, -1,
                                          entries, max_arity=2)


def sphere_model(dim: int) -> ManifoldModel:
    top = f"e{dim}"
    space = GradedSpace(f"s{dim}", (("e0", 0), (top, dim)))
    coalgebra = _coalgebra(space, {
        "e0": [("e0", "e0", 1)],
        top: [(top, "e0", 1), ("e0", top, 1)],
    })
    pairing = Pairing(space, {("e0", top): ONE, (top, "e0"): ONE}, dim)
    return ManifoldModel.from_declared(f"s{dim}", space, coalgebra, pairing,
                                       rename={top: "a"})


def cp2_model() -> ManifoldModel:
    space = GradedSpace("cp2", (("e0", 0), ("e2", 2), ("e4", 4)))
    coalgebra = _coalgebra(space, {
        "e0": [("e0", "e0", 1)],
        "e2": [("e2", "e0", 1), ("e0", "e2", 1)],
        "e4": [("e4", "e0", 1), ("e0", "e4", 1), ("e2", "e2", 1)],
    })
    pairing = Pairing(space, {("e0", "e4"): ONE, ("e4", "e0"): ONE,
                              ("e2", "e2"): ONE}, 4)
    return ManifoldModel.from_declared("cp2", space, coalgebra, pairing,
                                       rename={"e2": "a", "e4": "b"})


def hopf_bundle() -> BundleModel:
    """The circle bundle over the two-sphere with Euler class the
    generator; total space the three-sphere."""
    base = sphere_model(2)
    group = ExteriorHopf(GradedSpace("u1", (("u", 1),)))
    return BundleModel("hopf", base, group,
                       characteristic={"u": {"e2": ONE}})


def instanton_bundle() -> BundleModel:
    """SU(2) over the four-sphere, second Chern class the generator;
    total space the seven-sphere."""
    base = sphere_model(4)
    group = ExteriorHopf(GradedSpace("su2", (("u3", 3),)))
    return BundleModel("su2-s4", base, group,
                       characteristic={"u3": {"e4": ONE}})


def trivial_bundle() -> BundleModel:
    base = sphere_model(2)
    group = ExteriorHopf(GradedSpace("u1", (("u", 1),)))
    return BundleModel("trivial", base, group, characteristic={"u": {}})


def twostage_model() -> ManifoldModel:
    """A synthetic model with a nonzero arity-3 structure map: the loop
    differential has both a quadratic and a cubic part (dy = [x,x],
    dz = [x,y] + [x,[x,w]]), exercising the bracket corrections."""
    space = GradedSpace("twostage", (("f0", 0), ("f2", 2), ("f3", 3),
                                     ("f4", 4), ("f6", 6)))
    rename = {"f2": "x", "f3": "w", "f4": "y", "f6": "z"}
    gens = GradedSpace("twostage-loops",
                       (("x", 1), ("w", 2), ("y", 3), ("z", 5)))
    from looptwist.words import lie_to_tensor
    from looptwist.graded import add_into

    # reduced structure maps dual (with the extraction sign) to the
    # differential d y = [x,x], d z = [x,y] + [x,[x,w]]
    dy = lie_to_tensor(gens, ("x", "x"))
    dz = {}
    add_into(dz, lie_to_tensor(gens, ("x", "y")), 1)
    add_into(dz, lie_to_tensor(gens, ("x", ("x", "w"))), 1)

    back = {v: k for k, v in rename.items()}

    def unrename(word):
        return tuple(back[g] for g in word)

    c2 = {}
    c3 = {}
    for word, c in dy.items():
        c2.setdefault(("f4",), {})[unrename(word)] = -c
    for word, c in dz.items():
        target = c2 if len(word) == 2 else c3
        target.setdefault(("f6",), {})[unrename(word)] = -c

    # counital completion: full coproduct terms with the unit class
    def complete(table, name):
        table.setdefault((name,), {})
        table[(name,)][(name, "f0")] = table[(name,)].get((name, "f0"), 0) + 1
        table[(name,)][("f0", name)] = table[(name,)].get(("f0", name), 0) + 1

    for name in ("f2", "f3", "f4", "f6"):
        complete(c2, name)
    c2[("f0",)] = {("f0", "f0"): Fraction(1)}

    # shift the reduced tables into unshifted coproduct entries: the
    # stored maps are the shifted ones, so we feed from_unshifted with
    # tables whose shift produces exactly dy/dz duals; build via the
    # shifted constructor instead.
    from looptwist.graded import LinearMap, to_unshifted

    def shifted_map(n, reduced_table):
        def sdeg(atom):
            return space.degree(atom) - 1

        def rule(key, table=reduced_table):
            return {k: Fraction(v) for k, v in table.get(key, {}).items()}

        return LinearMap(1, n, -1, sdeg, sdeg, rule=rule)

    # reduced shifted tables: keys are class names, legs are class names
    shifted2 = {}
    for (name,), terms in c2.items():
        shifted2[(name,)] = dict(terms)
    shifted3 = {}
    for (name,), terms in c3.items():
        shifted3[(name,)] = dict(terms)

    maps = {2: shifted_map(2, shifted2)}
    if shifted3:
        maps[3] = shifted_map(3, shifted3)
    family = StructureFamily("cinf_coalgebra", space, -1, maps, max_arity=3)
    pairing = Pairing(space, {("f0", "f6"): ONE, ("f6", "f0"): ONE,
                              ("f2", "f4"): ONE, ("f4", "f2"): ONE,
                              ("f3", "f3"): ONE}, 6)
    return ManifoldModel.from_declared("twostage", space, family, pairing,
                                       rename=rename)


@pytest.fixture
def s2():
    return sphere_model(2)


@pytest.fixture
def s3():
    return sphere_model(3)


@pytest.fixture
def s4():
    return sphere_model(4)


@pytest.fixture
def cp2():
    return cp2_model()


@pytest.fixture
def hopf_fixture():
    return hopf_bundle()


@pytest.fixture
def policy8():
    return TruncationPolicy(8, 8)


@pytest.fixture
def policy6():
    return TruncationPolicy(6, 6)
