"""Finite chain complexes over the rationals and their homology.

Twisted families are materialized degree by degree into boundary
matrices with exact rational entries; homology is computed by Gaussian
elimination with deterministic leftmost pivoting, returning Betti
numbers, cycle representatives and a projection of cycles onto the
homology basis.  The arity-2 product of an algebra-kind family is
transported to homology through representatives; the derivation identity
makes the transport independent of the choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graded import Vector, accumulate, add_into, is_zero
from .structures import StructureError
from .words import TruncationPolicy


class HomologyError(ValueError):
    pass


@dataclass
class ChainComplex:
    """Ordered basis and boundary matrices per degree on a finite window."""

    basis: dict                      # degree -> list of atoms
    boundaries: dict                 # degree -> {atom: Vector over degree-1 atoms}
    max_degree: int

    def atoms(self):
        for d in sorted(self.basis):
            for a in self.basis[d]:
                yield d, a

    def matrix(self, degree: int):
        """Boundary from degree to degree-1 as a column-major list."""
        cols = self.basis.get(degree, [])
        rows = self.basis.get(degree - 1, [])
        idx = {a: i for i, a in enumerate(rows)}
        mat = [[Fraction(0)] * len(cols) for _ in rows]
        for j, a in enumerate(cols):
            for b, c in self.boundaries.get(degree, {}).get(a, {}).items():
                if b in idx:
                    mat[idx[b]][j] = Fraction(c)
        return mat

    def verify_square_zero(self) -> None:
        for d in range(self.max_degree, 1, -1):
            for a in self.basis.get(d, []):
                out: Vector = {}
                for b, c in self.boundaries.get(d, {}).get(a, {}).items():
                    add_into(out, self.boundaries.get(d - 1, {}).get(b, {}), c)
                if not is_zero(out):
                    raise HomologyError(
                        f"boundary fails to square to zero on {a} in degree {d}")


def assemble_complex(twisted, max_degree: int) -> ChainComplex:
    """Materialize the arity-1 map of a twisted family on the degree
    window [0, max_degree]."""
    view = twisted.family.space
    policy = TruncationPolicy(max_degree, max(max_degree, 1))
    atoms = view.basis(policy)
    if any(view.degree(a) < 0 for a in atoms):
        raise HomologyError("window atoms of negative degree; "
                            "truncation would not be exact")
    basis: dict = {}
    for a in atoms:
        basis.setdefault(view.degree(a), []).append(a)
    for d in basis:
        basis[d] = sorted(basis[d])
    diff = twisted.family.unshifted_map(1)
    boundaries: dict = {}
    for d, names in basis.items():
        table = {}
        for a in names:
            val = {k[0]: c for k, c in diff((a,)).items()}
            if val:
                table[a] = val
        if table:
            boundaries[d] = table
    complex_ = ChainComplex(basis, boundaries, max_degree)
    complex_.verify_square_zero()
    return complex_


def _rref(mat):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    mat = [row[:] for row in mat]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    pivots = []
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
        pivots.append(c)
        r += 1
    return mat, pivots


def _kernel_basis(mat, ncols):
    """Basis of the kernel as coordinate vectors (deterministic)."""
    if not mat:
        return [[Fraction(1) if i == j else Fraction(0) for i in range(ncols)]
                for j in range(ncols)]
    red, pivots = _rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            v[pcol] = -red[r][fcol]
        out.append(v)
    return out


@dataclass
class HomologyResult:
    betti: dict
    representatives: dict            # degree -> list of Vectors over atoms
    basis: dict                      # degree -> ordered atom list
    cycle_projection: dict = field(default_factory=dict)

    def betti_list(self, max_degree: int) -> list[int]:
        return [self.betti.get(d, 0) for d in range(max_degree + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * b for d, b in self.betti.items())

    def project(self, degree: int, cycle: Vector) -> list:
        """Coordinates of a cycle in the homology basis of its degree."""
        proj = self.cycle_projection.get(degree)
        if proj is None:
            if is_zero(cycle):
                return []
            raise HomologyError(f"no homology data in degree {degree}")
        atoms, solver = proj
        vec = [Fraction(cycle.get(a, 0)) for a in atoms]
        coords = solver(vec)
        if coords is None:
            raise HomologyError("element is not a cycle in the window")
        return coords


def homology(complex_: ChainComplex) -> HomologyResult:
    """Betti numbers, representing cycles, and the projection map."""
    betti = {}
    reps = {}
    projections = {}
    for d in range(complex_.max_degree + 1):
        atoms = complex_.basis.get(d, [])
        if not atoms:
            betti[d] = 0
            reps[d] = []
            continue
        n = len(atoms)
        mat_d = complex_.matrix(d)             # boundary: degree d -> d-1
        kernel = _kernel_basis(mat_d, n)
        mat_up = complex_.matrix(d + 1)        # boundary: d+1 -> d
        ncols_up = len(mat_up[0]) if mat_up else 0
        image_cols = [[row[j] for row in mat_up] for j in range(ncols_up)]
        # extend a basis of the image by kernel vectors; the kernel vectors
        # that land on pivot columns represent a basis of the quotient
        combined = image_cols + kernel
        if combined:
            _, pivots = _rref(_transpose(combined, n))
        else:
            pivots = []
        survivors = [kernel[c - len(image_cols)]
                     for c in pivots if c >= len(image_cols)]
        betti[d] = len(survivors)
        reps[d] = [{atoms[i]: v[i] for i in range(n) if v[i]} for v in survivors]
        projections[d] = (atoms, _projector(image_cols, survivors, n))
    assert all(b >= 0 for b in betti.values())
    result = HomologyResult(betti, reps, dict(complex_.basis), projections)
    return result


def _transpose(cols, n):
    return [[col[i] for col in cols] for i in range(n)]


def _rank_of_cols(cols, n) -> int:
    if not cols:
        return 0
    mat = _transpose(cols, n)
    _, pivots = _rref(mat)
    return len(pivots)


def _projector(image_cols, survivors, n):
    """Return a solver: cycle coordinates -> homology coordinates, or None
    if the vector is not in the span of image + survivors."""
    cols = list(image_cols) + list(survivors)

    def solve(vec):
        if not cols:
            return [] if all(x == 0 for x in vec) else None
        aug = [[col[i] for col in cols] + [vec[i]] for i in range(n)]
        red, pivots = _rref(aug)
        ncols = len(cols)
        sol = [Fraction(0)] * ncols
        for r, c in enumerate(pivots):
            if c == ncols:
                return None
            sol[c] = red[r][ncols]
        return sol[len(image_cols):]

    return solve


def induced_product(result: HomologyResult, twisted,
                    max_degree: int | None = None) -> dict:
    """Products of homology classes through representatives: multiply by
    the arity-2 map, then project; keyed by ((deg_i, i), (deg_j, j))."""
    m2 = twisted.family.unshifted_map(2)
    table = {}
    degrees = sorted(result.betti)
    if max_degree is not None:
        degrees = [d for d in degrees if d <= max_degree]
    for di in degrees:
        for i, rep_i in enumerate(result.representatives.get(di, [])):
            for dj in degrees:
                out_deg = di + dj + m2.degree
                if out_deg < 0 or out_deg not in result.betti:
                    continue
                for j, rep_j in enumerate(result.representatives.get(dj, [])):
                    prod: Vector = {}
                    for a, ca in rep_i.items():
                        for b, cb in rep_j.items():
                            for key, c in m2((a, b)).items():
                                accumulate(prod, key[0], ca * cb * c)
                    coords = result.project(out_deg, prod)
                    if coords and any(coords):
                        table[((di, i), (dj, j))] = (out_deg, coords)
    return table


def verify_shared_differential(f_alg, f_colg, policy: TruncationPolicy) -> bool:
    """True iff the arity-1 maps agree entrywise on the window."""
    va, vc = f_alg.family.space, f_colg.family.space
    da = f_alg.family.unshifted_map(1)
    dc = f_colg.family.unshifted_map(1)
    atoms_a = set(va.basis(policy))
    atoms_c = set(vc.basis(policy))
    if atoms_a != atoms_c:
        raise StructureError("twisted families live on different bases")
    for a in sorted(atoms_a):
        out_a = da((a,))
        out_c = dc((a,))
        if not all(out_a.get(k, 0) == out_c.get(k, 0)
                   for k in set(out_a) | set(out_c)):
            return False
    return True
