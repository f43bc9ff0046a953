"""A-infinity / C-infinity / L-infinity families and their exact checkers.

A ``StructureFamily`` stores its arity-indexed maps in shifted form: every
map has degree -1 with respect to the shifted atom degree

    shifted degree = degree + offset,

where offset = -1 for coalgebra kinds and offset = 1 - d for algebra
kinds obtained by dualizing through a degree-d pairing (the loop-homology
regrading).  In these coordinates every identity in this module is the
statement that a single (co)derivation squares to zero, and all signs are
produced mechanically by the Koszul rule; the checkers below evaluate the
identities on basis elements and report exact rational defects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import (GradedSpace, LinearMap, Vector, accumulate, add_into,
                     is_zero, koszul_sign, permute_word, suspension_sign,
                     to_shifted, to_unshifted, vec_eq)
from .words import TruncationPolicy, unshuffle

COALGEBRA_KINDS = {"ainf_coalgebra", "cinf_coalgebra", "strict_coalgebra"}
ALGEBRA_KINDS = {"ainf_algebra", "cinf_algebra", "linf_algebra", "strict_algebra"}
STRICT_KINDS = {"strict_coalgebra", "strict_algebra"}


class StructureError(ValueError):
    pass


class ProductView:
    """Atoms (c, h) of a tensor product of a finite graded space with a
    Hopf backend; degree is the sum of the factors."""

    def __init__(self, coeff: GradedSpace, hopf):
        self.coeff = coeff
        self.hopf = hopf

    def degree(self, atom) -> int:
        c, h = atom
        return self.coeff.degree(c) + self.hopf.degree(h)

    def basis(self, policy: TruncationPolicy) -> list:
        out = []
        for h in self.hopf.basis(policy):
            for c, dc in self.coeff.basis:
                if dc + self.hopf.degree(h) <= policy.max_total_degree:
                    out.append((c, h))
        return sorted(out, key=lambda a: (self.degree(a), a))


def space_basis(space, policy: TruncationPolicy) -> list:
    """Basis atoms of a family space within the policy; accepts either a
    plain ``GradedSpace`` or any object exposing ``basis(policy)``."""
    if isinstance(space, GradedSpace):
        return [a for a, d in space.basis if d <= policy.max_total_degree]
    return space.basis(policy)


@dataclass
class DefectReport:
    items: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.items

    def add(self, arity, key, value: Vector) -> None:
        if not is_zero(value):
            self.items.append((arity, key, dict(value)))

    def summary(self) -> str:
        if self.ok:
            return "all identities hold exactly"
        lines = [f"{len(self.items)} nonzero defect(s):"]
        for arity, key, value in self.items[:12]:
            lines.append(f"  arity {arity} at {key}: {value}")
        return "\n".join(lines)


class StructureFamily:
    """Arity-indexed structure maps in shifted form (each of degree -1)."""

    def __init__(self, kind: str, space, offset: int, maps: dict,
                 max_arity: int):
        if kind not in COALGEBRA_KINDS | ALGEBRA_KINDS:
            raise StructureError(f"unknown structure kind {kind!r}")
        self.kind = kind
        self.space = space
        self.offset = offset
        self.maps = dict(maps)
        self.max_arity = max_arity
        if kind in STRICT_KINDS:
            for n, m in self.maps.items():
                if n > 2 and not self._map_is_zero_map(m):
                    raise StructureError(f"strict family has a nonzero arity-{n} map")
        for n, m in self.maps.items():
            if m.degree != -1:
                raise StructureError(
                    f"arity-{n} map has shifted degree {m.degree}, expected -1")

    @staticmethod
    def _map_is_zero_map(m: LinearMap) -> bool:
        try:
            return all(is_zero(v) for v in m.entries().values())
        except ValueError:
            return False

    def shifted_degree(self, atom) -> int:
        return self.space.degree(atom) + self.offset

    def is_coalgebra(self) -> bool:
        return self.kind in COALGEBRA_KINDS

    def map(self, n: int) -> LinearMap:
        if n in self.maps:
            return self.maps[n]
        if self.is_coalgebra():
            return LinearMap.zero(1, n, -1, self.shifted_degree, self.shifted_degree)
        return LinearMap.zero(n, 1, -1, self.shifted_degree, self.shifted_degree)

    def unshifted_map(self, n: int) -> LinearMap:
        return to_unshifted(self.map(n), self.offset)

    @classmethod
    def from_unshifted(cls, kind: str, space, offset: int,
                       unshifted_entries: dict, max_arity: int) -> "StructureFamily":
        """Build from unshifted entry tables {arity: {key: Vector}}."""
        maps = {}
        deg = space.degree
        for n, entries in unshifted_entries.items():
            if kind in COALGEBRA_KINDS:
                arity_in, arity_out = 1, n
                raw_degree = -1 - offset * (n - 1)
            else:
                arity_in, arity_out = n, 1
                raw_degree = -1 - offset * (1 - n)
            raw = LinearMap.from_entries(entries, arity_in, arity_out,
                                         raw_degree, deg, deg)
            maps[n] = to_shifted(raw, offset)
        return cls(kind, space, offset, maps, max_arity)


def _identity(family: StructureFamily) -> LinearMap:
    return LinearMap.identity(family.shifted_degree)


def check_ainf(family: StructureFamily, policy: TruncationPolicy,
               max_defect_arity: int | None = None) -> DefectReport:
    """Evaluate every Stasheff identity within the policy; exact zeros."""
    report = DefectReport()
    atoms = space_basis(family.space, policy)
    ident = _identity(family)
    top = max_defect_arity or (2 * family.max_arity - 1)
    if family.is_coalgebra():
        for x in atoms:
            for out_arity in range(1, top + 1):
                defect: Vector = {}
                for m in range(1, min(family.max_arity, out_arity) + 1):
                    k = out_arity - m + 1
                    if k < 1 or k > family.max_arity:
                        continue
                    cm, ck = family.map(m), family.map(k)
                    inner = cm((x,))
                    for p in range(m):
                        factors = [ident] * p + [ck] + [ident] * (m - p - 1)
                        for key, coeff in inner.items():
                            add_into(defect, _tensor(factors, key), coeff)
                report.add(out_arity, x, defect)
    else:
        for n in range(1, top + 1):
            if n > policy.max_word_length:
                break
            for word in _algebra_words(family, atoms, n, policy):
                defect = {}
                for k in range(1, min(n, family.max_arity) + 1):
                    outer = family.map(n - k + 1)
                    if n - k + 1 > family.max_arity:
                        continue
                    bk = family.map(k)
                    for j in range(n - k + 1):
                        factors = [ident] * j + [bk] + [ident] * (n - k - j)
                        mid = _tensor(factors, word)
                        for key, coeff in mid.items():
                            add_into(defect, outer(key), coeff)
                report.add(n, word, defect)
    return report


def _tensor(factors, key) -> Vector:
    from .graded import tensor_apply
    return tensor_apply(factors, key)


def _algebra_words(family, atoms, n, policy):
    for word in itertools.product(atoms, repeat=n):
        total = sum(family.space.degree(a) for a in word)
        if total <= policy.max_total_degree:
            yield word


def check_cinfty(family: StructureFamily, policy: TruncationPolicy) -> DefectReport:
    """Reduced unshuffle annihilates the image of every structure map."""
    if not family.is_coalgebra():
        raise StructureError("check_cinfty expects a coalgebra family")
    report = DefectReport()

    class _Shifted:
        def __init__(self, fam):
            self.fam = fam

        def degree(self, atom):
            return self.fam.shifted_degree(atom)

    shifted = _Shifted(family)
    for n in range(2, family.max_arity + 1):
        cn = family.map(n)
        for x in space_basis(family.space, policy):
            defect: Vector = {}
            for key, coeff in cn((x,)).items():
                add_into(defect, unshuffle(shifted, key, reduced=True), coeff)
            report.add(n, x, defect)
    return report


def symmetrize_to_linf(family: StructureFamily) -> StructureFamily:
    """l_n = sum over permutations of the Koszul-signed m_n; shifted form."""
    if family.kind not in ALGEBRA_KINDS:
        raise StructureError("symmetrize_to_linf expects an algebra family")
    maps = {}
    for n in range(1, family.max_arity + 1):
        bn = family.map(n)

        def rule(key, bn=bn, n=n):
            degs = [family.shifted_degree(a) for a in key]
            out: Vector = {}
            for perm in itertools.permutations(range(1, n + 1)):
                sign, permuted = permute_word(key, degs, list(perm))
                add_into(out, bn(permuted), Fraction(sign))
            return out

        maps[n] = LinearMap(n, 1, -1, family.shifted_degree,
                            family.shifted_degree, rule=rule)
    return StructureFamily("linf_algebra", family.space, family.offset,
                           maps, family.max_arity)


def check_linf(family: StructureFamily, policy: TruncationPolicy,
               max_arity: int = 3) -> DefectReport:
    """Generalized Jacobi identities in shifted form:
    sum over (i, n-i) unshuffles of l_{n-i+1}(l_i (x) id) vanishes."""
    report = DefectReport()
    atoms = space_basis(family.space, policy)
    for n in range(1, max_arity + 1):
        if n > policy.max_word_length:
            break
        for word in _algebra_words(family, atoms, n, policy):
            degs = [family.shifted_degree(a) for a in word]
            defect: Vector = {}
            for i in range(1, n + 1):
                li = family.map(i)
                lo = family.map(n - i + 1)
                if i > family.max_arity or n - i + 1 > family.max_arity:
                    continue
                for subset in itertools.combinations(range(1, n + 1), i):
                    rest = [p for p in range(1, n + 1) if p not in subset]
                    perm = list(subset) + rest
                    sign = koszul_sign(perm, degs)
                    first = tuple(word[p - 1] for p in subset)
                    tail = tuple(word[p - 1] for p in rest)
                    for key, coeff in li(first).items():
                        add_into(defect, lo(key + tail), coeff * sign)
            report.add(n, word, defect)
    return report


@dataclass
class Pairing:
    """A graded-symmetric non-degenerate bilinear form on a finite space."""

    space: GradedSpace
    entries: dict
    degree: int

    def __post_init__(self):
        deg = self.space.degree
        for (a, b), c in self.entries.items():
            if not c:
                continue
            if deg(a) + deg(b) != self.degree:
                raise StructureError(
                    f"pairing entry <{a},{b}> violates degree {self.degree}")
            sym = self.entries.get((b, a), Fraction(0))
            sign = -1 if (deg(a) * deg(b)) % 2 else 1
            if sym != sign * c:
                raise StructureError(f"pairing not graded-symmetric at ({a},{b})")
        names = self.space.atoms()
        mat = [[Fraction(self.entries.get((a, b), 0)) for b in names] for a in names]
        if _rank(mat) != len(names):
            raise StructureError("pairing must be non-degenerate")

    def value(self, a, b) -> Fraction:
        return Fraction(self.entries.get((a, b), 0))

    def as_map(self) -> LinearMap:
        deg = self.space.degree

        def rule(key):
            v = self.value(key[0], key[1])
            return {(): v} if v else {}

        return LinearMap(2, 0, -self.degree, deg, deg, rule=rule)

    def copairing(self) -> Vector:
        """The tensor Pi in C (x) C with (<,> (x) id)(x (x) Pi) = x."""
        names = self.space.atoms()
        deg = self.space.degree
        pm = self.as_map()
        pi: Vector = {}
        from .graded import tensor_apply
        cols = [(a, b) for a in names for b in names
                if (deg(a) + deg(b)) == self.degree]
        # matrix: row (x, out) ; col (a, b): coefficient of out in (P (x) id)(x,a,b)
        rows = [(x, out) for x in names for out in names]
        mat = []
        for (x, out) in rows:
            row = []
            for (a, b) in cols:
                v = tensor_apply([pm, LinearMap.identity(deg)], (x, a, b))
                row.append(v.get((out,), Fraction(0)))
            mat.append(row)
        rhs = [Fraction(1) if x == out else Fraction(0) for (x, out) in rows]
        sol = _solve(mat, rhs)
        if sol is None:
            raise StructureError("copairing solve failed; pairing degenerate?")
        for (col, coeff) in zip(cols, sol):
            if coeff:
                pi[col] = coeff
        return pi


def _rank(mat) -> int:
    mat = [row[:] for row in mat]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
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


def _solve(mat, rhs):
    """Least structured exact solve of mat * x = rhs; None when inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [mat[i][:] + [rhs[i]] for i in range(rows)]
    r = 0
    pivots = []
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][cols]
    return sol


def structure_tensor(family: StructureFamily, P: Pairing, n: int) -> Vector:
    """c_n as an element of the (n+1)-fold tensor power of the shifted
    space: (id (x) c_n^u)(Pi), then suspended legwise."""
    cn = family.unshifted_map(n)
    ident = LinearMap.identity(family.space.degree)
    from .graded import tensor_apply
    theta: Vector = {}
    for (a, b), coeff in P.copairing().items():
        add_into(theta, tensor_apply([ident, cn], (a, b)), coeff)
    shifted: Vector = {}
    for key, coeff in theta.items():
        degs = [family.space.degree(t) for t in key]
        sign = suspension_sign(degs, family.offset)
        accumulate(shifted, key, coeff * sign)
    return shifted


def rotate_tensor(family: StructureFamily, tensor: Vector) -> Vector:
    """Signed cyclic shift moving the last shifted leg to the front."""
    out: Vector = {}
    for key, coeff in tensor.items():
        last = family.shifted_degree(key[-1])
        rest = sum(family.shifted_degree(t) for t in key[:-1])
        sign = -1 if (last * rest) % 2 else 1
        accumulate(out, (key[-1],) + key[:-1], coeff * sign)
    return out


def check_cyclic(family: StructureFamily, P: Pairing) -> DefectReport:
    """Cyclic invariance of each c_n viewed in the (n+1)-tensor power."""
    if not family.is_coalgebra():
        raise StructureError("check_cyclic expects a coalgebra family")
    report = DefectReport()
    for n in range(1, family.max_arity + 1):
        theta = structure_tensor(family, P, n)
        rotated = rotate_tensor(family, theta)
        diff: Vector = dict(theta)
        add_into(diff, rotated, -1)
        report.add(n, f"c{n} cyclic", diff)
    return report


def pair_to_algebra(family: StructureFamily, P: Pairing,
                    policy: TruncationPolicy) -> StructureFamily:
    """Dualize one output leg of every c_n through the pairing; the result
    is the coefficient algebra {m_n} in shifted (loop-regraded) form."""
    cyc = check_cyclic(family, P)
    if not cyc.ok:
        raise StructureError("pair_to_algebra requires a cyclic family:\n"
                             + cyc.summary())
    from .graded import tensor_apply
    d = P.degree
    deg = family.space.degree
    names = family.space.atoms()
    pm = P.as_map()
    ident = LinearMap.identity(deg)
    entries_by_arity = {}
    for n in range(1, family.max_arity + 1):
        cn = family.unshifted_map(n)
        theta: Vector = {}
        for (a, b), coeff in P.copairing().items():
            add_into(theta, tensor_apply([ident, cn], (a, b)), coeff)
        entries = {}
        for word in itertools.product(names, repeat=n):
            out: Vector = {}
            for key, tcoeff in theta.items():
                # rearrange (y1..yn, t0..tn) -> (y1,t0, y2,t1, ..., yn,t_{n-1}, tn)
                full = word + key
                m = len(full)
                perm = []
                for i in range(n):
                    perm.extend([i + 1, n + i + 1])
                perm.append(m)
                degs = [deg(a) for a in full]
                sign = koszul_sign(perm, degs)
                arranged = tuple(full[p - 1] for p in perm)
                factors = [pm] * n + [ident]
                for okey, c2 in tensor_apply(factors, arranged).items():
                    accumulate(out, okey, c2 * tcoeff * sign)
            if out:
                entries[word] = out
        if entries:
            entries_by_arity[n] = entries
    kind = "cinf_algebra" if family.kind == "cinf_coalgebra" else "ainf_algebra"
    return StructureFamily.from_unshifted(kind, family.space, 1 - d,
                                          entries_by_arity, family.max_arity)


def algebra_to_pair(family: StructureFamily, P: Pairing) -> dict:
    """Re-dualize an algebra family through P; returns unshifted coalgebra
    entry tables {arity: {(x,): Vector}} for the round-trip invariant."""
    from .graded import tensor_apply
    deg = family.space.degree
    names = family.space.atoms()
    pm = P.as_map()
    ident = LinearMap.identity(deg)
    pi = P.copairing()
    tables = {}
    for n in range(1, family.max_arity + 1):
        mn = family.unshifted_map(n)
        # rebuild theta = sum over Pi^{(x)n}: (a_1..a_n, m_n(b_1..b_n))
        theta: Vector = {}
        for combo in itertools.product(pi.items(), repeat=n):
            coeff = Fraction(1)
            letters = []
            for (pair, c) in combo:
                coeff *= c
                letters.append(pair)
            full = tuple(x for pair in letters for x in pair)
            # rearrange (a1,b1,...,an,bn) -> (a1..an, b1..bn)
            perm = [2 * i + 1 for i in range(n)] + [2 * i + 2 for i in range(n)]
            degs = [deg(a) for a in full]
            sign = koszul_sign(perm, degs)
            arranged = tuple(full[p - 1] for p in perm)
            heads, tails = arranged[:n], arranged[n:]
            for okey, c2 in mn(tails).items():
                crossed = sum(deg(a) for a in heads)
                s2 = -1 if (mn.degree * crossed) % 2 else 1
                accumulate(theta, heads + okey, coeff * sign * c2 * s2)
        entries = {}
        for x in names:
            out: Vector = {}
            for key, tc in theta.items():
                for okey, c2 in tensor_apply([pm] + [ident] * n,
                                             (x,) + key).items():
                    accumulate(out, okey, c2 * tc)
            if out:
                entries[(x,)] = out
        tables[n] = entries
    return tables


class HomElement(dict):
    """A degree-homogeneous linear map C -> target, stored by its values
    on the basis of C; behaves as dict name -> target Vector."""

    def __init__(self, entries: dict, degree: int):
        super().__init__({k: dict(v) for k, v in entries.items() if v})
        self.degree = degree


class HomFamily:
    """Convolution structure on Hom(C, T) for a C-infinity coalgebra C and
    a strict algebra target T (assoc mode) or its Lie flavour (lie mode)."""

    def __init__(self, coalgebra: StructureFamily, target, mode: str = "assoc"):
        if mode not in ("assoc", "lie"):
            raise StructureError(f"unknown hom-convolution mode {mode!r}")
        self.coalgebra = coalgebra
        self.target = target
        self.mode = mode

    def _as_map(self, f: HomElement) -> LinearMap:
        deg = self.coalgebra.space.degree

        def rule(key):
            return dict(f.get(key[0], {}))

        return LinearMap(1, 1, f.degree, deg, self.target.degree, rule=rule)

    def _fold_mul(self, key: tuple) -> Vector:
        acc: Vector = {key[0]: Fraction(1)}
        for h in key[1:]:
            new: Vector = {}
            for w, c in acc.items():
                add_into(new, self.target.mul((w, h)), c)
            acc = new
        return acc

    def apply(self, n: int, fs: list[HomElement]) -> HomElement:
        """m_n^Hom (assoc) or l_n^Hom (lie) evaluated on the elements."""
        if len(fs) != n:
            raise StructureError("arity mismatch in hom convolution")
        degree = sum(f.degree for f in fs) + (n - 2)
        space = self.coalgebra.space
        out_entries = {}
        if n == 1:
            f = fs[0]
            fmap = self._as_map(f)
            c1 = self.coalgebra.unshifted_map(1)
            for x in space.atoms():
                val: Vector = {}
                for (w,), c in fmap((x,)).items():
                    add_into(val, self.target.diff((w,)), c)
                for (y,), c in c1((x,)).items():
                    add_into(val, fmap((y,)), c)
                if val:
                    out_entries[x] = val
            return HomElement(out_entries, degree)
        cn = self.coalgebra.unshifted_map(n)
        fmaps = [self._as_map(f) for f in fs]
        from .graded import tensor_apply
        for x in space.atoms():
            val: Vector = {}
            legs = cn((x,))
            for key, coeff in legs.items():
                if self.mode == "lie":
                    degs = [self.coalgebra.shifted_degree(a) for a in key]
                    perms = [(koszul_sign(list(p), degs), list(p))
                             for p in itertools.permutations(range(1, n + 1))]
                else:
                    perms = [(1, list(range(1, n + 1)))]
                for sign, perm in perms:
                    permuted = tuple(key[p - 1] for p in perm)
                    for hkey, c2 in tensor_apply(fmaps, permuted).items():
                        for w, c3 in self._fold_mul(hkey).items():
                            accumulate(val, w, coeff * c2 * c3 * sign)
            if val:
                out_entries[x] = val
        return HomElement(out_entries, degree)
