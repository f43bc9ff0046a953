"""Exact graded linear algebra over the rationals.

Everything downstream is built from three sign primitives defined here:
permutation signs on graded words (``koszul_sign``), evaluation of tensor
products of maps (``tensor_apply``), and conjugation by (de)suspension
(``to_shifted`` / ``to_unshifted``).  No sign anywhere in the package is
entered by hand; they are all produced by these routines.

Vectors are sparse dicts mapping basis keys to ``Fraction`` coefficients.
A key for an n-fold tensor power is an n-tuple of atoms; an atom is any
hashable object whose degree is supplied by the ambient space.

Conventions (fixed once, certified by the invariant test suite):

* moving a graded object of degree p past one of degree q costs (-1)**(p*q);
* ``(f1 (x) ... (x) fk)`` applied to a word applies the factors left to
  right, each factor crossing the source degrees of the slots to its left;
* suspension by k applied slotwise to an n-word costs
  (-1)**(k * sum_j (n-1-j) deg(y_j)) with j counted from 0;
* ``to_unshifted`` carries the compensating global sign that makes the
  shift/unshift pair mutually inverse (and makes shifted and unshifted
  formulations of every identity in this package literally agree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

Atom = Hashable
Key = tuple
Vector = dict


def vec(*items) -> Vector:
    """Build a sparse vector from (key, coefficient) pairs."""
    out: Vector = {}
    for key, coeff in items:
        accumulate(out, key, Fraction(coeff))
    return out


def accumulate(target: Vector, key, coeff) -> None:
    """Add coeff * key into target in place, dropping zeros."""
    if not coeff:
        return
    new = target.get(key, 0) + coeff
    if new:
        target[key] = new
    else:
        target.pop(key, None)


def add_into(target: Vector, other: Mapping, scale=1) -> None:
    for key, coeff in other.items():
        accumulate(target, key, coeff * scale)


def scaled(v: Mapping, scale) -> Vector:
    if not scale:
        return {}
    return {k: c * scale for k, c in v.items()}


def vec_eq(a: Mapping, b: Mapping) -> bool:
    return all(a.get(k, 0) == b.get(k, 0) for k in set(a) | set(b))


def is_zero(v: Mapping) -> bool:
    return all(c == 0 for c in v.values())


def perm_parity(perm: Iterable[int]) -> int:
    """Sign of a permutation given as the sequence (sigma(1), ..., sigma(n)),
    1-based values."""
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm}")
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def koszul_sign(perm: Iterable[int], degrees: Iterable[int]) -> int:
    """Koszul sign eps(sigma) with x_1 ^ ... ^ x_n =
    eps * x_{sigma(1)} ^ ... ^ x_{sigma(n)} in the free graded commutative
    algebra; degrees are those of x_1..x_n."""
    perm = list(perm)
    degrees = list(degrees)
    if len(perm) != len(degrees):
        raise ValueError("permutation and degree list lengths differ")
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm}")
    # Remove sigma(1), sigma(2), ... from the working list in turn; each
    # removal crosses the earlier-listed elements still to its left.
    remaining = list(range(1, n + 1))
    sign = 1
    for target in perm:
        pos = remaining.index(target)
        crossed = sum(degrees[i - 1] for i in remaining[:pos])
        if (degrees[target - 1] * crossed) % 2:
            sign = -sign
        remaining.pop(pos)
    return sign


def xi_sign(perm: Iterable[int], degrees: Iterable[int]) -> int:
    """sgn(sigma) * eps(sigma): the sign used when symmetrizing
    multiplications into brackets."""
    perm = list(perm)
    return perm_parity(perm) * koszul_sign(perm, degrees)


def permute_word(key: Key, degrees: list[int], perm: list[int]):
    """Return (sign, permuted key) for the rearrangement x -> x_sigma."""
    sign = koszul_sign(perm, degrees)
    return sign, tuple(key[i - 1] for i in perm)


@dataclass(frozen=True)
class GradedSpace:
    """A finite named basis with integer degrees."""

    name: str
    basis: tuple

    def __post_init__(self):
        names = [b for b, _ in self.basis]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate basis names in {self.name}")
        for b, d in self.basis:
            if not isinstance(d, int):
                raise ValueError(f"degree of {b} must be an integer, got {d!r}")
        object.__setattr__(self, "_degrees", {b: d for b, d in self.basis})

    def degree(self, atom) -> int:
        return self._degrees[atom]

    def __contains__(self, atom) -> bool:
        return atom in self._degrees

    def atoms(self) -> tuple:
        return tuple(b for b, _ in self.basis)

    def atoms_in_degree(self, d: int) -> tuple:
        return tuple(b for b, deg in self.basis if deg == d)

    def shifted(self, k: int) -> "GradedSpace":
        """Same basis names, all degrees shifted by k."""
        return GradedSpace(f"{self.name}[{k:+d}]",
                           tuple((b, d + k) for b, d in self.basis))

    def word_degree(self, key: Key) -> int:
        return sum(self._degrees[a] for a in key)


class LinearMap:
    """A graded linear map between tensor powers, given on basis keys.

    ``rule(key) -> Vector`` must be defined on every key the map is applied
    to; entry-backed maps treat missing keys as zero.  ``src_degree`` and
    ``dst_degree`` report degrees of single atoms of the source and target.
    """

    def __init__(self, arity_in: int, arity_out: int, degree: int,
                 src_degree: Callable, dst_degree: Callable,
                 rule: Callable | None = None,
                 entries: Mapping | None = None):
        self.arity_in = arity_in
        self.arity_out = arity_out
        self.degree = degree
        self.src_degree = src_degree
        self.dst_degree = dst_degree
        if (rule is None) == (entries is None):
            raise ValueError("exactly one of rule/entries required")
        self._rule = rule
        self._entries = dict(entries) if entries is not None else None

    @classmethod
    def from_entries(cls, entries: Mapping, arity_in: int, arity_out: int,
                     degree: int, src_degree, dst_degree) -> "LinearMap":
        for key, out in entries.items():
            in_deg = sum(src_degree(a) for a in key)
            for okey, coeff in out.items():
                if coeff and sum(dst_degree(a) for a in okey) != in_deg + degree:
                    raise ValueError(
                        f"entry {key}->{okey} violates declared degree {degree}")
        return cls(arity_in, arity_out, degree, src_degree, dst_degree,
                   entries=entries)

    @classmethod
    def identity(cls, degree_fn) -> "LinearMap":
        return cls(1, 1, 0, degree_fn, degree_fn,
                   rule=lambda key: {key: Fraction(1)})

    @classmethod
    def zero(cls, arity_in: int, arity_out: int, degree: int,
             src_degree, dst_degree) -> "LinearMap":
        return cls(arity_in, arity_out, degree, src_degree, dst_degree,
                   rule=lambda key: {})

    def entries(self) -> dict:
        if self._entries is None:
            raise ValueError("rule-backed map has no finite entry table")
        return self._entries

    def key_degree(self, key: Key) -> int:
        return sum(self.src_degree(a) for a in key)

    def __call__(self, key: Key) -> Vector:
        if len(key) != self.arity_in:
            raise ValueError(
                f"arity mismatch: map eats {self.arity_in} slots, got {len(key)}")
        if self._entries is not None:
            return dict(self._entries.get(key, {}))
        return self._rule(key)

    def apply(self, v: Mapping) -> Vector:
        out: Vector = {}
        for key, coeff in v.items():
            add_into(out, self(key), coeff)
        return out

    def is_zero_on(self, keys: Iterable[Key]) -> bool:
        return all(is_zero(self(k)) for k in keys)


def tensor_apply(factors: list[LinearMap], key: Key) -> Vector:
    """Evaluate (f1 (x) f2 (x) ... (x) fk) on a basis word.

    The word is split left to right according to the factors' input
    arities.  Factor i (of degree d_i) crosses the source atoms of all
    slots to its left, contributing (-1)**(d_i * (their total degree)).
    """
    arity = sum(f.arity_in for f in factors)
    if len(key) != arity:
        raise ValueError(f"word length {len(key)} != total arity {arity}")
    pos = 0
    crossed = 0  # total source degree of the slots left of the current factor
    sign = 1
    blocks = []
    for f in factors:
        block = key[pos:pos + f.arity_in]
        if (f.degree * crossed) % 2:
            sign = -sign
        blocks.append(f(block))
        crossed += sum(f.src_degree(a) for a in block)
        pos += f.arity_in
    # expand the product of the output vectors
    out: Vector = {(): Fraction(sign)}
    for block in blocks:
        new: Vector = {}
        for prefix, c0 in out.items():
            for okey, c1 in block.items():
                accumulate(new, prefix + okey, c0 * c1)
        out = new
    return out


def suspension_sign(degrees: list[int], k: int) -> int:
    """Sign of applying the degree-k suspension slotwise to a word whose
    source degrees are listed; slot j is crossed by the suspensions of the
    n-1-j slots to its right."""
    if k % 2 == 0:
        return 1
    n = len(degrees)
    total = sum((n - 1 - j) * degrees[j] for j in range(n))
    return -1 if total % 2 else 1


def _conjugate(m: LinearMap, offset: int, comp: int) -> LinearMap:
    """Conjugate by suspension: offset is added to every atom degree on
    both sides; comp is a global compensating sign."""

    src_deg = m.src_degree
    dst_deg = m.dst_degree

    def new_src(a):
        return src_deg(a) + offset

    def new_dst(a):
        return dst_deg(a) + offset

    def rule(key: Key) -> Vector:
        # un-suspend the inputs (shifted degrees), apply m, suspend outputs
        sign = suspension_sign([new_src(a) for a in key], -offset) * comp
        out: Vector = {}
        for okey, coeff in m(key).items():
            s2 = suspension_sign([dst_deg(a) for a in okey], offset)
            accumulate(out, okey, coeff * sign * s2)
        return out

    return LinearMap(m.arity_in, m.arity_out,
                     m.degree + offset * (m.arity_out - m.arity_in),
                     new_src, new_dst, rule=rule)


def to_shifted(m: LinearMap, offset: int) -> LinearMap:
    """View an unshifted map on the space with all degrees moved by
    offset, with mechanically generated suspension signs."""
    return _conjugate(m, offset, 1)


def to_unshifted(m: LinearMap, offset: int) -> LinearMap:
    """Exact inverse of ``to_shifted(. , offset)``.

    Carries the global sign (-1)**(offset*(binom(n_in,2)+binom(n_out,2)))
    that cancels the double-conjugation sign, so the pair is involutive
    and shifted/unshifted statements of identities coincide.
    """
    fix = 1
    if offset % 2:
        halves = (m.arity_in * (m.arity_in - 1) // 2
                  + m.arity_out * (m.arity_out - 1) // 2)
        fix = -1 if halves % 2 else 1
    return _conjugate(m, -offset, fix)


def materialize(m: LinearMap, keys: Iterable[Key]) -> LinearMap:
    """Entry-backed copy of a rule map on the listed keys."""
    entries = {}
    for key in keys:
        out = m(key)
        if out:
            entries[key] = out
    return LinearMap(m.arity_in, m.arity_out, m.degree,
                     m.src_degree, m.dst_degree, entries=entries)
