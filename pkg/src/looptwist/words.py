"""Words in the tensor algebra T(V) and the free graded Lie algebra L(V).

V is a finite graded alphabet (a ``GradedSpace`` of shifted generators).
Tensor words are plain tuples of generator names; Lie words are nested
pairs with generator names at the leaves.  The free Lie algebra is
realised inside T(V) through commutator expansion; its basis is the
super-Lyndon one (Lyndon bracketings plus the square [x, x] of every
odd-degree Lyndon element), which over the rationals spans exactly the
primitives of the unshuffle coproduct.

Completed tensor products are replaced by a ``TruncationPolicy``; for
alphabets concentrated in degrees >= 1 every word longer than the degree
cutoff already lives above the cutoff, so truncation is exact below it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graded import (GradedSpace, LinearMap, Vector, accumulate, add_into,
                     is_zero, koszul_sign, scaled, xi_sign)


@dataclass(frozen=True)
class TruncationPolicy:
    """Degree and word-length cutoffs for all truncated computations."""

    max_total_degree: int
    max_word_length: int

    def __post_init__(self):
        if self.max_total_degree < 0:
            raise ValueError("max_total_degree must be >= 0")
        if self.max_word_length < 1:
            raise ValueError("max_word_length must be >= 1")

    def admits(self, degree: int, length: int) -> bool:
        return degree <= self.max_total_degree and length <= self.max_word_length


@dataclass(frozen=True)
class LieWord:
    """A fully parenthesized bracket word; leaves are generator names.

    expr is either a name (leaf) or a pair (left_expr, right_expr).
    normal is True when the word is a super-Lyndon basis element.
    """

    expr: object
    normal: bool = False

    def letters(self) -> tuple:
        return _leaves(self.expr)

    def degree(self, gens: GradedSpace) -> int:
        return sum(gens.degree(a) for a in self.letters())


def _leaves(expr) -> tuple:
    if isinstance(expr, tuple):
        return _leaves(expr[0]) + _leaves(expr[1])
    return (expr,)


def word_degree(gens: GradedSpace, word: tuple) -> int:
    return sum(gens.degree(a) for a in word)


def enumerate_words(gens: GradedSpace, policy: TruncationPolicy) -> list[tuple]:
    """All tensor words within the policy, sorted by (degree, length, word).

    Requires every generator to have positive degree so that the
    enumeration terminates (exactness of truncation).
    """
    degs = {a: gens.degree(a) for a in gens.atoms()}
    if any(d < 1 for d in degs.values()):
        raise ValueError("word enumeration needs all generator degrees >= 1")
    out = [()]
    frontier = [()]
    for _ in range(policy.max_word_length):
        new = []
        for w in frontier:
            base = word_degree(gens, w)
            for a in sorted(degs):
                if base + degs[a] <= policy.max_total_degree:
                    new.append(w + (a,))
        out.extend(new)
        frontier = new
    return sorted(out, key=lambda w: (word_degree(gens, w), len(w), w))


def deconcatenate(word: tuple) -> list[tuple]:
    """All (prefix, suffix) splits, including the empty ones; sign-free."""
    return [(word[:i], word[i:]) for i in range(len(word) + 1)]


def shuffle(gens: GradedSpace, u: tuple, v: tuple) -> Vector:
    """Signed sum over all interleavings of u and v."""
    degs = [gens.degree(a) for a in u + v]
    n, m = len(u), len(v)
    out: Vector = {}
    for positions in itertools.combinations(range(n + m), n):
        perm = [0] * (n + m)
        vpos = [i for i in range(n + m) if i not in positions]
        for original, slot in enumerate(positions):
            perm[slot] = original + 1
        for original, slot in enumerate(vpos):
            perm[slot] = n + original + 1
        sign = koszul_sign(perm, degs)
        merged = tuple((u + v)[i - 1] for i in perm)
        accumulate(out, merged, Fraction(sign))
    return out


def unshuffle(gens: GradedSpace, word: tuple, reduced: bool = False) -> Vector:
    """The unshuffle coproduct T(V) -> T(V) (x) T(V); keys are
    (left word, right word) pairs.  With reduced=True the two trivial
    splits are dropped."""
    degs = [gens.degree(a) for a in word]
    n = len(word)
    out: Vector = {}
    for r in range(n + 1):
        if reduced and r in (0, n):
            continue
        for subset in itertools.combinations(range(n), r):
            rest = [i for i in range(n) if i not in subset]
            # sign to rearrange the word into (subset letters, rest letters)
            perm = [i + 1 for i in subset] + [i + 1 for i in rest]
            sign = koszul_sign(perm, degs)
            left = tuple(word[i] for i in subset)
            right = tuple(word[i] for i in rest)
            accumulate(out, (left, right), Fraction(sign))
    return out


def lie_to_tensor(gens: GradedSpace, expr) -> Vector:
    """Commutator expansion of a Lie word: [u, v] = uv - (-1)**(|u||v|) vu."""
    if not isinstance(expr, tuple):
        return {(expr,): Fraction(1)}
    left = lie_to_tensor(gens, expr[0])
    right = lie_to_tensor(gens, expr[1])
    dl = word_degree(gens, _leaves(expr[0]))
    dr = word_degree(gens, _leaves(expr[1]))
    out: Vector = {}
    for wl, cl in left.items():
        for wr, cr in right.items():
            accumulate(out, wl + wr, cl * cr)
            sign = -1 if (dl * dr) % 2 else 1
            accumulate(out, wr + wl, -sign * cl * cr)
    return out


def bracket_vectors(gens: GradedSpace, u: Vector, du: int,
                    v: Vector, dv: int) -> Vector:
    """[u, v] on tensor expansions of homogeneous degrees du, dv."""
    out: Vector = {}
    sign = -1 if (du * dv) % 2 else 1
    for wl, cl in u.items():
        for wr, cr in v.items():
            accumulate(out, wl + wr, cl * cr)
            accumulate(out, wr + wl, -sign * cl * cr)
    return out


def nested_bracket(gens: GradedSpace, elements: list[Vector],
                   degrees: list[int]) -> Vector:
    """The symmetrized left-nested bracket
    [x_1, ..., x_n] = sum_sigma xi(sigma) [x_{s(1)}, [x_{s(2)}, [...]]]
    on tensor expansions; n = 1 returns x_1 unchanged."""
    n = len(elements)
    if n == 0:
        raise ValueError("nested_bracket needs at least one element")
    if n == 1:
        return dict(elements[0])
    out: Vector = {}
    for perm in itertools.permutations(range(1, n + 1)):
        sign = xi_sign(perm, degrees)
        acc = dict(elements[perm[-1] - 1])
        dacc = degrees[perm[-1] - 1]
        for idx in reversed(perm[:-1]):
            acc = bracket_vectors(gens, elements[idx - 1], degrees[idx - 1],
                                  acc, dacc)
            dacc += degrees[idx - 1]
        add_into(out, acc, sign)
    return out


def nested_bracket_words(gens: GradedSpace, words: list[LieWord]) -> Vector:
    """Tensor expansion of the symmetrized nested bracket of Lie words."""
    elements = [lie_to_tensor(gens, w.expr) for w in words]
    degrees = [w.degree(gens) for w in words]
    return nested_bracket(gens, elements, degrees)


def antipode_word(gens: GradedSpace, word: tuple):
    """(sign, reversed word): s(x_1...x_n) = (-1)**n * Koszul-reversal."""
    n = len(word)
    degs = [gens.degree(a) for a in word]
    rev = list(range(n, 0, -1))
    sign = koszul_sign(rev, degs) * (-1 if n % 2 else 1)
    return sign, tuple(reversed(word))


def lyndon_words(alphabet: list, policy: TruncationPolicy,
                 degs: dict) -> list[tuple]:
    """Lyndon words over the ordered alphabet within the policy (Duval)."""
    order = {a: i for i, a in enumerate(alphabet)}
    maxlen = policy.max_word_length
    result = []

    def gen(prefix):
        if prefix:
            word = tuple(prefix)
            if _is_lyndon(word, order):
                d = sum(degs[a] for a in word)
                if d <= policy.max_total_degree:
                    result.append(word)
        if len(prefix) >= maxlen:
            return
        for a in alphabet:
            d = sum(degs[x] for x in prefix) + degs[a]
            if d <= policy.max_total_degree:
                gen(prefix + [a])

    gen([])
    return sorted(result, key=lambda w: (sum(degs[a] for a in w), len(w), _rank(w, order)))


def _rank(word, order):
    return tuple(order[a] for a in word)


def _is_lyndon(word, order) -> bool:
    if not word:
        return False
    r = _rank(word, order)
    return all(r < _rank(word[i:] + word[:i], order) for i in range(1, len(word)))


def lyndon_bracketing(word: tuple, order: dict):
    """Standard (right) Lyndon bracketing of a Lyndon word."""
    if len(word) == 1:
        return word[0]
    # split at the longest proper Lyndon suffix
    n = len(word)
    for i in range(1, n):
        if _is_lyndon(word[i:], order):
            left, right = word[:i], word[i:]
            if _is_lyndon(left, order):
                return (lyndon_bracketing(left, order),
                        lyndon_bracketing(right, order))
    raise ValueError(f"not a Lyndon word: {word}")


def lyndon_basis(gens: GradedSpace, policy: TruncationPolicy) -> list[LieWord]:
    """Super-Lyndon basis of the free graded Lie algebra within policy:
    Lyndon bracketings, plus [x, x] for every odd-degree Lyndon element x."""
    alphabet = sorted(gens.atoms())
    degs = {a: gens.degree(a) for a in alphabet}
    order = {a: i for i, a in enumerate(alphabet)}
    basis: list[LieWord] = []
    for w in lyndon_words(alphabet, policy, degs):
        expr = lyndon_bracketing(w, order)
        basis.append(LieWord(expr, normal=True))
        d = sum(degs[a] for a in w)
        if d % 2 == 1 and policy.admits(2 * d, 2 * len(w)):
            basis.append(LieWord((expr, expr), normal=True))
    return sorted(basis, key=lambda lw: (lw.degree(gens), len(lw.letters())))


def derivation_extend(gens: GradedSpace, values: dict, degree: int):
    """Extend generator values (name -> tensor expansion) to a derivation
    of the concatenation algebra; returns a function word -> Vector."""

    def apply(word: tuple) -> Vector:
        out: Vector = {}
        crossed = 0
        for i, a in enumerate(word):
            val = values.get(a, {})
            sign = -1 if (degree * crossed) % 2 else 1
            for mid, coeff in val.items():
                accumulate(out, word[:i] + mid + word[i + 1:], coeff * sign)
            crossed += gens.degree(a)
        return out

    return apply


def lie_coordinates(gens: GradedSpace, v: Vector,
                    basis: list[LieWord]) -> dict | None:
    """Coordinates of a tensor expansion in the span of the given Lie
    words, or None if v is not in the span.  Exact Gaussian elimination."""
    if is_zero(v):
        return {}
    length = {len(w) for w in v}
    columns = []
    names = []
    for lw in basis:
        exp = lie_to_tensor(gens, lw.expr)
        if exp and {len(w) for w in exp} & length:
            columns.append(exp)
            names.append(lw)
    support = sorted(set(v) | {w for col in columns for w in col})
    rows = len(support)
    mat = [[col.get(w, Fraction(0)) for col in columns] + [v.get(w, Fraction(0))]
           for w in support]
    ncols = len(columns)
    pivots = {}
    r = 0
    for c in range(ncols):
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
        pivots[c] = r
        r += 1
    coords = {}
    for i in range(rows):
        if mat[i][ncols] and all(mat[i][c] == 0 for c in range(ncols)):
            return None
    for c, rr in pivots.items():
        if mat[rr][ncols]:
            coords[names[c]] = mat[rr][ncols]
    return coords
