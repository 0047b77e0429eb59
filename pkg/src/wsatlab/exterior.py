"""Exterior algebra over the rationals with subset-indexed basis e_S.

Basis subsets are bitmasks in the color-contiguous vertex order, so the sign of
a product is read off the bit positions directly.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .core import VertexUniverse, as_vec, bits_of, popcount, subsets_of_size
from .errors import CapacityError, FamilyError, WsatError
from .linalg import det

log = logging.getLogger(__name__)

BLOCK_CAP = 8
DEFAULT_SEED = 20240917
ENTRY_RANGE = (1, 10_000)
MAX_RESAMPLES = 64


def inv_count(S: int, T: int) -> int:
    """Number of pairs (s, t) in S x T with s > t."""
    total = 0
    for t in bits_of(T):
        total += popcount(S >> (t + 1))
    return total


def sign(S: int, T: int) -> int:
    return -1 if inv_count(S, T) & 1 else 1


class ExtElement:
    """Sparse exact linear combination of basis vectors e_S of the exterior algebra."""

    __slots__ = ("size", "terms")

    def __init__(self, size: int, terms: Mapping[int, Rational] | None = None):
        self.size = size
        limit = (1 << size) - 1
        clean = {}
        for mask, c in (terms or {}).items():
            if mask & ~limit:
                raise FamilyError("basis subset outside the universe")
            if c:
                clean[mask] = c
        self.terms = clean

    @classmethod
    def basis(cls, size: int, mask: int, coeff: Rational = 1) -> ExtElement:
        return cls(size, {mask: coeff})

    @classmethod
    def vector(cls, size: int, coords: Sequence[Rational]) -> ExtElement:
        """Grade-one element sum_k coords[k] e_{k}."""
        return cls(size, {1 << k: c for k, c in enumerate(coords)})

    def _check(self, other: ExtElement):
        if not isinstance(other, ExtElement):
            raise TypeError("expected an ExtElement")
        if other.size != self.size:
            raise FamilyError("elements live over different universes")

    def __add__(self, other: ExtElement) -> ExtElement:
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ExtElement(self.size, out)

    def __neg__(self) -> ExtElement:
        return ExtElement(self.size, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: ExtElement) -> ExtElement:
        return self + (-other)

    def scale(self, c: Rational) -> ExtElement:
        return ExtElement(self.size, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self.size == other.size and self.terms == other.terms

    def __repr__(self):
        inner = " + ".join(f"{c}*e{{{','.join(str(p + 1) for p in bits_of(m))}}}"
                           for m, c in sorted(self.terms.items()))
        return f"ExtElement({inner or '0'})"

    def support(self) -> frozenset[int]:
        return frozenset(self.terms)

    def grades(self) -> set[int]:
        return {popcount(m) for m in self.terms}

    def wedge(self, other: ExtElement) -> ExtElement:
        return wedge(self, other)

    def __xor__(self, other):
        return wedge(self, other)


def wedge(x: ExtElement, y: ExtElement) -> ExtElement:
    x._check(y)
    out: dict[int, Rational] = {}
    for S, a in x.terms.items():
        for T, b in y.terms.items():
            if S & T:
                continue
            key = S | T
            out[key] = out.get(key, 0) + sign(S, T) * a * b
    return ExtElement(x.size, out)


def wedge_all(size: int, factors: Iterable[ExtElement]) -> ExtElement:
    acc = ExtElement.basis(size, 0)
    for f in factors:
        acc = wedge(acc, f)
    return acc


def inner(x: ExtElement, y: ExtElement):
    x._check(y)
    small, big = (x, y) if len(x.terms) <= len(y.terms) else (y, x)
    return sum((c * big.terms[m] for m, c in small.terms.items() if m in big.terms), 0)


def interior(x: ExtElement, y: ExtElement) -> ExtElement:
    """Left interior product x ⌟ y, with e_T ⌟ e_S = sgn(S \\ T, T) e_{S \\ T} for T ⊆ S."""
    x._check(y)
    out: dict[int, Rational] = {}
    for T, a in x.terms.items():
        for S, b in y.terms.items():
            if T & ~S:
                continue
            rest = S & ~T
            out[rest] = out.get(rest, 0) + sign(rest, T) * a * b
    return ExtElement(x.size, out)


Matrix = list[list[Rational]]


def _dot(u, w):
    return sum(a * b for a, b in zip(u, w))


def _primitive(row):
    if not all(isinstance(x, int) for x in row):
        return row
    g = 0
    for x in row:
        g = gcd(g, x)
    return row if g in (0, 1) else [x // g for x in row]


def orthogonalize(A: Sequence[Sequence[Rational]], reduce: bool = False) -> Matrix:
    """Make rows pairwise orthogonal without division.

    For i = 1..n and j < i, row i becomes <v_j,v_j> v_i - <v_i,v_j> v_j. With
    ``reduce`` each finished integer row is divided by the gcd of its entries,
    a positive scaling that keeps orthogonality and the zero pattern of minors.
    """
    rows = [list(r) for r in A]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise FamilyError("orthogonalize expects a square matrix")
    for i in range(n):
        for j in range(i):
            vj = rows[j]
            a = _dot(vj, vj)
            b = _dot(rows[i], vj)
            if b:
                rows[i] = [a * x - b * y for x, y in zip(rows[i], vj)]
        if reduce:
            rows[i] = _primitive(rows[i])
        if not any(rows[i]):
            log.warning("orthogonalize produced a zero row at index %d", i)
    return rows


def all_minors_nonzero(B: Sequence[Sequence[Rational]]) -> bool:
    return first_zero_minor(B) is None


def first_zero_minor(B: Sequence[Sequence[Rational]]):
    """(rows, cols) of the first vanishing square minor, or None."""
    m = len(B)
    for k in range(1, m + 1):
        for rows in combinations(range(m), k):
            for cols in combinations(range(m), k):
                if det([[B[a][b] for b in cols] for a in rows]) == 0:
                    return rows, cols
    return None


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def generic_block(m: int, seed=DEFAULT_SEED, cap: int = BLOCK_CAP) -> Matrix:
    """m x m integer matrix with orthogonal rows and every square minor nonzero.

    Entries are sampled, orthogonalized, and the minors checked exhaustively;
    failures are resampled from the same generator.
    """
    if m > cap:
        raise CapacityError(f"block size {m} exceeds the minor-verification cap {cap}")
    rng = _rng(seed)
    lo, hi = ENTRY_RANGE
    for attempt in range(MAX_RESAMPLES):
        A = [[rng.randint(lo, hi) for _ in range(m)] for _ in range(m)]
        B = orthogonalize(A, reduce=True)
        if all_minors_nonzero(B):
            if attempt:
                log.info("generic block of size %d accepted after %d resamples", m, attempt)
            return B
    raise WsatError(f"no generic {m}x{m} block after {MAX_RESAMPLES} samples")


@dataclass(frozen=True)
class ColorfulBasis:
    """Block-diagonal generic basis: row a of blocks[i] is f_{(a+1, i+1)} in e-coordinates."""

    universe: VertexUniverse
    blocks: tuple[tuple[tuple[Rational, ...], ...], ...]
    seed: int | None = None
    verified: bool = False
    _minors: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.universe.size

    def f_vector(self, pos: int) -> ExtElement:
        """Grade-one f_v for the vertex at bit position pos."""
        a, i = self.universe.vertex(pos)
        off = self.universe.offsets[i - 1]
        row = self.blocks[i - 1][a - 1]
        return ExtElement(self.size, {1 << (off + w): c for w, c in enumerate(row)})

    def minor(self, i: int, rows: tuple[int, ...], cols: tuple[int, ...]):
        key = (i, rows, cols)
        val = self._minors.get(key)
        if val is None:
            B = self.blocks[i]
            val = det([[B[a][b] for b in cols] for a in rows])
            self._minors[key] = val
        return val

    def expand(self, S: int) -> ExtElement:
        """f_S in e-coordinates from block minors: coefficient of e_T is prod_i det(B_i[S_i|T_i])."""
        u = self.universe
        terms = {0: 1}
        for i in range(u.d):
            off = u.offsets[i]
            rows = tuple(p - off for p in bits_of(S & u.color_mask(i)))
            nxt = {}
            for T_i in subsets_of_size(u.color_mask(i), len(rows)):
                cols = tuple(p - off for p in bits_of(T_i))
                c = self.minor(i, rows, cols)
                if c == 0:
                    continue
                for mask, v in terms.items():
                    nxt[mask | T_i] = v * c
            terms = nxt
        return ExtElement(self.size, terms)

    def to_json(self) -> dict:
        def cell(x):
            x = Fraction(x)
            return f"{x.numerator}/{x.denominator}"
        return {"blocks": [[[cell(x) for x in row] for row in B] for B in self.blocks],
                "seed": self.seed, "verified_minors": self.verified}

    @classmethod
    def from_json(cls, data: dict) -> ColorfulBasis:
        blocks = tuple(tuple(tuple(_parse_cell(x) for x in row) for row in B) for B in data["blocks"])
        u = VertexUniverse(tuple(len(B) for B in blocks))
        return cls(u, blocks, data.get("seed"), bool(data.get("verified_minors", False)))


def _parse_cell(text: str):
    x = Fraction(text)
    return x.numerator if x.denominator == 1 else x


def colorful_generic_basis(n, seed=DEFAULT_SEED, cap: int = BLOCK_CAP) -> ColorfulBasis:
    """One verified generic block per color class, drawn from a single seeded generator."""
    n = as_vec(n)
    u = VertexUniverse(n)
    rng = random.Random(seed)
    blocks = tuple(tuple(tuple(row) for row in generic_block(k, rng, cap)) for k in n)
    return ColorfulBasis(u, blocks, seed, True)


def f_subset_vector(basis: ColorfulBasis, S: int) -> ExtElement:
    """f_S = f_{v_1} ∧ ... ∧ f_{v_k} over the elements of S in increasing order."""
    return wedge_all(basis.size, (basis.f_vector(p) for p in bits_of(S)))


def sign_decompose_exponent(r, s, m, T: Sequence[Iterable[int]]) -> int:
    r"""Sign exponent (mod 2) relating two interior products of prefix blocks.

    With A_i = (s_i, r_i], B_i = T_i ∪ (m_i, r_i] and C_i = T_i ∪ (m_i, s_i]
    (color i), the product  ∧_i e_{A_i} ⌟ ∧_i e_{B_i}  equals
    (-1)^(q1 + q2 + q3) ∧_i e_{C_i}, where, with t_i = |T_i \ [m_i - 1]|,
    q1 = sum_i r_i sum_{j>i} s_j, q2 = sum_i r_i t_i and
    q3 = -sum_i s_i (t_i + sum_{j>i} s_j).

    T holds one 1-based index set per color with T_i ⊆ [m_i - 1] ∪ (r_i, n_i]
    and |T_i| = m_i.
    """
    r, s, m = as_vec(r), as_vec(s), as_vec(m)
    T = [frozenset(t) for t in T]
    d = len(r)
    if not (len(s) == len(m) == len(T) == d):
        raise FamilyError("r, s, m and T must share the dimension")
    tails = []
    for ri, si, mi, Ti in zip(r, s, m, T):
        if not ri >= si >= mi:
            raise FamilyError("need r_i >= s_i >= m_i")
        if len(Ti) != mi or any(not (1 <= a <= mi - 1 or a > ri) for a in Ti):
            raise FamilyError(f"T_i={sorted(Ti)} is not an m_i-subset of [m_i-1] ∪ (r_i, n_i]")
        tails.append(sum(1 for a in Ti if a > mi - 1))
    q1 = q1_exponent(r, s)
    q2 = sum(r[i] * tails[i] for i in range(d))
    q3 = -sum(s[i] * (tails[i] + sum(s[i + 1:])) for i in range(d))
    return (q1 + q2 + q3) % 2


def q1_exponent(r, s, ordered: bool = True) -> int:
    """sum_i r_i * sum_{j > i} s_j.

    Only colors after i contribute, since an element of a later color class
    sits above every element of an earlier one. ``ordered=False`` sums over
    all j != i instead; that variant does not match the interior product for
    d >= 2 and is kept as a negative control.
    """
    if ordered:
        return sum(r[i] * sum(s[i + 1:]) for i in range(len(r)))
    total = sum(s)
    return sum(ri * (total - si) for ri, si in zip(r, s))
