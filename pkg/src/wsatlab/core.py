"""Colored hypergraphs K[S;n], their edges as bitmasks, and colored copies."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, FamilyError

ParamVec = tuple[int, ...]
Family = tuple[ParamVec, ...]

WORD_BITS = 64


def as_vec(values: Iterable[int]) -> ParamVec:
    vec = tuple(int(v) for v in values)
    if not vec:
        raise FamilyError("vectors must have dimension d >= 1")
    if any(v < 0 for v in vec):
        raise FamilyError(f"negative entry in {vec}")
    return vec


def as_family(vectors: Iterable[Iterable[int]], d: int | None = None) -> Family:
    """Normalize a collection of vectors to a sorted, duplicate-free tuple.

    Duplicates are rejected rather than silently merged.
    """
    fam = [as_vec(v) for v in vectors]
    if not fam:
        raise FamilyError("families must be non-empty")
    dims = {len(v) for v in fam}
    if d is not None:
        dims.add(d)
    if len(dims) != 1:
        raise FamilyError(f"inconsistent dimensions {sorted(dims)}")
    if len(set(fam)) != len(fam):
        raise FamilyError(f"duplicate vectors in family {fam}")
    return tuple(sorted(fam))


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class ParamFamily:
    """Validated parameters (n, S, R) of a saturation instance."""

    n: ParamVec
    S: Family
    R: Family

    def __init__(self, n, S, R):
        n = as_vec(n)
        S = as_family(S, len(n))
        R = as_family(R, len(n))
        for s in S:
            if not leq(s, n):
                raise FamilyError(f"n={n} does not dominate s={s}")
            for r in R:
                if not leq(s, r):
                    raise FamilyError(f"r={r} does not dominate s={s}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "R", R)

    @property
    def d(self) -> int:
        return len(self.n)

    def fitting_R(self) -> Family:
        """R(n): the patterns that fit inside n."""
        return tuple(r for r in self.R if leq(r, self.n))

    def to_json(self) -> dict:
        return {"n": list(self.n), "S": [list(s) for s in self.S], "R": [list(r) for r in self.R]}


@dataclass(frozen=True)
class VertexUniverse:
    """Color-contiguous vertex order: vertex (a, i) sits at bit offset_i + a - 1.

    Indices a and colors i are 1-based. Universes above one machine word need
    ``wide=True``; Python ints carry the bits either way.
    """

    sizes: ParamVec
    wide: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sizes", as_vec(self.sizes))
        if self.size > WORD_BITS and not self.wide:
            raise CapacityError(
                f"universe of {self.size} vertices exceeds {WORD_BITS}; pass wide=True")

    @property
    def d(self) -> int:
        return len(self.sizes)

    @property
    def size(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for k in self.sizes:
            out.append(acc)
            acc += k
        return tuple(out)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def color_mask(self, i: int) -> int:
        """Mask of color class i (0-based)."""
        return ((1 << self.sizes[i]) - 1) << self.offsets[i]

    def bit(self, a: int, i: int) -> int:
        """Bit position of vertex (a, i), both 1-based."""
        if not (1 <= i <= self.d and 1 <= a <= self.sizes[i - 1]):
            raise IndexError(f"vertex ({a},{i}) outside universe {self.sizes}")
        return self.offsets[i - 1] + a - 1

    def vertex(self, pos: int) -> tuple[int, int]:
        for i, (off, k) in enumerate(zip(self.offsets, self.sizes)):
            if off <= pos < off + k:
                return (pos - off + 1, i + 1)
        raise IndexError(f"bit {pos} outside universe")

    def mask(self, vertices: Iterable[tuple[int, int]]) -> int:
        m = 0
        for a, i in vertices:
            m |= 1 << self.bit(a, i)
        return m

    def vertices(self, mask: int) -> list[tuple[int, int]]:
        if mask & ~self.full:
            raise IndexError("mask has bits outside the universe")
        return [self.vertex(p) for p in bits_of(mask)]

    def part_mask(self, indices: Iterable[int], i: int) -> int:
        """Mask of {(a, i) : a in indices} for 0-based color i."""
        off = self.offsets[i]
        m = 0
        for a in indices:
            if not 1 <= a <= self.sizes[i]:
                raise IndexError(f"index {a} outside color class {i + 1}")
            m |= 1 << (off + a - 1)
        return m

    def split(self, mask: int) -> tuple[tuple[int, ...], ...]:
        """Per-color 1-based indices present in mask."""
        out = []
        for off, k in zip(self.offsets, self.sizes):
            chunk = (mask >> off) & ((1 << k) - 1)
            out.append(tuple(p + 1 for p in bits_of(chunk)))
        return tuple(out)


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def edge_profile(e: int, u: VertexUniverse) -> ParamVec:
    if e & ~u.full:
        raise IndexError("edge has bits outside the universe")
    return tuple(popcount(e & u.color_mask(i)) for i in range(u.d))


def subsets_of_size(mask: int, k: int) -> Iterator[int]:
    """All k-element submasks of mask, in combinations order of the bits."""
    if k < 0:
        return
    for combo in combinations(list(bits_of(mask)), k):
        m = 0
        for p in combo:
            m |= 1 << p
        yield m


def profile_masks(u: VertexUniverse, parts: Sequence[int], s: Sequence[int]) -> Iterator[int]:
    """Masks W inside the given per-color part masks with |W ∩ part_i| = s_i."""
    pools = [list(subsets_of_size(parts[i], s[i])) for i in range(u.d)]
    for pieces in product(*pools):
        m = 0
        for p in pieces:
            m |= p
        yield m


@dataclass(frozen=True)
class PartsChoice:
    """Per-color index sets R_1, ..., R_d (1-based indices within each class)."""

    parts: tuple[frozenset[int], ...]

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(frozenset(int(a) for a in p) for p in parts))

    @property
    def sizes(self) -> ParamVec:
        return tuple(len(p) for p in self.parts)

    def masks(self, u: VertexUniverse) -> tuple[int, ...]:
        if len(self.parts) != u.d:
            raise FamilyError("parts choice dimension does not match universe")
        return tuple(u.part_mask(p, i) for i, p in enumerate(self.parts))

    def to_json(self) -> list[list[int]]:
        return [sorted(p) for p in self.parts]

    @classmethod
    def from_mask(cls, mask: int, u: VertexUniverse) -> PartsChoice:
        return cls(u.split(mask))


@dataclass(frozen=True)
class ColoredHypergraph:
    universe: VertexUniverse
    edges: frozenset[int]

    def __post_init__(self):
        full = self.universe.full
        if any(e & ~full for e in self.edges):
            raise IndexError("edge outside universe")

    def sorted_edges(self) -> list[int]:
        return sorted(self.edges)

    def to_json(self) -> dict:
        u = self.universe
        return {"d": u.d, "n": list(u.sizes), "edges": edges_to_json(self.sorted_edges(), u)}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict, wide: bool = False) -> ColoredHypergraph:
        u = VertexUniverse(tuple(data["n"]), wide=wide)
        if int(data.get("d", u.d)) != u.d:
            raise FamilyError("d does not match length of n")
        return cls(u, frozenset(edges_from_json(data["edges"], u)))


def edges_to_json(edges: Iterable[int], u: VertexUniverse) -> list[list[list[int]]]:
    return [[list(v) for v in u.vertices(e)] for e in edges]


def edges_from_json(data, u: VertexUniverse) -> list[int]:
    return [u.mask((int(a), int(i)) for a, i in e) for e in data]


def host_edge_count(n: Sequence[int], S: Iterable[Sequence[int]]) -> int:
    total = 0
    for s in S:
        term = 1
        for ni, si in zip(n, s):
            term *= comb(ni, si)
        total += term
    return total


def build_host(n, S, wide: bool = False) -> ColoredHypergraph:
    """K[S;n]: every vertex subset whose color profile lies in S."""
    n = as_vec(n)
    S = as_family(S, len(n))
    for s in S:
        if not leq(s, n):
            raise FamilyError(f"profile {s} exceeds n={n}")
    u = VertexUniverse(n, wide=wide)
    classes = [u.color_mask(i) for i in range(u.d)]
    edges = set()
    for s in S:
        edges.update(profile_masks(u, classes, s))
    return ColoredHypergraph(u, frozenset(edges))


def copy_edges(parts: PartsChoice, S, u: VertexUniverse) -> frozenset[int]:
    """Edges of the colored copy of K[S; |R_i|] spanned by the given parts."""
    masks = parts.masks(u)
    sizes = parts.sizes
    out = set()
    for s in S:
        if leq(s, sizes):
            out.update(profile_masks(u, masks, s))
    return frozenset(out)


def is_copy_complete(parts: PartsChoice, S, current, u: VertexUniverse) -> bool:
    return copy_edges(parts, S, u) <= set(current)


def parts_choices(u: VertexUniverse, r: Sequence[int]) -> Iterator[PartsChoice]:
    """Every colored placement of a pattern with part sizes r."""
    pools = [list(combinations(range(1, k + 1), ri)) for k, ri in zip(u.sizes, r)]
    for pieces in product(*pools):
        yield PartsChoice(pieces)
