"""Bootstrap percolation on K[S;n] and brute-force weak saturation oracles.

Every copy of a pattern is precomputed as a bitmask over host edge indices, so a
closure is a fixed-point loop of integer operations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal, Sequence, Union

from .core import (
    ColoredHypergraph,
    Family,
    ParamVec,
    PartsChoice,
    VertexUniverse,
    as_family,
    bits_of,
    build_host,
    copy_edges,
    edges_from_json,
    edges_to_json,
    leq,
    parts_choices,
    popcount,
    profile_masks,
    subsets_of_size,
)
from .errors import CapacityError, CertificateError, FamilyError
from .formulas import cwsat_formula, reduction_conditions, reduction_family

log = logging.getLogger(__name__)

Mode = Literal["colored", "uncolored"]

EDGE_CAP = 24
UNCOLORED_VERTEX_CAP = 14


@dataclass(frozen=True)
class PatternPlacement:
    """Uncolored witness: vertex masks of the pattern's parts, in pattern color order."""

    parts: tuple[int, ...]

    @property
    def sizes(self) -> ParamVec:
        return tuple(popcount(p) for p in self.parts)

    def to_json(self, u: VertexUniverse) -> list[list[list[int]]]:
        return [[list(v) for v in u.vertices(p)] for p in self.parts]


Witness = Union[PartsChoice, PatternPlacement]


@dataclass(frozen=True)
class TraceStep:
    edge: int
    r: ParamVec
    witness: Witness


@dataclass(frozen=True)
class PercolationTrace:
    steps: tuple[TraceStep, ...] = ()

    def __len__(self):
        return len(self.steps)

    def edges(self) -> list[int]:
        return [st.edge for st in self.steps]

    def to_json(self, start: Iterable[int], u: VertexUniverse, mode: Mode = "colored") -> dict:
        steps = []
        for st in self.steps:
            if isinstance(st.witness, PartsChoice):
                wit = st.witness.to_json()
            else:
                wit = st.witness.to_json(u)
            steps.append({"edge": [list(v) for v in u.vertices(st.edge)],
                          "r": list(st.r), "witness": wit})
        return {"mode": mode, "start": edges_to_json(sorted(start), u), "steps": steps}

    @classmethod
    def from_json(cls, data: dict, u: VertexUniverse) -> tuple[list[int], PercolationTrace]:
        mode = data.get("mode", "colored")
        steps = []
        for st in data["steps"]:
            edge = u.mask((int(a), int(i)) for a, i in st["edge"])
            if mode == "colored":
                wit: Witness = PartsChoice(st["witness"])
            else:
                wit = PatternPlacement(tuple(u.mask((int(a), int(i)) for a, i in part)
                                             for part in st["witness"]))
            steps.append(TraceStep(edge, tuple(st["r"]), wit))
        return edges_from_json(data["start"], u), cls(tuple(steps))


@dataclass(frozen=True)
class Copy:
    bits: int  # over host edge indices
    r: ParamVec
    witness: Witness


@dataclass
class CopySystem:
    """All copies of the patterns K[S;r], r in R, inside a host, indexed by host edge."""

    host: ColoredHypergraph
    S: Family
    R: Family
    mode: Mode
    method: str
    edges: list[int] = field(default_factory=list)
    index: dict[int, int] = field(default_factory=dict)
    copies: list[Copy] = field(default_factory=list)
    by_edge: list[list[int]] = field(default_factory=list)

    @property
    def full(self) -> int:
        return (1 << len(self.edges)) - 1

    @property
    def fallback(self) -> bool:
        return self.method == "exhaustive"

    def to_bits(self, masks: Iterable[int]) -> int:
        b = 0
        for e in masks:
            try:
                b |= 1 << self.index[e]
            except KeyError:
                raise FamilyError("edge is not an edge of the host") from None
        return b

    def to_masks(self, bits: int) -> frozenset[int]:
        return frozenset(self.edges[i] for i in bits_of(bits))

    def close_bits(self, cur: int, copies: Sequence[int] | None = None) -> int:
        """Percolation closure of an edge-index bitmask."""
        cms = self._copy_bits if copies is None else copies
        while True:
            new = cur
            for c in cms:
                miss = c & ~new
                if miss & (miss - 1) == 0:
                    new |= miss
            if new == cur:
                return cur
            cur = new

    def __post_init__(self):
        self.edges = self.host.sorted_edges()
        self.index = {e: k for k, e in enumerate(self.edges)}
        seen = set()
        for bits, r, wit in self._enumerate():
            if bits in seen:
                continue
            seen.add(bits)
            self.copies.append(Copy(bits, r, wit))
        self.by_edge = [[] for _ in self.edges]
        for ci, c in enumerate(self.copies):
            for k in bits_of(c.bits):
                self.by_edge[k].append(ci)
        self._copy_bits = [c.bits for c in self.copies]

    def _enumerate(self):
        u = self.host.universe
        host_edges = self.host.edges
        if self.method == "exhaustive":
            yield from _uncolored_copies(u, host_edges, self.S, self.R, self.index)
            return
        R = self.R
        if self.method == "reduction":
            R = reduction_family(self.R, self.S)
        for r in R:
            if not leq(r, u.sizes):
                continue
            for parts in parts_choices(u, r):
                es = copy_edges(parts, self.S, u)
                if es <= host_edges:
                    yield sum(1 << self.index[e] for e in es), r, parts


def _ordered_partitions(mask: int, sizes: Sequence[int]):
    if not sizes:
        yield ()
        return
    for first in subsets_of_size(mask, sizes[0]):
        for rest in _ordered_partitions(mask & ~first, sizes[1:]):
            yield (first,) + rest


def _uncolored_copies(u: VertexUniverse, host_edges, S, R, index):
    everything = u.full
    for r in R:
        total = sum(r)
        if total > u.size:
            continue
        for vset in subsets_of_size(everything, total):
            for parts in _ordered_partitions(vset, r):
                es = set()
                for s in S:
                    if leq(s, r):
                        es.update(profile_masks(u, parts, s))
                if es <= host_edges:
                    yield sum(1 << index[e] for e in es), r, PatternPlacement(parts)


def _pick_method(host: ColoredHypergraph, S, R, mode: Mode) -> str:
    if mode == "colored":
        return "colored"
    if mode != "uncolored":
        raise FamilyError(f"unknown mode {mode!r}")
    if host.universe.size <= UNCOLORED_VERTEX_CAP:
        return "exhaustive"
    if reduction_conditions(S, R):
        return "reduction"
    raise CapacityError(
        f"uncolored search over {host.universe.size} vertices needs the reduction "
        f"conditions, which fail for S={S}, R={R}")


@lru_cache(maxsize=256)
def _cached_system(host: ColoredHypergraph, S: Family, R: Family, mode: str, method: str) -> CopySystem:
    return CopySystem(host, S, R, mode, method)


def copy_system(host: ColoredHypergraph, S, R, mode: Mode = "colored", method: str | None = None) -> CopySystem:
    d = host.universe.d
    S = as_family(S, d)
    R = as_family(R, d)
    if method is None:
        method = _pick_method(host, S, R, mode)
    return _cached_system(host, S, R, mode, method)


def closure(host: ColoredHypergraph, S, R, start: Iterable[int], mode: Mode = "colored",
            method: str | None = None) -> tuple[frozenset[int], PercolationTrace]:
    """Maximal percolation closure of start, with a trace scanning candidates in mask order."""
    sysm = copy_system(host, S, R, mode, method)
    cur = sysm.to_bits(start)
    steps = []
    while True:
        for k, e in enumerate(sysm.edges):
            bit = 1 << k
            if cur & bit:
                continue
            hit = next((c for c in (sysm.copies[ci] for ci in sysm.by_edge[k])
                        if c.bits & ~cur == bit), None)
            if hit is not None:
                cur |= bit
                steps.append(TraceStep(e, hit.r, hit.witness))
                break
        else:
            return sysm.to_masks(cur), PercolationTrace(tuple(steps))


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _witness_edges(witness: Witness, r: ParamVec, S, u: VertexUniverse, mode: Mode):
    if mode == "colored":
        if not isinstance(witness, PartsChoice):
            return None, "colored mode needs a per-color parts witness"
        if witness.sizes != r:
            return None, f"witness part sizes {witness.sizes} differ from r={r}"
        try:
            return copy_edges(witness, S, u), ""
        except (IndexError, FamilyError) as exc:
            return None, f"witness outside universe: {exc}"
    if not isinstance(witness, PatternPlacement):
        return None, "uncolored mode needs a pattern placement witness"
    used = 0
    for p in witness.parts:
        if p & used or p & ~u.full:
            return None, "pattern parts overlap or leave the universe"
        used |= p
    if witness.sizes != r:
        return None, f"witness part sizes {witness.sizes} differ from r={r}"
    es = set()
    for s in S:
        if leq(s, r):
            es.update(profile_masks(u, witness.parts, s))
    return frozenset(es), ""


def verify_trace(host: ColoredHypergraph, S, R, start: Iterable[int], trace: PercolationTrace,
                 mode: Mode = "colored", require_full: bool = True) -> TraceCheck:
    """Replay a trace and report the first step that does not follow the rules.

    With require_full=False only the steps are checked, not that the trace ends at the host.
    """
    u = host.universe
    S = as_family(S, u.d)
    R = set(as_family(R, u.d))
    current = set(start)
    if not current <= host.edges:
        return TraceCheck(False, None, "start is not a subset of the host")
    for k, st in enumerate(trace.steps):
        if st.edge not in host.edges:
            return TraceCheck(False, k, "edge outside host")
        if st.edge in current:
            return TraceCheck(False, k, "edge already present")
        if tuple(st.r) not in R:
            return TraceCheck(False, k, f"pattern r={st.r} not in R")
        es, why = _witness_edges(st.witness, tuple(st.r), S, u, mode)
        if es is None:
            return TraceCheck(False, k, why)
        if st.edge not in es:
            return TraceCheck(False, k, "witness copy does not contain the edge")
        if not es <= host.edges:
            return TraceCheck(False, k, "witness copy has edges outside the host")
        if not (es - {st.edge}) <= current:
            return TraceCheck(False, k, "witness incomplete")
        current.add(st.edge)
    if require_full and current != set(host.edges):
        return TraceCheck(False, None, f"{len(host.edges) - len(current)} host edges never added")
    return TraceCheck(True)


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: frozenset[int]
    components: int
    method: str


def _components(sysm: CopySystem) -> list[int]:
    """Edge-index masks of the connected pieces of the edge/copy incidence structure."""
    parent = list(range(len(sysm.edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in sysm.copies:
        ks = list(bits_of(c.bits))
        for k in ks[1:]:
            parent[find(k)] = find(ks[0])
    groups: dict[int, int] = {}
    for k in range(len(sysm.edges)):
        root = find(k)
        groups[root] = groups.get(root, 0) | (1 << k)
    return sorted(groups.values())


def _search_component(sysm: CopySystem, comp: int, floor: int) -> int:
    """Smallest edge-index mask inside comp whose closure covers comp."""
    copies = [c for c in sysm._copy_bits if c & comp]
    touching: dict[int, list[int]] = {}
    for c in copies:
        for k in bits_of(c):
            touching.setdefault(k, []).append(c)
    order = list(bits_of(comp))
    rest = [0] * (len(order) + 1)
    for j in range(len(order) - 1, -1, -1):
        rest[j] = rest[j + 1] | (1 << order[j])

    def extend(cl, add):
        # closure of cl | add, given that cl is already closed
        todo = list(bits_of(add & ~cl))
        cl |= add
        while todo:
            for c in touching.get(todo.pop(), ()):
                miss = c & ~cl
                if miss and miss & (miss - 1) == 0:
                    cl |= miss
                    todo.append(miss.bit_length() - 1)
        return cl

    def dfs(chosen, cl, j, budget):
        if cl & comp == comp:
            return chosen
        if budget == 0 or extend(cl, rest[j]) & comp != comp:
            return None
        for idx in range(j, len(order)):
            b = 1 << order[idx]
            if cl & b:
                continue
            got = dfs(chosen | b, extend(cl, b), idx + 1, budget - 1)
            if got is not None:
                return got
        return None

    base = sysm.close_bits(0, copies)
    for k in range(max(floor, 0), len(order) + 1):
        got = dfs(0, base, 0, k)
        if got is not None:
            return got
    raise AssertionError("the whole component always percolates")


def minimum_percolating(sysm: CopySystem, floor: int = 0) -> OracleResult:
    """Exact minimum size of a set whose closure is every host edge.

    Connected components of the copy structure are solved independently. A
    positive floor is only used to skip levels when there is a single component;
    any answer below it is reported as a violated lower bound.
    """
    comps = _components(sysm)
    witness = 0
    for comp in comps:
        witness |= _search_component(sysm, comp, floor if len(comps) == 1 else 0)
    value = popcount(witness)
    if value < floor:
        raise CertificateError(f"percolating set of size {value} beats the lower bound {floor}")
    if sysm.close_bits(witness) != sysm.full:
        raise CertificateError("oracle witness does not percolate")
    return OracleResult(value, sysm.to_masks(witness), len(comps), sysm.method)


def _check_cap(host: ColoredHypergraph, cap: int):
    if len(host.edges) > cap:
        raise CapacityError(f"host has {len(host.edges)} edges, above the cap {cap}")


def cwsat_bruteforce(host: ColoredHypergraph, S, R, cap: int = EDGE_CAP,
                     use_floor: bool = True) -> OracleResult:
    """Exact colored weak saturation number by exhaustive search."""
    _check_cap(host, cap)
    floor = 0
    if use_floor:
        floor = cwsat_formula(host.universe.sizes, S, R).cwsat
    return minimum_percolating(copy_system(host, S, R, "colored"), floor)


def wsat_bruteforce_uncolored(host: ColoredHypergraph, S, R, cap: int = EDGE_CAP,
                              method: str | None = None) -> OracleResult:
    """Exact uncolored weak saturation number by exhaustive search."""
    _check_cap(host, cap)
    return minimum_percolating(copy_system(host, S, R, "uncolored", method))


def host_for(n, S) -> ColoredHypergraph:
    return _host(tuple(n), as_family(S, len(n)))


@lru_cache(maxsize=256)
def _host(n, S) -> ColoredHypergraph:
    return build_host(n, S)
