"""Upper-bound witnesses for c-wsat(K[S;n], K[S;R]) with explicit addition orders.

Two constructions: one when R has a componentwise minimum, one when S has a
componentwise maximum. Each removes a labelled family of edges from the host
and returns them in an order where every edge completes a colored copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Sequence

from .core import (
    ColoredHypergraph,
    ParamFamily,
    ParamVec,
    PartsChoice,
    VertexUniverse,
    build_host,
    leq,
)
from .errors import CertificateError, FamilyError
from .formulas import componentwise_max, componentwise_min, cwsat_formula, down_closure
from .percolation import PercolationTrace, TraceStep

SChoice = Callable[[ParamVec, Sequence[ParamVec]], ParamVec]


def lex_least(m: ParamVec, candidates: Sequence[ParamVec]) -> ParamVec:
    return min(candidates)


@dataclass(frozen=True)
class Removal:
    edge: int
    label: ParamVec  # m for the min-r construction, r for the max-s one
    parts: tuple[tuple[int, ...], ...]  # T or W, each part sorted descending


@dataclass(frozen=True)
class ConstructionResult:
    host: ColoredHypergraph
    family: ParamFamily
    kind: str
    F: frozenset[int]
    removed: tuple[Removal, ...]
    order: PercolationTrace

    @property
    def removed_count(self) -> int:
        return len(self.removed)

    def to_json(self) -> dict:
        u = self.host.universe
        out = self.order.to_json(self.F, u, "colored")
        out.update(self.family.to_json())
        out["kind"] = self.kind
        out["removed_count"] = self.removed_count
        out["formula"] = cwsat_formula(*_params(self.family)).cwsat
        out["F_size"] = len(self.F)
        return out


def _params(fam: ParamFamily):
    return fam.n, fam.S, fam.R


def _desc(indices) -> tuple[int, ...]:
    return tuple(sorted(indices, reverse=True))


def _subsets(pool: Sequence[int], k: int):
    return [tuple(c) for c in combinations(pool, k)] if k >= 0 else []


def _finish(host, fam, kind, removed, witnesses) -> ConstructionResult:
    edges = [x.edge for x in removed]
    if len(set(edges)) != len(edges):
        raise CertificateError(f"{kind}: an edge was removed twice")
    F = host.edges - set(edges)
    if len(F) + len(edges) != len(host.edges):
        raise CertificateError(f"{kind}: removed edges are not all host edges")
    steps = tuple(TraceStep(x.edge, r, w) for x, (r, w) in zip(removed, witnesses))
    return ConstructionResult(host, fam, kind, frozenset(F), tuple(removed), PercolationTrace(steps))


def construct_min_r(n, S, R, r_tilde=None, s_choice: SChoice = lex_least) -> ConstructionResult:
    """Remove, for every m below S, the edges (T_i ∪ [s_m,i - m_i]) with T_i above r~_i - m_i + 1.

    Removed edges are added back in increasing lexicographic order of their
    descending-sorted T parts, each completing the copy on [r~_i - m_i] ∪ T_i.
    """
    fam = ParamFamily(n, S, R)
    low = componentwise_min(fam.R)
    if low is None:
        raise FamilyError(f"R={fam.R} has no componentwise minimum")
    r_tilde = low if r_tilde is None else tuple(r_tilde)
    if r_tilde != low:
        raise FamilyError(f"{r_tilde} is not a componentwise minimum of R={fam.R}")
    if not leq(r_tilde, fam.n):
        raise FamilyError(f"minimum r~={r_tilde} does not fit inside n={fam.n}")
    host = build_host(fam.n, fam.S)
    u = host.universe
    removed = []
    for m in down_closure(fam.S):
        admissible = [s for s in fam.S if leq(m, s)]
        if not admissible:
            raise CertificateError(f"no s in S dominates m={m}")
        s_m = tuple(s_choice(m, admissible))
        if s_m not in admissible:
            raise FamilyError(f"s_choice returned {s_m}, not admissible for m={m}")
        pools = [_subsets(range(r_tilde[i] - m[i] + 2, fam.n[i] + 1), m[i]) for i in range(u.d)]
        for T in product(*pools):
            edge = 0
            for i in range(u.d):
                edge |= u.part_mask(set(T[i]) | set(range(1, s_m[i] - m[i] + 1)), i)
            removed.append(Removal(edge, m, tuple(_desc(t) for t in T)))
    removed.sort(key=lambda x: x.parts)
    witnesses = []
    for x in removed:
        parts = [set(range(1, r_tilde[i] - x.label[i] + 1)) | set(x.parts[i]) for i in range(u.d)]
        witnesses.append((r_tilde, PartsChoice(parts)))
    return _finish(host, fam, "min_r", removed, witnesses)


def recover_label(edge: int, u: VertexUniverse) -> tuple[ParamVec, tuple[tuple[int, ...], ...]]:
    """Invert the min-r removal map: strip the maximal prefix [l_i] from each part."""
    m, T = [], []
    for part in u.split(edge):
        l = 0
        while l + 1 in part:
            l += 1
        rest = tuple(a for a in part if a > l)
        m.append(len(rest))
        T.append(_desc(rest))
    return tuple(m), tuple(T)


def construct_max_s(n, S, R) -> ConstructionResult:
    """Remove every edge W with W_i ⊆ [n_i] \\ [r_i - s~_i], |W_i| = s~_i, for some r in R(n)."""
    fam = ParamFamily(n, S, R)
    top = componentwise_max(fam.S)
    if top is None:
        raise FamilyError(f"S={fam.S} has no componentwise maximum")
    fitting = sorted(fam.fitting_R())
    if not fitting:
        raise FamilyError(f"no pattern in R={fam.R} fits inside n={fam.n}")
    host = build_host(fam.n, fam.S)
    u = host.universe
    labelled: dict[int, Removal] = {}
    for r in fitting:
        pools = [_subsets(range(r[i] - top[i] + 1, fam.n[i] + 1), top[i]) for i in range(u.d)]
        for W in product(*pools):
            edge = 0
            for i in range(u.d):
                edge |= u.part_mask(W[i], i)
            if edge not in labelled:
                labelled[edge] = Removal(edge, r, tuple(_desc(w) for w in W))
    removed = sorted(labelled.values(), key=lambda x: x.parts)
    witnesses = []
    for x in removed:
        r = x.label
        parts = [set(range(1, r[i] - top[i] + 1)) | set(x.parts[i]) for i in range(u.d)]
        witnesses.append((r, PartsChoice(parts)))
    return _finish(host, fam, "max_s", removed, witnesses)


def construct(n, S, R) -> ConstructionResult:
    """Whichever construction applies, preferring the max-s one."""
    fam = ParamFamily(n, S, R)
    if componentwise_max(fam.S) is not None and fam.fitting_R():
        return construct_max_s(*_params(fam))
    low = componentwise_min(fam.R)
    if low is not None and leq(low, fam.n):
        return construct_min_r(*_params(fam))
    raise FamilyError("neither R has a fitting minimum nor S a maximum with R(n) nonempty")


def compare_s_choices(n, S, R) -> dict:
    """Run the min-r construction for every admissible choice of s_m and compare the F's.

    Sizes always agree; whether the edge sets coincide is reported, not assumed.
    """
    fam = ParamFamily(n, S, R)
    lower = down_closure(fam.S)
    options = [[s for s in fam.S if leq(m, s)] for m in lower]
    results = []
    for picks in product(*options):
        table = dict(zip(lower, picks))
        res = construct_min_r(*_params(fam), s_choice=lambda m, cands, t=table: t[m])
        results.append(res.F)
    return {
        "choices": len(results),
        "sizes": sorted({len(F) for F in results}),
        "identical": all(F == results[0] for F in results),
    }
