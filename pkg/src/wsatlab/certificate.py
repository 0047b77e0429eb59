"""Lower-bound certificate for c-wsat(K[S;n], K[S;R]) from the exterior algebra.

For each pattern r the vector g_r is a signed sum of f-wedges over prefix
blocks; contracting g_r into e_R for every vertex set R of profile r spans a
subspace U whose elements are supported exactly on copies. The bound is
|E(host)| - dim U.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Literal

from .core import (
    ParamFamily,
    ParamVec,
    PartsChoice,
    VertexUniverse,
    build_host,
    copy_edges,
    leq,
    parts_choices,
)
from .errors import CertificateError, FamilyError
from .exterior import (
    DEFAULT_SEED,
    ColorfulBasis,
    ExtElement,
    colorful_generic_basis,
    interior,
    q1_exponent,
)
from .formulas import componentwise_max, componentwise_min, cwsat_formula, q_value
from .linalg import rank

TightCase = Literal["none", "min_r", "max_s"]


def prefix_block(u: VertexUniverse, lo: ParamVec, hi: ParamVec) -> int:
    """Mask of the vertices (a, i) with lo_i < a <= hi_i."""
    m = 0
    for i, (a, b) in enumerate(zip(lo, hi)):
        m |= u.part_mask(range(a + 1, b + 1), i)
    return m


def g_vector(r, S, basis: ColorfulBasis, ordered_signs: bool = True) -> ExtElement:
    """sum over s in S of (-1)^q1(r,s) times the f-wedge of the blocks (s_i, r_i]."""
    u = basis.universe
    r = tuple(r)
    if len(r) != u.d or not leq(r, u.sizes):
        raise FamilyError(f"r={r} must fit inside n={u.sizes}")
    acc = ExtElement(u.size)
    for s in S:
        if not leq(s, r):
            raise FamilyError(f"r={r} does not dominate s={s}")
        term = basis.expand(prefix_block(u, tuple(s), r))
        acc = acc - term if q1_exponent(r, s, ordered_signs) % 2 else acc + term
    return acc


@dataclass(frozen=True)
class Generator:
    r: ParamVec
    vertices: int
    element: ExtElement


def generators(fam: ParamFamily, basis: ColorfulBasis) -> list[Generator]:
    """g_r ⌟ e_R for every r in R(n) and every vertex set R of profile r."""
    u = basis.universe
    if u.sizes != fam.n:
        raise FamilyError("basis universe does not match n")
    out = []
    for r in fam.fitting_R():
        g = g_vector(r, fam.S, basis)
        for parts in parts_choices(u, r):
            R = sum(parts.masks(u))
            out.append(Generator(r, R, interior(g, ExtElement.basis(u.size, R))))
    return out


def span_U(n, S, R, basis: ColorfulBasis) -> list[ExtElement]:
    """Generators of U, restricted to coordinates indexed by host edges."""
    fam = ParamFamily(n, S, R)
    host = build_host(fam.n, fam.S).edges
    return [ExtElement(g.element.size, {m: c for m, c in g.element.terms.items() if m in host})
            for g in generators(fam, basis)]


def dim_U(elements: list[ExtElement]) -> int:
    if not elements:
        return 0
    cols = sorted(set().union(*(x.terms for x in elements)))
    return rank([[x.terms.get(c, 0) for c in cols] for x in elements])


def support_condition(host, S, R, basis: ColorfulBasis) -> bool:
    """Every copy's contraction is supported on exactly the copy's edges."""
    fam = ParamFamily(host.universe.sizes, S, R)
    u = host.universe
    for g in generators(fam, basis):
        parts = u.split(g.vertices)
        want = copy_edges(PartsChoice(parts), fam.S, u)
        if g.element.support() != want or not want <= host.edges:
            return False
    return True


@dataclass(frozen=True)
class CertificateReport:
    n: ParamVec
    S: tuple
    R: tuple
    edge_count: int
    dim_U: int
    q: int
    bound: int
    formula_cwsat: int
    support_ok: bool
    tight_case: TightCase
    dim_equals_q: bool
    seed: int | None

    def to_json(self) -> dict:
        out = asdict(self)
        out["n"] = list(self.n)
        out["S"] = [list(s) for s in self.S]
        out["R"] = [list(r) for r in self.R]
        return out


def tight_case(S, R) -> TightCase:
    if componentwise_max(S) is not None:
        return "max_s"
    if componentwise_min(R) is not None:
        return "min_r"
    return "none"


def certificate_report(n, S, R, seed=DEFAULT_SEED, basis: ColorfulBasis | None = None) -> CertificateReport:
    """Compute dim U exactly and assemble the certified bound |E| - dim U."""
    fam = ParamFamily(n, S, R)
    if basis is None:
        basis = colorful_generic_basis(fam.n, seed)
    host = build_host(fam.n, fam.S)
    gens = generators(fam, basis)
    support_ok = True
    u = host.universe
    restricted = []
    for g in gens:
        want = copy_edges(PartsChoice(u.split(g.vertices)), fam.S, u)
        if g.element.support() != want:
            support_ok = False
        restricted.append(g.element)
    dim = dim_U(restricted)
    q = q_value(fam.n, fam.S, fam.R)
    formula = cwsat_formula(fam.n, fam.S, fam.R).cwsat
    edges = len(host.edges)
    report = CertificateReport(fam.n, fam.S, fam.R, edges, dim, q, edges - dim, formula,
                               support_ok, tight_case(fam.S, fam.R), dim == q, basis.seed)
    if not support_ok:
        raise CertificateError(f"support condition failed for {report}")
    if dim > q:
        raise CertificateError(f"dim U = {dim} exceeds q = {q}")
    return report
