"""Closed-form counts for colored and uncolored weak saturation of K[S;n].

All arithmetic is on Python ints. Binomials vanish whenever the bottom is
negative or exceeds the top, negative tops included.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb, prod
from typing import Sequence

from .core import Family, ParamFamily, ParamVec, as_family, as_vec, host_edge_count, leq
from .errors import CapacityError, FamilyError

CONV_CAP = 8


def binom(a: int, b: int) -> int:
    if b < 0 or a < b:
        return 0
    return comb(a, b)


def down_closure(S) -> Family:
    S = as_family(S)
    out = set()
    for s in S:
        out.update(product(*(range(si + 1) for si in s)))
    return tuple(sorted(out))


def componentwise_min(R) -> ParamVec | None:
    """The member of R lying below every other member, if there is one."""
    for r in R:
        if all(leq(r, x) for x in R):
            return r
    return None


def componentwise_max(S) -> ParamVec | None:
    for s in S:
        if all(leq(x, s) for x in S):
            return s
    return None


def _m_term(m: Sequence[int], n: Sequence[int], top: Sequence[int]) -> int:
    # empty product (m = 0) is 1
    return prod(binom(mi - 1 + ni - ti, mi) for mi, ni, ti in zip(m, n, top) if mi)


def q_value(n, S, R) -> int:
    """Dimension bound q(n, S, R): inclusion-exclusion over nonempty subsets of R(n)."""
    fam = ParamFamily(n, S, R)
    fitting = fam.fitting_R()
    lower = down_closure(fam.S)
    total = 0
    for k in range(1, len(fitting) + 1):
        sign = 1 if k % 2 else -1
        for Q in combinations(fitting, k):
            top = tuple(max(col) for col in zip(*Q))
            total += sign * sum(_m_term(m, fam.n, top) for m in lower)
    return total


def q_single(n, S, r) -> int:
    r = as_vec(r)
    fam = ParamFamily(n, S, [r])
    if not leq(r, fam.n):
        raise FamilyError(f"r={r} does not fit inside n={fam.n}")
    return sum(_m_term(m, fam.n, r) for m in down_closure(fam.S))


@dataclass(frozen=True)
class FormulaResult:
    n: ParamVec
    S: Family
    R: Family
    edges: int
    q: int
    cwsat: int
    tight_guaranteed: bool

    def to_json(self) -> dict:
        return {
            "n": list(self.n),
            "S": [list(s) for s in self.S],
            "R": [list(r) for r in self.R],
            "edges": self.edges,
            "q": self.q,
            "cwsat": self.cwsat,
            "tight_guaranteed": self.tight_guaranteed,
        }


def cwsat_formula(n, S, R) -> FormulaResult:
    """Lower bound |E(K[S;n])| - q(n,S,R); exact when R has a minimum or S a maximum."""
    fam = ParamFamily(n, S, R)
    edges = host_edge_count(fam.n, fam.S)
    q = q_value(fam.n, fam.S, fam.R)
    tight = componentwise_min(fam.R) is not None or componentwise_max(fam.S) is not None
    return FormulaResult(fam.n, fam.S, fam.R, edges, q, edges - q, tight)


def _check_symmetric(n, s: int, R) -> tuple[ParamVec, Family]:
    n = as_vec(n)
    R = as_family(R, len(n))
    if s < 0:
        raise FamilyError("s must be nonnegative")
    if any(ni < s for ni in n) or any(ri < s for r in R for ri in r):
        raise FamilyError(f"every n_i and r_i must be at least s={s}")
    return n, R


def permuted_family(R, d: int) -> Family:
    """R composed with every permutation of the coordinates."""
    out = set()
    for r in R:
        out.update(tuple(r[p] for p in perm) for perm in permutations(range(d)))
    return tuple(sorted(out))


def q_tilde(n, s: int, R) -> int:
    n, R = _check_symmetric(n, s, R)
    d = len(n)
    fitting = [r for r in permuted_family(R, d) if leq(r, n)]
    total = 0
    for k in range(1, len(fitting) + 1):
        sign = 1 if k % 2 else -1
        for Q in combinations(fitting, k):
            total += sign * prod(binom(ni - max(col) + s, s) for ni, col in zip(n, zip(*Q)))
    return total


def wsat_formula_symmetric(n, s: int, R) -> int:
    """Uncolored wsat(K[s;n], K[s;R]) for a constant uniformity profile."""
    n, R = _check_symmetric(n, s, R)
    if s == 0:
        return 0 if any(sum(r) <= sum(n) for r in R) else 1
    return prod(comb(ni, s) for ni in n) - q_tilde(n, s, R)


def convolve(v, f: Sequence[int]) -> ParamVec:
    """Push v forward along f (0-based index map): out_i = sum of v_j with f(j) = i."""
    v = tuple(v)
    if len(f) != len(v):
        raise FamilyError("index function and vector lengths differ")
    out = [0] * len(v)
    for j, target in enumerate(f):
        out[target] += v[j]
    return tuple(out)


def conv_set(S, cap: int = CONV_CAP) -> tuple[tuple[int, ...], ...]:
    """All f: [d] -> [d] (as 0-based tuples) mapping S into itself under convolution."""
    S = as_family(S)
    d = len(S[0])
    if d > cap:
        raise CapacityError(f"d={d} exceeds the enumeration cap {cap}")
    members = set(S)
    return tuple(f for f in product(range(d), repeat=d)
                 if all(convolve(s, f) in members for s in S))


def is_permutation(f: Sequence[int]) -> bool:
    return sorted(f) == list(range(len(f)))


def reduction_family(R, S, cap: int = CONV_CAP) -> Family:
    """R composed with the permutations in Conv(S)."""
    R = as_family(R)
    perms = [f for f in conv_set(S, cap) if is_permutation(f)]
    return tuple(sorted({convolve(r, f) for r in R for f in perms}))


def reduction_conditions(S, R, cap: int = CONV_CAP) -> bool:
    """Whether uncolored copies of K[S;r] are exactly colored copies over the reduced family."""
    S = as_family(S)
    R = as_family(R, len(S[0]))
    d = len(S[0])
    if not all(is_permutation(f) for f in conv_set(S, cap)):
        return False
    for s, t in combinations(S, 2):
        if any(abs(a - b) == 1 for a, b in zip(s, t)):
            return False
    for r in R:
        for i in range(d):
            if not any(s[i] != 0 and r[i] >= s[i] + 1 for s in S):
                return False
    return True
