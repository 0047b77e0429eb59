"""Acceptance gate: eight criteria, one PASS/FAIL line each.

Run alone with `pytest tests/test_acceptance.py -s` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from wsatlab.certificate import certificate_report
from wsatlab.constructions import construct_max_s, construct_min_r
from wsatlab.core import VertexUniverse
from wsatlab.errors import WsatError
from wsatlab.exterior import (
    ExtElement,
    all_minors_nonzero,
    generic_block,
    inner,
    interior,
    orthogonalize,
    sign_decompose_exponent,
    wedge,
    wedge_all,
)
from wsatlab.formulas import (
    componentwise_max,
    componentwise_min,
    cwsat_formula,
    q_value,
    reduction_conditions,
    reduction_family,
)
from wsatlab.linalg import det
from wsatlab.percolation import closure, cwsat_bruteforce, host_for, verify_trace, wsat_bruteforce_uncolored
from wsatlab.sweep import Grid

GRID = Grid(dims=(1, 2), n_max=5, entry_max=3, family_max=2, edge_cap=24, swap_symmetric=False)
SEEDS = (1, 2, 3)
RANDOM_CHECKS = 1000

RESULTS: list[str] = []
_oracle: dict = {}
_points: list = []


def report(capsys, number: int, ok: bool, detail: str, seconds: float, limit: float | None = None):
    within = limit is None or seconds < limit
    status = "PASS" if ok and within else "FAIL"
    bound = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"ACCEPTANCE {number} {status}: {detail} [{seconds:.1f}s{bound}]"
    RESULTS.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert within, line


def grid_points():
    if not _points:
        _points.extend(GRID.points())
    return _points


def oracle(n, S, R) -> int:
    key = (n, S, R)
    if key not in _oracle:
        _oracle[key] = cwsat_bruteforce(host_for(n, S), S, R, cap=GRID.edge_cap).value
    return _oracle[key]


def test_criterion_1_nontight_regression(capsys):
    t0 = time.perf_counter()
    n, S, R = (4, 4), [(1, 0), (0, 1)], [(2, 1), (1, 2)]
    q = q_value(n, S, R)
    formula = cwsat_formula(n, S, R).cwsat
    bound = certificate_report(n, S, R).bound
    value = cwsat_bruteforce(host_for(n, S), S, R).value
    ok = (q, formula, bound, value) == (7, 1, 1, 2)
    report(capsys, 1, ok, f"q={q} formula={formula} certificate={bound} oracle={value}",
           time.perf_counter() - t0, 1.0)


def test_criterion_2_uncolored_below_colored(capsys):
    t0 = time.perf_counter()
    n, S, R = (4, 4), [(2, 1)], [(2, 2)]
    host = host_for(n, S)
    formula = cwsat_formula(n, S, R).cwsat
    colored = cwsat_bruteforce(host, S, R).value
    uncolored = wsat_bruteforce_uncolored(host, S, R).value
    ok = formula == 6 == colored and uncolored <= 4 < 6
    report(capsys, 2, ok, f"formula={formula} colored={colored} uncolored={uncolored}",
           time.perf_counter() - t0, 300.0)


def _percolates(res) -> bool:
    fam = res.family
    full, _ = closure(res.host, fam.S, fam.R, res.F)
    return full == res.host.edges and bool(verify_trace(res.host, fam.S, fam.R, res.F, res.order))


@pytest.mark.slow
def test_criterion_3_tightness_sweep(capsys):
    t0 = time.perf_counter()
    points = built = trivial = 0
    problems: list[str] = []
    for n, S, R in grid_points():
        low, top = componentwise_min(R), componentwise_max(S)
        if low is None and top is None:
            continue
        points += 1
        try:
            formula = cwsat_formula(n, S, R)
            runs = []
            if top is not None and any(all(a <= b for a, b in zip(r, n)) for r in R):
                runs.append(construct_max_s(n, S, R))
            if low is not None and all(a <= b for a, b in zip(low, n)):
                runs.append(construct_min_r(n, S, R))
            if not runs:
                # R(n) is empty: nothing can be added, so F must be the whole host
                trivial += 1
                if formula.cwsat != formula.edges:
                    problems.append(f"{(n, S, R)}: empty R(n) but formula {formula.cwsat}")
            for res in runs:
                built += 1
                if not _percolates(res):
                    problems.append(f"{(n, S, R)}: {res.kind} does not percolate")
                if len(res.F) != formula.cwsat:
                    problems.append(f"{(n, S, R)}: {res.kind} |F|={len(res.F)} formula={formula.cwsat}")
            if oracle(n, S, R) != formula.cwsat:
                problems.append(f"{(n, S, R)}: oracle {oracle(n, S, R)} formula {formula.cwsat}")
        except WsatError as exc:
            problems.append(f"{(n, S, R)}: {type(exc).__name__}: {exc}")
    detail = (f"{points} tight points, {built} constructions, {trivial} with R(n) empty, "
              f"{len(problems)} problems")
    report(capsys, 3, not problems, detail + (f"; first: {problems[0]}" if problems else ""),
           time.perf_counter() - t0, 1800.0)


@pytest.mark.slow
def test_criterion_4_certificate_soundness(capsys):
    t0 = time.perf_counter()
    points = equal_q = 0
    problems: list[str] = []
    for n, S, R in grid_points():
        points += 1
        try:
            dims = set()
            value = oracle(n, S, R)
            for seed in SEEDS:
                rep = certificate_report(n, S, R, seed=seed)
                dims.add(rep.dim_U)
                if not (rep.support_ok and rep.dim_U <= rep.q and rep.bound <= value):
                    problems.append(f"{(n, S, R)} seed {seed}: {rep}")
            if len(dims) != 1:
                problems.append(f"{(n, S, R)}: dim U varies with the seed {sorted(dims)}")
            equal_q += dims == {rep.q}
        except WsatError as exc:
            problems.append(f"{(n, S, R)}: {type(exc).__name__}: {exc}")
    detail = f"{points} points x {len(SEEDS)} seeds, dim U = q on {equal_q}, {len(problems)} problems"
    report(capsys, 4, not problems, detail + (f"; first: {problems[0]}" if problems else ""),
           time.perf_counter() - t0)


def test_criterion_5_classical_triangle(capsys):
    t0 = time.perf_counter()
    rows = []
    for n in (4, 5, 6):
        args = ((n,), [(2,)], [(3,)])
        rows.append((cwsat_formula(*args).cwsat, len(construct_min_r(*args).F),
                     len(construct_max_s(*args).F), certificate_report(*args).bound,
                     cwsat_bruteforce(host_for((n,), [(2,)]), [(2,)], [(3,)]).value))
    ok = all(set(row) == {n - 1} for n, row in zip((4, 5, 6), rows))
    report(capsys, 5, ok, f"(formula, min_r, max_s, certificate, oracle) = {rows}",
           time.perf_counter() - t0, 60.0)


def _rand_q(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 6))


def _rand_element(rng, size, terms=4):
    return ExtElement(size, {rng.randrange(1 << size): _rand_q(rng) for _ in range(rng.randint(0, terms))})


def _rand_vector(rng, size):
    return ExtElement.vector(size, [_rand_q(rng) for _ in range(size)])


def _color_split_holds(rng) -> bool:
    d = rng.randint(1, 3)
    while True:
        n = tuple(rng.randint(1, 4) for _ in range(d))
        if sum(n) <= 8:
            break
    u = VertexUniverse(n)
    S = rng.randrange(1 << u.size)
    T = S & rng.randrange(1 << u.size) if rng.random() < 0.8 else rng.randrange(1 << u.size)
    cnt = lambda m: bin(m).count("1")
    Sp = [S & u.color_mask(i) for i in range(d)]
    Tp = [T & u.color_mask(i) for i in range(d)]
    q = sum((cnt(Sp[j]) - cnt(Tp[j])) * cnt(Tp[i]) for i in range(d) for j in range(i + 1, d))
    rhs = wedge_all(u.size, [interior(ExtElement.basis(u.size, Tp[i]), ExtElement.basis(u.size, Sp[i]))
                             for i in range(d)])
    lhs = interior(ExtElement.basis(u.size, T), ExtElement.basis(u.size, S))
    return lhs == (-rhs if q % 2 else rhs)


def _sign_decomposition_holds(rng) -> bool:
    d = rng.randint(1, 2)
    n = tuple(rng.randint(1, 5) for _ in range(d))
    r = tuple(rng.randint(0, min(3, k)) for k in n)
    s = tuple(rng.randint(0, x) for x in r)
    m = tuple(rng.randint(0, x) for x in s)
    T = []
    for i in range(d):
        pool = [a for a in range(1, n[i] + 1) if a <= m[i] - 1 or a > r[i]]
        if len(pool) < m[i]:
            return _sign_decomposition_holds(rng)
        T.append(tuple(sorted(rng.sample(pool, m[i]))))
    u = VertexUniverse(n)
    block = lambda idx: wedge_all(u.size, [ExtElement.basis(u.size, u.part_mask(ix, i)) for i, ix in enumerate(idx)])
    A = block([range(s[i] + 1, r[i] + 1) for i in range(d)])
    B = block([set(T[i]) | set(range(m[i] + 1, r[i] + 1)) for i in range(d)])
    C = block([set(T[i]) | set(range(m[i] + 1, s[i] + 1)) for i in range(d)])
    want = C if sign_decompose_exponent(r, s, m, T) == 0 else -C
    return interior(A, B) == want


def test_criterion_6_algebra_properties(capsys):
    t0 = time.perf_counter()
    rng = random.Random(20240917)
    size = 6
    failures = {name: 0 for name in ("anticommutativity", "associativity", "determinant",
                                     "adjunction", "color-split", "sign-decomposition")}
    for _ in range(RANDOM_CHECKS):
        v, w = _rand_vector(rng, size), _rand_vector(rng, size)
        failures["anticommutativity"] += wedge(v, w) != -wedge(w, v)
        x, y, z = (_rand_element(rng, size) for _ in range(3))
        failures["associativity"] += wedge(wedge(x, y), z) != wedge(x, wedge(y, z))
        k = rng.randint(1, 4)
        vs = [_rand_vector(rng, size) for _ in range(k)]
        ws = [_rand_vector(rng, size) for _ in range(k)]
        failures["determinant"] += inner(wedge_all(size, vs), wedge_all(size, ws)) != \
            det([[inner(a, b) for b in ws] for a in vs])
        h, g, f = (_rand_element(rng, size) for _ in range(3))
        failures["adjunction"] += inner(h, interior(g, f)) != inner(wedge(h, g), f)
        failures["color-split"] += not _color_split_holds(rng)
        failures["sign-decomposition"] += not _sign_decomposition_holds(rng)
    ok = not any(failures.values())
    detail = f"{RANDOM_CHECKS} checks each; failures {failures}"
    report(capsys, 6, ok, detail, time.perf_counter() - t0, 60.0)


def test_criterion_7_generic_matrices(capsys):
    t0 = time.perf_counter()
    problems = []
    for m in range(1, 7):
        for seed in (1, 2, 3):
            B = generic_block(m, seed=seed)
            orth = all(sum(a * b for a, b in zip(B[i], B[j])) == 0 for i, j in combinations(range(m), 2))
            if not (orth and all_minors_nonzero(B)):
                problems.append(f"block {m} seed {seed}")
    rng = random.Random(7)
    perms = [p for m in range(1, 5) for p in permutations(range(m))]
    perms += [tuple(rng.sample(range(m), m)) for m in (5, 6) for _ in range(20)]
    for p in perms:
        P = [[int(p[i] == j) for j in range(len(p))] for i in range(len(p))]
        if orthogonalize(P) != P:
            problems.append(f"permutation {p}")
    detail = f"blocks 1-6 x 3 seeds verified, {len(perms)} permutation matrices fixed, {len(problems)} problems"
    report(capsys, 7, not problems, detail, time.perf_counter() - t0, 60.0)


@pytest.mark.slow
def test_criterion_8_reduction(capsys):
    t0 = time.perf_counter()
    checked = 0
    problems = []
    for n, S, R in grid_points():
        if not reduction_conditions(S, R):
            continue
        host = host_for(n, S)
        if len(host.edges) > 20:
            continue
        checked += 1
        try:
            unc = wsat_bruteforce_uncolored(host, S, R, method="exhaustive").value
            col = cwsat_bruteforce(host, S, reduction_family(R, S)).value
            if unc != col:
                problems.append(f"{(n, S, R)}: uncolored {unc} vs reduced colored {col}")
        except WsatError as exc:
            problems.append(f"{(n, S, R)}: {type(exc).__name__}: {exc}")
    detail = f"{checked} points with the conditions and at most 20 edges, {len(problems)} problems"
    ok = checked > 0 and not problems
    report(capsys, 8, ok, detail + (f"; first: {problems[0]}" if problems else ""), time.perf_counter() - t0)
