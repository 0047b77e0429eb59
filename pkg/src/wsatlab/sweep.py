"""Parameter grids and per-point checks shared by the CLI sweep and the acceptance suite."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

from .certificate import certificate_report
from .constructions import construct_max_s, construct_min_r
from .core import Family, ParamVec, host_edge_count, leq
from .errors import WsatError
from .formulas import componentwise_max, componentwise_min, cwsat_formula, reduction_conditions, reduction_family
from .percolation import closure, cwsat_bruteforce, host_for, verify_trace, wsat_bruteforce_uncolored

CHECKS = ("formula", "construct", "oracle", "certify", "reduction")
SEEDS = (1, 2, 3)


@dataclass(frozen=True)
class Grid:
    """All (n, S, R) with n_i <= n_max, entries <= entry_max and |S|, |R| <= family_max.

    With `swap_symmetric`, two-color points with n_1 < n_2 are dropped: swapping the
    colors maps them onto a point with the same answers. Off by default, since the
    sign conventions of the certificate depend on the color order.
    """

    dims: tuple[int, ...] = (1, 2)
    n_max: int = 5
    entry_max: int = 3
    family_max: int = 2
    edge_cap: int = 24
    swap_symmetric: bool = False

    def families(self, d: int) -> list[Family]:
        vecs = list(product(range(self.entry_max + 1), repeat=d))
        out = []
        for k in range(1, self.family_max + 1):
            out.extend(combinations(vecs, k))
        return out

    def points(self) -> Iterator[tuple[ParamVec, Family, Family]]:
        for d in self.dims:
            fams = self.families(d)
            for n in product(range(1, self.n_max + 1), repeat=d):
                if self.swap_symmetric and d == 2 and n[0] < n[1]:
                    continue
                for S in fams:
                    if not all(leq(s, n) for s in S):
                        continue
                    if host_edge_count(n, S) > self.edge_cap:
                        continue
                    for R in fams:
                        if all(leq(s, r) for s in S for r in R):
                            yield n, S, R

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "n_max": self.n_max, "entry_max": self.entry_max,
                "family_max": self.family_max, "edge_cap": self.edge_cap,
                "swap_symmetric": self.swap_symmetric}


def _construction(n, S, R):
    runs = []
    if componentwise_max(S) is not None and any(leq(r, n) for r in R):
        runs.append(construct_max_s(n, S, R))
    low = componentwise_min(R)
    if low is not None and leq(low, n):
        runs.append(construct_min_r(n, S, R))
    return runs


def evaluate(n, S, R, checks: Sequence[str] = CHECKS, seeds: Sequence[int] = SEEDS,
             edge_cap: int = 24, reduction_cap: int = 20) -> dict:
    """Run the requested checks on one point; failures are recorded, not raised."""
    t0 = time.perf_counter()
    row: dict = {"n": list(n), "S": [list(s) for s in S], "R": [list(r) for r in R]}
    failures = []
    try:
        formula = cwsat_formula(n, S, R)
        row["edges"] = formula.edges
        row["q"] = formula.q
        row["formula"] = formula.cwsat
        row["tight_guaranteed"] = formula.tight_guaranteed
        host = host_for(n, S)
        oracle = None
        if "oracle" in checks or "certify" in checks or "construct" in checks:
            if formula.edges <= edge_cap:
                oracle = cwsat_bruteforce(host, S, R, cap=edge_cap).value
                row["oracle"] = oracle
                if formula.tight_guaranteed and oracle != formula.cwsat:
                    failures.append("oracle differs from tight formula")
                if oracle < formula.cwsat:
                    failures.append("oracle below formula lower bound")
        if "construct" in checks:
            sizes = {}
            for res in _construction(n, S, R):
                ok = verify_trace(host, S, R, res.F, res.order, "colored")
                full, _ = closure(host, S, R, res.F, "colored")
                sizes[res.kind] = len(res.F)
                if not ok or full != host.edges:
                    failures.append(f"{res.kind} does not percolate: {ok.reason}")
                if len(res.F) != formula.cwsat:
                    failures.append(f"{res.kind} size {len(res.F)} != formula {formula.cwsat}")
            row["construct"] = sizes
        if "certify" in checks:
            dims = set()
            for seed in seeds:
                rep = certificate_report(n, S, R, seed=seed)
                dims.add(rep.dim_U)
                if not rep.support_ok:
                    failures.append("support condition failed")
                if rep.dim_U > formula.q:
                    failures.append("dim U exceeds q")
                if oracle is not None and rep.bound > oracle:
                    failures.append("certificate bound above oracle")
            row["dim_U"] = sorted(dims)
            row["bound"] = formula.edges - max(dims)
            if len(dims) != 1:
                failures.append("dim U depends on the seed")
        if "reduction" in checks and reduction_conditions(S, R) and formula.edges <= reduction_cap:
            red = reduction_family(R, S)
            unc = wsat_bruteforce_uncolored(host, S, R, cap=edge_cap, method="exhaustive")
            col = cwsat_bruteforce(host, S, red, cap=edge_cap)
            row["reduction"] = {"family": [list(r) for r in red], "uncolored": unc.value,
                                "colored": col.value, "method": unc.method}
            if unc.value != col.value:
                failures.append("uncolored value differs from reduced colored value")
    except WsatError as exc:
        failures.append(f"{type(exc).__name__}: {exc}")
    row["failures"] = failures
    row["ok"] = not failures
    row["seconds"] = round(time.perf_counter() - t0, 4)
    return row


def _evaluate_packed(args):
    point, checks, seeds, edge_cap = args
    return evaluate(*point, checks=checks, seeds=seeds, edge_cap=edge_cap)


def run_grid(grid: Grid, checks: Sequence[str] = CHECKS, seeds: Sequence[int] = SEEDS,
             jobs: int = 1) -> Iterator[dict]:
    """Evaluate every point, yielding rows in grid order even when run in parallel."""
    tasks = ((p, tuple(checks), tuple(seeds), grid.edge_cap) for p in grid.points())
    if jobs <= 1:
        for index, task in enumerate(tasks):
            yield {"index": index, **_evaluate_packed(task)}
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for index, row in enumerate(pool.map(_evaluate_packed, tasks, chunksize=8)):
            yield {"index": index, **row}
