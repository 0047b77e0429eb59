"""Command-line front end: formula, construct, closure, verify, oracle, certify, sweep.

Exit codes: 0 success, 1 bad input or failed precondition, 2 internal check failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .certificate import certificate_report
from .constructions import construct, construct_max_s, construct_min_r
from .core import Family, ParamFamily, ParamVec, as_family, as_vec, edges_from_json
from .errors import CertificateError, WsatError
from .exterior import BLOCK_CAP, DEFAULT_SEED, colorful_generic_basis
from .formulas import cwsat_formula
from .percolation import (
    EDGE_CAP,
    PercolationTrace,
    closure,
    copy_system,
    cwsat_bruteforce,
    host_for,
    verify_trace,
    wsat_bruteforce_uncolored,
)
from .sweep import CHECKS, Grid, run_grid

log = logging.getLogger("wsatlab")

COMMANDS = ("formula", "construct", "closure", "verify", "oracle", "certify", "sweep")


def parse_vector(text: str) -> ParamVec:
    try:
        return as_vec(int(x) for x in text.split(","))
    except ValueError as exc:
        raise WsatError(f"malformed vector {text!r}: {exc}") from None


def parse_family(text: str) -> Family:
    """'1,0;0,1' -> ((0, 1), (1, 0)); duplicates and mixed dimensions are errors."""
    chunks = [c.strip() for c in text.split(";")]
    if not text.strip() or any(not c for c in chunks):
        raise WsatError(f"malformed family {text!r}")
    return as_family(parse_vector(c) for c in chunks)


@dataclass
class RunConfig:
    command: str
    n: ParamVec | None = None
    S: Family | None = None
    R: Family | None = None
    mode: str = "colored"
    seed: int = DEFAULT_SEED
    edge_cap: int = EDGE_CAP
    block_cap: int = BLOCK_CAP
    out: str | None = None
    kind: str = "auto"
    start: str | None = None
    trace: str | None = None
    jobs: int = 1
    grid: Grid = field(default_factory=Grid)
    checks: tuple[str, ...] = CHECKS

    @property
    def family(self) -> ParamFamily:
        if self.n is None or self.S is None or self.R is None:
            raise WsatError(f"{self.command} needs --n, --S and --R")
        return ParamFamily(self.n, self.S, self.R)


def _load_json(arg: str):
    """Inline JSON or a path to a JSON file ('-' reads stdin)."""
    if arg == "-":
        return json.load(sys.stdin)
    text = arg.strip()
    if text.startswith(("{", "[")):
        return json.loads(text)
    with open(arg) as fh:
        return json.load(fh)


def _formula(cfg: RunConfig) -> dict:
    return cwsat_formula(*_nsr(cfg.family)).to_json()


def _nsr(fam: ParamFamily):
    return fam.n, fam.S, fam.R


def _construct(cfg: RunConfig) -> dict:
    fam = cfg.family
    build = {"auto": construct, "min_r": construct_min_r, "max_s": construct_max_s}[cfg.kind]
    res = build(*_nsr(fam))
    return res.to_json()


def _closure(cfg: RunConfig) -> dict:
    fam = cfg.family
    host = host_for(fam.n, fam.S)
    start = []
    if cfg.start is not None:
        data = _load_json(cfg.start)
        start = edges_from_json(data.get("start", data) if isinstance(data, dict) else data, host.universe)
    extra = set(start) - host.edges
    if extra:
        raise WsatError(f"{len(extra)} start edges are not host edges")
    sysm = copy_system(host, fam.S, fam.R, cfg.mode)
    full, trace = closure(host, fam.S, fam.R, start, cfg.mode)
    out = trace.to_json(start, host.universe, cfg.mode)
    out.update(fam.to_json())
    out["closure_size"] = len(full)
    out["percolates"] = full == host.edges
    out["fallback_mode"] = sysm.fallback
    return out


def _verify(cfg: RunConfig) -> dict:
    if cfg.trace is None:
        raise WsatError("verify needs --trace (a construct or closure JSON document)")
    data = _load_json(cfg.trace)
    try:
        n = cfg.n or as_vec(data["n"])
        S = cfg.S or as_family(data["S"])
        R = cfg.R or as_family(data["R"])
    except KeyError as exc:
        raise WsatError(f"trace document lacks {exc} and no flag supplies it") from None
    mode = data.get("mode", cfg.mode)
    fam = ParamFamily(n, S, R)
    host = host_for(fam.n, fam.S)
    start, trace = PercolationTrace.from_json(data, host.universe)
    steps = verify_trace(host, fam.S, fam.R, start, trace, mode, require_full=False)
    full = verify_trace(host, fam.S, fam.R, start, trace, mode)
    out = fam.to_json()
    out.update({"mode": mode, "valid": steps.ok, "percolates": full.ok,
                "step": full.step, "reason": full.reason, "length": len(trace)})
    if not steps.ok:
        out["exit"] = 1
    return out


def _oracle(cfg: RunConfig) -> dict:
    fam = cfg.family
    host = host_for(fam.n, fam.S)
    if cfg.mode == "colored":
        res = cwsat_bruteforce(host, fam.S, fam.R, cap=cfg.edge_cap)
    else:
        res = wsat_bruteforce_uncolored(host, fam.S, fam.R, cap=cfg.edge_cap)
    out = fam.to_json()
    out.update({"mode": cfg.mode, "value": res.value, "components": res.components,
                "method": res.method, "fallback_mode": res.method == "exhaustive",
                "witness": sorted([list(v) for v in host.universe.vertices(e)] for e in res.witness)})
    return out


def _certify(cfg: RunConfig) -> dict:
    fam = cfg.family
    basis = colorful_generic_basis(fam.n, cfg.seed, cap=cfg.block_cap)
    rep = certificate_report(*_nsr(fam), seed=cfg.seed, basis=basis)
    out = rep.to_json()
    out["basis"] = basis.to_json()
    return out


HANDLERS = {"formula": _formula, "construct": _construct, "closure": _closure,
            "verify": _verify, "oracle": _oracle, "certify": _certify}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def run(cfg: RunConfig, stream=None) -> int:
    """Dispatch one command and write its JSON; returns the exit code."""
    own = cfg.out is not None
    stream = open(cfg.out, "w") if own else (stream or sys.stdout)
    try:
        if cfg.command == "sweep":
            code = 0
            for row in run_grid(cfg.grid, cfg.checks, jobs=cfg.jobs):
                stream.write(dumps(row) + "\n")
                if not row["ok"]:
                    code = 2
            return code
        result = HANDLERS[cfg.command](cfg)
        code = result.pop("exit", 0)
        stream.write(dumps(result) + "\n")
        return code
    except CertificateError as exc:
        log.error("internal check failed: %s", exc)
        return 2
    except (WsatError, OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    finally:
        if own:
            stream.close()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wsatlab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", help="host part sizes, e.g. 4,4")
    p.add_argument("--S", help="edge profiles, e.g. '1,0;0,1'")
    p.add_argument("--R", help="pattern part sizes, e.g. '2,1;1,2'")
    p.add_argument("--mode", choices=("colored", "uncolored"), default="colored")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--edge-cap", type=int, default=EDGE_CAP)
    p.add_argument("--block-cap", type=int, default=BLOCK_CAP)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    p.add_argument("--kind", choices=("auto", "min_r", "max_s"), default="auto")
    p.add_argument("--start", help="closure start edges: JSON list of edges, or a document with 'start'")
    p.add_argument("--trace", help="verify input: JSON document, path, or '-' for stdin")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dims", default="1,2", help="sweep: dimensions")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--entry-max", type=int, default=3)
    p.add_argument("--family-max", type=int, default=2)
    p.add_argument("--checks", default=",".join(CHECKS))
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    n = parse_vector(ns.n) if ns.n else None
    d = len(n) if n else None
    S = as_family(parse_family(ns.S), d) if ns.S else None
    R = as_family(parse_family(ns.R), d) if ns.R else None
    checks = tuple(c for c in ns.checks.split(",") if c)
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise WsatError(f"unknown checks {sorted(unknown)}")
    grid = Grid(dims=tuple(int(x) for x in ns.dims.split(",")), n_max=ns.n_max,
                entry_max=ns.entry_max, family_max=ns.family_max, edge_cap=ns.edge_cap,
                swap_symmetric=False)
    return RunConfig(ns.command, n, S, R, ns.mode, ns.seed, ns.edge_cap, ns.block_cap, ns.out,
                     ns.kind, ns.start, ns.trace, ns.jobs, grid, checks)


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
    except (WsatError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
