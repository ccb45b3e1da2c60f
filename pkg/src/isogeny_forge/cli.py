"""Command-line front end: batch analysis, searches, and JSON-lines output.

Exit codes: 0 success, 1 analysis-level failure (failed certificate, unmet
hypotheses, non-derivable target), 2 usage error, 3 I/O error.  Records are
one JSON object per line with a fixed field order; replays are byte-identical
up to the timing field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import __version__
from .checkers import main1_check, main2_check, supersingular_scan
from .elliptic import WeierstrassModel, curve_from_pair, rational_points_mod_p
from .errors import BudgetExceededError, DegenerateCurveError, InsufficientPrimesError
from .exactnum import primes_up_to
from .kgroup import MINUS, PLUS, prove_skew
from .pontryagin import FinAbGroup, aug_filtration
from .reduction import classify_reduction, conductor, potential_type
from .scholten import (
    box_grid,
    build_scholten,
    good_primes_for,
    parameter_search,
    quadruples_from_csv,
    scholten_family,
    torsion_orbit_report,
    verify_split_jacobian,
)

CACHE_ENV = "ISOGENY_FORGE_CACHE"


class UsageError(Exception):
    pass


@dataclass
class RunPlan:
    command: str
    options: dict
    output: Optional[str]
    cache_dir: Optional[str]
    jobs: int


@dataclass
class _Sink:
    fh: object
    count: int = 0

    def emit(self, kind: str, inputs: dict, outputs: dict, t0: float) -> None:
        record = {
            "kind": kind,
            "inputs": inputs,
            "outputs": outputs,
            "tool_version": __version__,
            "timing_ms": int((time.perf_counter() - t0) * 1000),
        }
        self.fh.write(json.dumps(record, separators=(",", ":")) + "\n")
        self.count += 1


class ConductorCache:
    """JSON-file memo of conductor values keyed by exact model coefficients."""

    def __init__(self, directory: Optional[str]):
        self.directory = directory
        self.table: dict[str, int] = {}
        self.path = None
        if directory:
            os.makedirs(directory, exist_ok=True)
            self.path = os.path.join(directory, "conductors.json")
            if os.path.exists(self.path):
                with open(self.path) as fh:
                    self.table = {k: int(v) for k, v in json.load(fh).items()}

    @staticmethod
    def key_of(model: WeierstrassModel) -> str:
        return ",".join(str(c) for c in model.coeffs())

    def conductor(self, model: WeierstrassModel) -> int:
        key = self.key_of(model)
        if key not in self.table:
            self.table[key] = conductor(model)
            self._save()
        return self.table[key]

    def _save(self) -> None:
        if not self.path:
            return
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(self.table, fh, sort_keys=True)
        os.replace(tmp, self.path)


# -- argument helpers -----------------------------------------------------------


def _parse_primes(spec: str) -> list[int]:
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        lo, hi = int(lo), int(hi)
        return [p for p in primes_up_to(hi) if p >= lo]
    if "," in spec:
        return [int(tok) for tok in spec.split(",") if tok.strip()]
    return primes_up_to(int(spec))


def _parse_pair(spec: str) -> tuple[int, int]:
    toks = [int(t) for t in spec.split(",")]
    if len(toks) != 2:
        raise UsageError(f"expected a,b got {spec!r}")
    return toks[0], toks[1]


def _parse_quad(spec: str) -> tuple[int, int, int, int]:
    toks = [int(t) for t in spec.split(",")]
    if len(toks) != 4:
        raise UsageError(f"expected a,b,c,d got {spec!r}")
    return tuple(toks)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="isogeny-forge",
        description="reduction profiles, split-Jacobian certificates, symbol "
        "relation proofs, and filtration reports, as JSON lines",
    )
    top.add_argument("--output", help="output path (default stdout)")
    top.add_argument("--cache-dir", help=f"cache directory (or ${CACHE_ENV})")
    top.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                     help="worker processes for searches")
    sub = top.add_subparsers(dest="command", required=True)

    ac = sub.add_parser("analyze-curve", help="per-prime reduction reports")
    ac.add_argument("--a", type=int, required=True)
    ac.add_argument("--b", type=int, required=True)
    ac.add_argument("--primes", required=True, help="N, lo..hi, or p1,p2,...")

    sch = sub.add_parser("scholten", help="genus-2 split-Jacobian toolkit")
    schsub = sch.add_subparsers(dest="subcommand", required=True)
    b = schsub.add_parser("build")
    b.add_argument("--params", required=True, help="a,b,c,d")
    f = schsub.add_parser("family")
    f.add_argument("--params", required=True, help="a,b,c,d")
    v = schsub.add_parser("verify")
    v.add_argument("--params", required=True, help="a,b,c,d")
    v.add_argument("--primes", required=True, help="N, lo..hi, or p1,p2,...")
    v.add_argument("--e1", help="override first factor as a,b (negative control)")
    v.add_argument("--e2", help="override second factor as c,d")
    s = schsub.add_parser("search")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--csv", help="CSV grid with header a,b,c,d")
    src.add_argument("--box", type=int, help="all |a|,|b|,|c|,|d| <= N")
    s.add_argument("--predicate", action="append", default=[],
                   help="split-jacobian[:BOUND] or max-one-supersingular:P")
    s.add_argument("--no-dedupe", action="store_true")
    s.add_argument("--limit", type=int, default=0, help="stop after N records")

    chk = sub.add_parser("check", help="hypothesis checkers")
    chksub = chk.add_subparsers(dest="subcommand", required=True)
    m1 = chksub.add_parser("main1")
    m1.add_argument("--curves", required=True, help="a,b;c,d;...")
    m1.add_argument("--p", type=int, required=True)
    m2 = chksub.add_parser("main2")
    m2.add_argument("--product", action="append", required=True,
                    help="a,b|c,d@DEG (repeatable)")
    m2.add_argument("--p", type=int, required=True)
    m2.add_argument("--unramified", action="store_true")
    m2.add_argument("--all-good", action="store_true")
    g2 = chksub.add_parser("global2")
    g2.add_argument("--a", type=int, required=True)
    g2.add_argument("--b", type=int, required=True)
    g2.add_argument("--deg-phi", type=int, required=True)
    g2.add_argument("--bound", type=int, required=True)

    scan = sub.add_parser("scan", help="prime scans")
    scansub = scan.add_subparsers(dest="subcommand", required=True)
    ss = scansub.add_parser("supersingular")
    ss.add_argument("--a", type=int, required=True)
    ss.add_argument("--b", type=int, required=True)
    ss.add_argument("--bound", type=int, required=True)

    kg = sub.add_parser("kgroup", help="symbol relation proofs")
    kgsub = kg.add_subparsers(dest="subcommand", required=True)
    ps = kgsub.add_parser("prove-skew")
    ps.add_argument("--q", type=int, required=True)
    ps.add_argument("--a", type=int, default=1)
    ps.add_argument("--b", type=int, default=-1)
    ps.add_argument("--r", type=int, default=2)
    ps.add_argument("--convention", choices=[MINUS, PLUS, "both"], default=MINUS)
    ps.add_argument("--per-target", action="store_true")

    fl = sub.add_parser("filtration", help="augmentation filtration quotients")
    grp = fl.add_mutually_exclusive_group(required=True)
    grp.add_argument("--group", help="invariant factors, e.g. 2,4")
    grp.add_argument("--elliptic-p", type=int, help="use E(F_p)")
    fl.add_argument("--a", type=int, default=1)
    fl.add_argument("--b", type=int, default=-1)
    fl.add_argument("--rmax", type=int, default=3)
    return top


def plan_from_args(argv: Sequence[str]) -> RunPlan:
    parser = build_parser()
    ns = parser.parse_args(argv)
    options = dict(vars(ns))
    command = options.pop("command")
    if "subcommand" in options:
        command = f"{command} {options.pop('subcommand')}"
    output = options.pop("output")
    cache_dir = options.pop("cache_dir") or os.environ.get(CACHE_ENV)
    jobs = options.pop("jobs")
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return RunPlan(command, options, output, cache_dir, jobs)


# -- command implementations -------------------------------------------------------


def _cmd_analyze_curve(plan: RunPlan, sink: _Sink, cache: ConductorCache) -> int:
    opts = plan.options
    E = curve_from_pair(opts["a"], opts["b"])
    t0 = time.perf_counter()
    N = cache.conductor(E.model)
    sink.emit(
        "conductor",
        {"a": E.a, "b": E.b},
        {"conductor": N},
        t0,
    )
    for p in _parse_primes(opts["primes"]):
        t0 = time.perf_counter()
        rep = classify_reduction(E, p)
        sink.emit(
            "reduction-report",
            {"a": E.a, "b": E.b, "p": p},
            {
                "kodaira": rep.kodaira_type,
                "v_delta_min": rep.v_delta_min,
                "conductor_exponent": rep.conductor_exponent,
                "actual_type": rep.actual_type,
                "potential_type": rep.potential_type,
            },
            t0,
        )
    return 0


def _cmd_scholten_build(plan: RunPlan, sink: _Sink, cache) -> int:
    quad = _parse_quad(plan.options["params"])
    t0 = time.perf_counter()
    C = build_scholten(*quad)
    out = {"status": C.status}
    if C.is_smooth:
        out.update(lam=C.lam, sextic=list(C.curve.coeffs))
        orbit = torsion_orbit_report(C.params[0], C.params[1])
        out["orbit"] = [list(p) for p in orbit.pairs]
        out["orbit_pattern_mismatches"] = [list(p) for p in orbit.mismatched_patterns]
    sink.emit("scholten-build", {"params": list(quad)}, out, t0)
    return 0 if C.is_smooth else 1


def _cmd_scholten_family(plan: RunPlan, sink: _Sink, cache) -> int:
    quad = _parse_quad(plan.options["params"])
    t0 = time.perf_counter()
    rep = scholten_family(*quad)
    sink.emit(
        "scholten-family",
        {"params": list(quad)},
        {
            "members": [list(m.params) for m in rep.members],
            "degenerate": [list(m.params) for m in rep.degenerate],
            "classes": [list(c) for c in rep.classes],
            "class_count": rep.class_count,
            "note": "geometric classes; twists are not separated",
        },
        t0,
    )
    return 0


def _cmd_scholten_verify(plan: RunPlan, sink: _Sink, cache) -> int:
    opts = plan.options
    quad = _parse_quad(opts["params"])
    t0 = time.perf_counter()
    C = build_scholten(*quad)
    if not C.is_smooth:
        sink.emit("split-jacobian", {"params": list(quad)}, {"status": C.status}, t0)
        return 1
    e1 = curve_from_pair(*_parse_pair(opts["e1"])) if opts.get("e1") else None
    e2 = curve_from_pair(*_parse_pair(opts["e2"])) if opts.get("e2") else None
    cert = verify_split_jacobian(C, _parse_primes(opts["primes"]), e1=e1, e2=e2)
    inputs = {"params": list(quad), "primes": opts["primes"]}
    if opts.get("e1"):
        inputs["e1"] = opts["e1"]
    if opts.get("e2"):
        inputs["e2"] = opts["e2"]
    sink.emit("split-jacobian", inputs, cert.to_record(), t0)
    return 0 if cert.verdict else 1


def _search_predicates(specs: Sequence[str]):
    preds = []
    for spec in specs:
        name, _, arg = spec.partition(":")
        if name == "split-jacobian":
            bound = int(arg) if arg else 50

            def split_ok(C, bound=bound):
                usable = good_primes_for(C, bound)
                if len(usable) < 5:
                    return False
                return verify_split_jacobian(C, usable).verdict

            preds.append((spec, split_ok))
        elif name == "max-one-supersingular":
            if not arg:
                raise UsageError("max-one-supersingular needs :P")
            p = int(arg)

            def ss_ok(C, p=p):
                return main1_check([C.e1, C.e2], p).met

            preds.append((spec, ss_ok))
        else:
            raise UsageError(f"unknown predicate {name!r}")
    return preds


def _cmd_scholten_search(plan: RunPlan, sink: _Sink, cache) -> int:
    opts = plan.options
    if opts.get("csv"):
        grid = quadruples_from_csv(opts["csv"])
    else:
        grid = box_grid(opts["box"])
    preds = _search_predicates(opts["predicate"])
    limit = opts.get("limit") or 0
    t0 = time.perf_counter()
    stream = _search_stream(grid, preds, not opts["no_dedupe"], plan.jobs)
    for rec in stream:
        sink.emit("scholten-search", {"params": rec["params"]}, rec, t0)
        t0 = time.perf_counter()
        if limit and sink.count >= limit:
            break
    return 0


def _search_stream(grid, preds, dedupe, jobs):
    if jobs <= 1:
        for rec in parameter_search(grid, preds, dedupe_by_class=dedupe):
            yield rec.to_record()
        return
    from concurrent.futures import ProcessPoolExecutor

    spec_names = [name for name, _ in preds]
    seen = set()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for out in pool.map(_search_worker, ((quad, spec_names) for quad in grid), chunksize=64):
            if out is None:
                continue
            key, rec = out
            if dedupe:
                if key in seen:
                    continue
                seen.add(key)
            yield rec


def _search_worker(task):
    quad, spec_names = task
    preds = _search_predicates(spec_names)
    for rec in parameter_search([quad], preds, dedupe_by_class=False):
        key = tuple(str(x) for x in rec.igusa_key)
        return key, rec.to_record()
    return None


def _cmd_check_main1(plan: RunPlan, sink: _Sink, cache) -> int:
    opts = plan.options
    curves = [curve_from_pair(*_parse_pair(tok)) for tok in opts["curves"].split(";") if tok]
    t0 = time.perf_counter()
    verdict = main1_check(curves, opts["p"])
    sink.emit("check-main1", verdict.inputs, verdict.to_record(), t0)
    return 0 if verdict.met else 1


def _cmd_check_main2(plan: RunPlan, sink: _Sink, cache) -> int:
    opts = plan.options
    products = []
    for spec in opts["product"]:
        body, _, deg = spec.partition("@")
        if not deg:
            raise UsageError(f"product spec needs @DEG: {spec!r}")
        factors = [curve_from_pair(*_parse_pair(tok)) for tok in body.split("|") if tok]
        products.append((factors, int(deg)))
    t0 = time.perf_counter()
    verdict = main2_check(
        products, opts["p"], unramified=opts["unramified"], all_good=opts["all_good"]
    )
    sink.emit("check-main2", verdict.inputs, verdict.to_record(), t0)
    return 0 if verdict.met else 1


def _cmd_check_global2(plan: RunPlan, sink: _Sink, cache: ConductorCache) -> int:
    opts = plan.options
    E = curve_from_pair(opts["a"], opts["b"])
    t0 = time.perf_counter()
    N = cache.conductor(E.model)
    modulus = 6 * N * opts["deg_phi"]
    primes = [p for p in primes_up_to(opts["bound"]) if modulus % p != 0]
    sink.emit(
        "check-global2",
        {"a": E.a, "b": E.b, "deg_phi": opts["deg_phi"], "bound": opts["bound"]},
        {"conductor": N, "primes": primes},
        t0,
    )
    return 0


def _cmd_scan_supersingular(plan: RunPlan, sink: _Sink, cache) -> int:
    opts = plan.options
    E = curve_from_pair(opts["a"], opts["b"])
    t0 = time.perf_counter()
    scan = supersingular_scan(E, opts["bound"])
    sink.emit(
        "supersingular-scan", {"a": E.a, "b": E.b, "bound": opts["bound"]},
        scan.to_record(), t0,
    )
    return 0


def _cmd_kgroup_prove_skew(plan: RunPlan, sink: _Sink, cache) -> int:
    opts = plan.options
    q = opts["q"]
    E = curve_from_pair(opts["a"], opts["b"])
    G = rational_points_mod_p(E, q)
    conventions = [MINUS, PLUS] if opts["convention"] == "both" else [opts["convention"]]
    code = 0
    for conv in conventions:
        t0 = time.perf_counter()
        tail = tuple(G.points[1] for _ in range(max(0, opts["r"] - 2)))
        rep = prove_skew(G, r=opts["r"], tail=tail, convention=conv)
        outputs = {
            "n_points": rep.n_points,
            "generators": rep.n_columns,
            "pairs_proved": rep.pairs_proved,
            "pairs_failed": [list(map(str, pr)) for pr in rep.pairs_failed],
            "two_torsion_proved": rep.two_torsion_proved,
            "negative_control": {
                "pair": [str(x) for x in (rep.negative_control_pair or ())],
                "certified": rep.negative_control_certified,
            },
            "all_proved": rep.all_proved,
        }
        sink.emit(
            "kgroup-skew",
            {"q": q, "a": E.a, "b": E.b, "r": opts["r"], "convention": conv},
            outputs,
            t0,
        )
        if opts["per_target"]:
            for rec in rep.to_records():
                t1 = time.perf_counter()
                sink.emit("kgroup-skew-target", {"q": q, "convention": conv}, rec, t1)
        if not (rep.all_proved and rep.negative_control_certified):
            code = 1
    return code


def _cmd_filtration(plan: RunPlan, sink: _Sink, cache) -> int:
    opts = plan.options
    if opts.get("group"):
        G = FinAbGroup.from_invariant_factors([int(t) for t in opts["group"].split(",")])
        inputs = {"group": opts["group"], "rmax": opts["rmax"]}
    else:
        p = opts["elliptic_p"]
        E = curve_from_pair(opts["a"], opts["b"])
        G = FinAbGroup.from_elliptic(rational_points_mod_p(E, p))
        inputs = {"elliptic_p": p, "a": opts["a"], "b": opts["b"], "rmax": opts["rmax"]}
    t0 = time.perf_counter()
    rep = aug_filtration(G, opts["rmax"])
    sink.emit("filtration", inputs, rep.to_record(), t0)
    return 0 if rep.exactness_ok else 1


_COMMANDS: dict[str, Callable] = {
    "analyze-curve": _cmd_analyze_curve,
    "scholten build": _cmd_scholten_build,
    "scholten family": _cmd_scholten_family,
    "scholten verify": _cmd_scholten_verify,
    "scholten search": _cmd_scholten_search,
    "check main1": _cmd_check_main1,
    "check main2": _cmd_check_main2,
    "check global2": _cmd_check_global2,
    "scan supersingular": _cmd_scan_supersingular,
    "kgroup prove-skew": _cmd_kgroup_prove_skew,
    "filtration": _cmd_filtration,
}


def execute_plan(plan: RunPlan) -> int:
    cache = ConductorCache(plan.cache_dir)
    handler = _COMMANDS[plan.command]
    if plan.output:
        with open(plan.output, "w") as fh:
            return handler(plan, _Sink(fh), cache)
    return handler(plan, _Sink(sys.stdout), cache)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        plan = plan_from_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    try:
        return execute_plan(plan)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (DegenerateCurveError, InsufficientPrimesError, BudgetExceededError, ValueError) as e:
        print(f"analysis error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
