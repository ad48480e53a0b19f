"""Command-line front end: ``spectral-surplus <command> [options]``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
errors (bad flags, unreadable input, invalid parameters).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .config import PRESETS, resolve_params
from .corpus import SUITES, run_corpus
from .graph import FAMILIES, GraphError, GraphFamilySpec, format_edge_list, generate, read_edge_list
from .increment import increment_loop
from .probe import Subspace, clip, hadamard_identity_check, sample_gaussian, truncation_effect_estimate
from .recursion import check_top_concentration, verify_key_recursion, verify_surplus_recursion
from .spectral import ThresholdProfile, decompose, energy, flatness_check
from .structure import structure_verdict
from .surplus import (EXACT_MAXCUT_CAP, cubic_certificate, degeneracy_floor, dual_upper, edwards_floor,
                      energy_certificate, maxcut_exact, mixing_upper, sdp_lower)

TOOL = "spectral-surplus"
COMMANDS = ("gen", "spectrum", "recursion", "probe", "surplus", "structure", "increment", "corpus")


class UsageError(Exception):
    pass


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return x


def render(report: dict, fmt: str) -> str:
    report = _clean(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    rows = report["rows"]
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def _parse_overrides(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _int_tuple(text):
    if text is None:
        return ()
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _load_graph(args):
    if args.input and args.family:
        raise UsageError("give either --in or --family, not both")
    if args.input:
        try:
            return read_edge_list(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from None
        except GraphError as exc:
            raise UsageError(f"{args.input}: {exc}") from None
    if args.family:
        spec = GraphFamilySpec(args.family, n=args.n, r=args.r, sizes=_int_tuple(args.sizes), a=args.a, b=args.b,
                               p=args.p, seed=args.seed, connections=_int_tuple(args.connections), q=args.q,
                               k=args.k)
        try:
            return generate(spec)
        except GraphError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError("an input graph is required (--in FILE or --family NAME)")


def _status_rows_ok(rows) -> bool:
    return all(r.get("status") != "fail" for r in rows)


# --------------------------------------------------------------------------
# commands: each returns (rows, summary)
# --------------------------------------------------------------------------

def cmd_spectrum(g, params, args):
    s = decompose(g)
    rows = [{"index": i, "lambda": float(lam), "status": "pass"} for i, lam in enumerate(s.lambdas)]
    if args.vectors:
        for i, r in enumerate(rows):
            r["vector"] = s.vectors[:, i]
    fl = flatness_check(s)
    summary = {"n": g.n, "m": g.m, "energy": energy(s), "residual": s.residual, "lambda_min": s.lambda_min,
               "lambda_max": s.lambda_max, "flatness": fl.passed}
    if not fl.passed:
        rows.append({"check": "flatness", "status": "fail", "flagged": fl.flagged})
    return rows, summary


def cmd_recursion(g, params, args):
    s = decompose(g)
    prof = ThresholdProfile(s)
    key = verify_key_recursion(prof)
    rows = [dict(r, check="key-recursion", status="pass" if r["pass"] else "fail") for r in key.rows]
    sur = verify_surplus_recursion(prof, dual_upper(s).value, c=params["c"])
    if sur.rows:
        rows += [dict(r, check="surplus-recursion", status="pass" if r["pass"] else "fail") for r in sur.rows]
    else:
        rows.append({"check": "surplus-recursion", "status": sur.status.value, "note": sur.note})
    top = check_top_concentration(s, params["top_eps"], params["top_delta"])
    rows.append({"check": "top-concentration", "status": "info", "verdict": top.status.value,
                 "mass": top.mass, "bound": top.bound, "threshold": top.threshold})
    return rows, {"key_worst_ratio": key.worst_ratio, "surplus_status": sur.status.value,
                  "surplus_worst_ratio": sur.worst_ratio}


def cmd_probe(g, params, args):
    s = decompose(g)
    W = Subspace(np.eye(g.n), "R^n")
    rows = []
    for i in range(params["probes"]):
        q = sample_gaussian(W, args.seed, i)
        for tag, vec in (("unclipped", q), ("clipped", clip(q, params["probe_beta"]))):
            chk = hadamard_identity_check(s, vec)
            rows.append({"check": f"hadamard-{tag}", "index": i, "lhs": chk.lhs, "rhs": chk.rhs,
                         "status": "pass" if chk.passed else "fail"})
    T = args.T if args.T is not None else s.lambda_max / 2
    summary = {"probes": params["probes"]}
    if T > 0:
        rep = truncation_effect_estimate(s, T, samples=params["samples"], seed=args.seed)
        rows += [dict(r, check="truncation", status="pass" if r["pass"] else "fail") for r in rep.rows]
        summary.update({"T": T, "beta": rep.beta, "dim": rep.dim, "truncation": rep.passed})
    return rows, summary


def cmd_surplus(g, params, args):
    s = decompose(g)
    certs = [energy_certificate(s), cubic_certificate(s), dual_upper(s), mixing_upper(g, s), edwards_floor(g),
             degeneracy_floor(g), sdp_lower(g, iters=params["sdp_iters"], spectrum=s)]
    summary = {"n": g.n, "m": g.m}
    if args.exact:
        if g.n > EXACT_MAXCUT_CAP:
            raise UsageError(f"--exact is capped at n <= {EXACT_MAXCUT_CAP}")
        cut = maxcut_exact(g)
        summary.update({"mc": cut.cut_edges, "sp": float(cut.surplus), "sp_fraction": str(cut.surplus),
                        "side": [int(x) for x in cut.side]})
    rows = []
    for c in certs:
        row = dict(c.to_dict(), status="pass")
        rows.append(row)
    lo_sp = max(c.value for c in certs if c.target == "sp" and c.direction == "lower")
    up_sp = min(c.value for c in certs if c.target == "sp" and c.direction == "upper")
    lo_star = max(c.value for c in certs if c.target == "spStar" and c.direction == "lower")
    up_star = min(c.value for c in certs if c.target == "spStar" and c.direction == "upper")
    ok = lo_star <= up_star + 1e-6 and lo_sp <= up_sp + 1e-9
    if args.exact:
        ok = ok and lo_sp <= summary["sp"] + 1e-9 <= up_sp + 2e-9
    rows.append({"check": "sandwich", "status": "pass" if ok else "fail", "sp_lower": lo_sp, "sp_upper": up_sp,
                 "spstar_lower": lo_star, "spstar_upper": up_star})
    return rows, summary


def cmd_structure(g, params, args):
    s = decompose(g)
    v = structure_verdict(g, s, params["eps"], params["gamma"], params["delta"], eta=params["eta"],
                          mu=params["mu"], seed=args.seed)
    d = v.to_dict()
    rows = [{"check": "verdict", "outcome": v.outcome, "status": "pass"}]
    if v.census is not None:
        rows.append({"check": "claim3", "status": v.census.status if v.census.status != "hypothesis-violated"
                     else "not-applicable", "total": v.census.total, "bound": v.census.bound})
    return rows, d


def cmd_increment(g, params, args):
    tr = increment_loop(g, params["target"], params["kappa"], int(params["step_cap"]))
    rows = [dict(r, status="pass") for r in tr.rows()]
    bad = tr.monotone_violations()
    for i in bad:
        rows[i]["status"] = "fail"
    return rows, {"reason": tr.reason, "final_density": tr.final_density,
                  "final_vertices": [int(v) for v in tr.final_vertices], "regime_cap": tr.regime_cap}


def cmd_corpus(params, args):
    suite = args.suite or "all"
    if suite != "all" and suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}")
    rows, summary = run_corpus(suite, args.seed, params, workers=max(1, args.workers))
    return rows, summary


COMMAND_FUNCS = {
    "spectrum": cmd_spectrum,
    "recursion": cmd_recursion,
    "probe": cmd_probe,
    "surplus": cmd_surplus,
    "structure": cmd_structure,
    "increment": cmd_increment,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog=TOOL, description="Spectral surplus toolkit.")
    ap.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="input", help="edge-list file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--n", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--a", type=int)
        p.add_argument("--b", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--sizes", help="comma-separated clique sizes")
        p.add_argument("--connections", help="comma-separated circulant offsets")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--preset", choices=sorted(PRESETS), default="desk")
        p.add_argument("--suite", choices=SUITES + ("all",))
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--param", action="append", metavar="KEY=VALUE")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "surplus":
            p.add_argument("--exact", action="store_true", help="also solve max-cut exactly")
        if name == "spectrum":
            p.add_argument("--vectors", action="store_true")
        if name == "probe":
            p.add_argument("--T", type=float, help="truncation threshold (default lambda_1/2)")
    return ap


def _write(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        overrides = _parse_overrides(args.param)
        params = resolve_params(args.preset, overrides)
        if args.command == "gen":
            g = _load_graph(args)
            _write(format_edge_list(g), args.out)
            return 0
        if args.command == "corpus":
            rows, summary = cmd_corpus(params, args)
        else:
            g = _load_graph(args)
            rows, summary = COMMAND_FUNCS[args.command](g, params, args)
    except (UsageError, ValueError) as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"{TOOL}: assertion failed: {exc}", file=sys.stderr)
        return 1
    params_out = {k: v for k, v in params.items() if not k.startswith("_")}
    params_out["seed"] = args.seed
    if args.command == "corpus":
        summary = dict(summary, suite=args.suite or "all")
    report = {"tool": TOOL, "version": __version__, "preset": args.preset, "command": args.command,
              "params": params_out, "rows": rows, "summary": summary}
    _write(render(report, args.format), args.out)
    return 0 if _status_rows_ok(rows) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
