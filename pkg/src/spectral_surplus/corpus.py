"""Deterministic graph corpus and the per-suite checks run over it."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import (EXACT_CLUSTER_CAP, Graph, GraphFamilySpec, cluster_edit, generate,
                    neighborhood_edge_counts, triangle_count)
from .increment import increment_loop
from .probe import Subspace, clip, hadamard_identity_check, sample_gaussian, truncation_effect_estimate
from .recursion import check_top_concentration, verify_key_recursion, verify_surplus_recursion
from .spectral import ThresholdProfile, decompose, flatness_check, triangle_count_spectral
from .structure import structure_verdict
from .surplus import (degeneracy_floor, dual_upper, edwards_floor, energy_certificate,
                      maxcut_exact, mixing_upper, sdp_lower)

SUITES = ("identities", "recursion", "probe", "surplus", "structure", "increment")
CORPUS_SIZE = 300


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: Graph
    spec: GraphFamilySpec | None = None

    @property
    def n(self) -> int:
        return self.graph.n


def _spec_name(spec: GraphFamilySpec) -> str:
    parts = []
    for key in ("n", "r", "sizes", "a", "b", "p", "q", "k", "connections"):
        v = getattr(spec, key)
        if v is None or v == ():
            continue
        if key == "sizes" and len(set(v)) == 1 and len(v) > 3:
            v = f"{v[0]}x{len(v)}"
        parts.append(f"{key}={v}")
    if spec.family in ("erdos_renyi", "planted_clique"):
        parts.append(f"seed={spec.seed}")
    return f"{spec.family}({','.join(str(p) for p in parts)})".replace(" ", "")


def _sparse_fixture(name: str, n: int, edges) -> CorpusEntry:
    return CorpusEntry(f"{name}+isolated(n={n})", Graph.from_edges(n, edges))


def fixed_specs() -> list[GraphFamilySpec]:
    S = GraphFamilySpec
    specs = [S("complete", n=n) for n in (2, 3, 4, 5, 8, 12, 16, 32, 64, 128)]
    specs += [S("cycle", n=n) for n in (3, 4, 5, 6, 7, 8, 10, 12, 16, 20, 31, 64, 100, 256)]
    specs += [S("path", n=n) for n in (2, 3, 4, 5, 8, 12, 20, 40)]
    specs += [S("star", n=n) for n in (3, 4, 6, 10, 20, 50)]
    specs += [S("petersen")]
    specs += [S("paley", q=q) for q in (5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101, 109, 113, 197, 229)]
    specs += [S("turan", n=n, r=r) for n, r in ((6, 2), (6, 3), (9, 3), (10, 2), (12, 4), (15, 5), (20, 2),
                                                (20, 4), (40, 3), (64, 8), (100, 5), (128, 2))]
    specs += [S("complete_bipartite", a=a, b=b) for a, b in ((1, 1), (2, 3), (3, 3), (4, 6), (5, 5), (8, 8),
                                                              (10, 10), (16, 4), (32, 32))]
    for sizes in ((4, 4), (3, 3, 3), (2, 2, 2, 2), (5, 3, 2, 1), (8, 8), (8,) * 8, (4,) * 25,
                  (6, 5, 4, 3, 2, 1), (10, 10, 10), (16,) * 4, (3,) * 4):
        specs.append(S("union_cliques", sizes=sizes))
    specs += [S("complete_minus_clique", n=n, k=k) for n, k in ((6, 3), (10, 5), (12, 4), (20, 10),
                                                                 (40, 20), (64, 16))]
    for n, conn in ((8, (1, 2, 6, 7)), (9, (1, 8)), (10, (1, 3, 7, 9)), (12, (2, 3, 9, 10)), (13, (1, 5, 8, 12)),
                    (16, (1, 4, 12, 15)), (20, (1, 2, 5, 15, 18, 19)), (30, (1, 5, 25, 29)), (64, (1, 8, 56, 63)),
                    (101, (1, 10, 91, 100)), (128, (3, 17, 111, 125)), (200, (1, 2, 198, 199))):
        specs.append(S("circulant", n=n, connections=conn))
    specs += [S("cherry_blowup", k=m) for m in range(5, 21)]
    return specs


def sparse_fixtures() -> list[CorpusEntry]:
    """Very sparse graphs padded with isolated vertices; these open the structure gate."""
    out = []
    for n in (64, 48):
        out += [_sparse_fixture("edge", n, [(0, 1)]),
                _sparse_fixture("P3", n, [(0, 1), (1, 2)]),
                _sparse_fixture("2K2", n, [(0, 1), (2, 3)])]
    out += [_sparse_fixture("P4", 64, [(0, 1), (1, 2), (2, 3)]),
            _sparse_fixture("K3", 64, [(0, 1), (1, 2), (0, 2)]),
            _sparse_fixture("K13", 64, [(0, 1), (0, 2), (0, 3)]),
            _sparse_fixture("P3+K2", 64, [(0, 1), (1, 2), (3, 4)]),
            _sparse_fixture("C4", 64, [(0, 1), (1, 2), (2, 3), (3, 0)])]
    return out


def random_specs(seed: int, count: int) -> list[GraphFamilySpec]:
    rng = np.random.default_rng([seed, 1])
    S = GraphFamilySpec
    specs = []
    for n in (6, 8, 10, 12, 14, 16, 18, 20):
        for p in (0.2, 0.5, 0.8):
            specs += [S("erdos_renyi", n=n, p=p, seed=int(rng.integers(2**31))) for _ in range(2)]
    for n in (24, 32, 48, 64, 96, 128, 192, 256):
        for p in (0.05, 0.2, 0.5):
            specs += [S("erdos_renyi", n=n, p=p, seed=int(rng.integers(2**31))) for _ in range(2)]
    for n in (32, 64, 128, 200):
        for k in (8, 16):
            specs.append(S("planted_clique", n=n, k=k, p=0.1, seed=int(rng.integers(2**31))))
    while len(specs) < count:
        n = int(rng.integers(5, 41))
        p = round(float(rng.uniform(0.05, 0.95)), 3)
        specs.append(S("erdos_renyi", n=n, p=p, seed=int(rng.integers(2**31))))
    return specs[:count]


def build_corpus(seed: int = 7, size: int = CORPUS_SIZE) -> list[CorpusEntry]:
    """Fixed families, sparse fixtures, then seeded random graphs up to ``size``."""
    entries = [CorpusEntry(_spec_name(s), generate(s), s) for s in fixed_specs()]
    entries += sparse_fixtures()
    for s in random_specs(seed, max(size - len(entries), 0)):
        entries.append(CorpusEntry(_spec_name(s), generate(s), s))
    return entries[:size]


def circulant_connections(spec: GraphFamilySpec | None) -> tuple[int, tuple] | None:
    """(n, connection set) when the family is a circulant, else None."""
    if spec is None:
        return None
    f = spec.family
    if f == "complete":
        return spec.n, tuple(range(1, spec.n))
    if f == "cycle":
        return spec.n, (1, spec.n - 1)
    if f == "circulant":
        return spec.n, tuple(sorted({c % spec.n for c in spec.connections}))
    if f == "paley":
        q = spec.q
        return q, tuple(sorted({x * x % q for x in range(1, q)}))
    return None


def dft_circulant_spectrum(n: int, conn) -> np.ndarray:
    """Eigenvalues sum_c cos(2 pi k c / n), k = 0..n-1, sorted descending."""
    k = np.arange(n)[:, None]
    c = np.asarray(conn, dtype=float)[None, :]
    return np.sort(np.cos(2 * np.pi * k * c / n).sum(axis=1))[::-1]


def planted_clique_instances(seed: int = 7, count: int = 100, n: int = 200, noise: float = 0.02):
    """Seeded K_k plus Erdos-Renyi noise, k cycling through 10..20."""
    rng = np.random.default_rng([seed, 2])
    out = []
    for i in range(count):
        spec = GraphFamilySpec("planted_clique", n=n, k=10 + i % 11, p=noise, seed=int(rng.integers(2**31)))
        out.append(CorpusEntry(_spec_name(spec), generate(spec), spec))
    return out


# --------------------------------------------------------------------------
# suites: each takes (entry, params) and returns rows
# --------------------------------------------------------------------------

def _row(suite, entry, check, ok, **values) -> dict:
    if isinstance(ok, str):
        status = ok
    else:
        status = "pass" if ok else "fail"
    return {"suite": suite, "graph": entry.name, "n": entry.n, "check": check, "status": status, **values}


def suite_identities(entry: CorpusEntry, params: dict) -> list[dict]:
    g = entry.graph
    s = decompose(g)
    n = g.n
    rows = []
    tr = float(s.lambdas.sum())
    rows.append(_row("identities", entry, "trace", abs(tr) <= 1e-6, value=tr))
    fro = float(np.sum(s.lambdas**2)) - 2 * g.m
    rows.append(_row("identities", entry, "frobenius", abs(fro) <= 1e-6 * n, value=fro))
    circ = circulant_connections(entry.spec)
    if circ is not None:
        err = float(np.max(np.abs(dft_circulant_spectrum(*circ) - s.lambdas)))
        rows.append(_row("identities", entry, "circulant-dft", err <= 1e-8, value=err))
    t = triangle_count(g)
    t_spec = triangle_count_spectral(s)
    rows.append(_row("identities", entry, "triangles", abs(t - t_spec) <= 1e-6 * max(1, n**2), value=t))
    fl = flatness_check(s, tol=1e-8)
    rows.append(_row("identities", entry, "flatness", fl.passed, value=fl.min_slack))
    nb = int(neighborhood_edge_counts(g).sum())
    rows.append(_row("identities", entry, "neighborhood-triangles", 2 * nb == 6 * t, value=2 * nb))
    return rows


def suite_recursion(entry: CorpusEntry, params: dict) -> list[dict]:
    s = decompose(entry.graph)
    prof = ThresholdProfile(s)
    rows = []
    key = verify_key_recursion(prof)
    rows.append(_row("recursion", entry, "key-recursion", key.passed, worst_ratio=key.worst_ratio,
                     points=len(key.rows)))
    up = dual_upper(s).value
    sur = verify_surplus_recursion(prof, up, c=params["c"])
    rows.append(_row("recursion", entry, "surplus-recursion", sur.status.value, worst_ratio=sur.worst_ratio))
    top = check_top_concentration(s, params["top_eps"], params["top_delta"])
    # the bound is only claimed for n large, so it is reported rather than asserted
    rows.append(_row("recursion", entry, "top-concentration", "info", verdict=top.status.value,
                     mass=top.mass, bound=top.bound))
    return rows


def _identity_probe_rows(entry, s, params) -> list[dict]:
    n = s.n
    W = Subspace(np.eye(n), "R^n")
    beta = params["probe_beta"]
    fails = {"unclipped": 0, "clipped": 0}
    worst = {"unclipped": 0.0, "clipped": 0.0}
    for i in range(params["probes"]):
        q = sample_gaussian(W, params["seed"], i)
        for tag, vec in (("unclipped", q), ("clipped", clip(q, beta))):
            chk = hadamard_identity_check(s, vec, tol=1e-6)
            rel = abs(chk.lhs - chk.rhs) / (1 + abs(chk.lhs))
            worst[tag] = max(worst[tag], rel)
            fails[tag] += not chk.passed
    return [_row("probe", entry, f"hadamard-{tag}", fails[tag] == 0, failures=fails[tag],
                 worst_rel=worst[tag], probes=params["probes"]) for tag in ("unclipped", "clipped")]


def designated_truncation(entries: list[CorpusEntry], count: int = 20) -> list[str]:
    """Names of the graphs used for the truncation Monte Carlo."""
    pool = [e for e in entries if 10 <= e.n <= 128 and e.graph.m > 0]
    stride = max(1, len(pool) // count)
    return [e.name for e in pool[::stride][:count]]


def truncation_row(entry: CorpusEntry, params: dict) -> dict:
    s = decompose(entry.graph)
    T = s.lambda_max / 2
    rep = truncation_effect_estimate(s, T, samples=params["samples"], seed=params["seed"])
    worst1 = min((r["mean"] + 4 * r["stderr"] - r["bound"] for r in rep.rows if r["part"] == 1), default=0.0)
    worst2 = min((r["bound"] - (r["mean"] - 4 * r["stderr"]) for r in rep.rows if r["part"] == 2), default=0.0)
    return _row("probe", entry, "truncation", rep.passed, T=T, beta=rep.beta, dim=rep.dim,
                rows=len(rep.rows), margin_part1=worst1, margin_part2=worst2)


def suite_probe(entry: CorpusEntry, params: dict) -> list[dict]:
    s = decompose(entry.graph)
    rows = _identity_probe_rows(entry, s, params)
    if entry.name in params.get("_truncation", ()):
        rows.append(truncation_row(entry, params))
    return rows


def suite_surplus(entry: CorpusEntry, params: dict) -> list[dict]:
    g = entry.graph
    s = decompose(g)
    rows = []
    small = g.n <= params["surplus_n"]
    lo = sdp_lower(g, iters=params["sdp_iters"] if small else params["sdp_iters_large"], spectrum=s)
    lam = max(-s.lambda_min, 0.0)
    rows.append(_row("surplus", entry, "cubic", lam**3 <= 2 * g.n * lo.value + 1e-6,
                     lhs=lam**3, rhs=2 * g.n * lo.value))
    if small:
        sp = float(maxcut_exact(g).surplus)
        floor = max(edwards_floor(g).value, degeneracy_floor(g).value)
        upper = mixing_upper(g, s).value
        rows.append(_row("surplus", entry, "sp-sandwich", floor <= sp + 1e-9 and sp <= upper + 1e-9,
                         floor=floor, sp=sp, upper=upper))
        en = energy_certificate(s).value
        du = dual_upper(s).value
        ok = en <= lo.value + 1e-6 and lo.value <= du + 1e-6
        rows.append(_row("surplus", entry, "spstar-sandwich", ok, energy=en, sdp=lo.value, dual=du))
    return rows


def exhaustive_good_cherries(g: Graph, bad: np.ndarray) -> int:
    """Triple scan: cherries (u; v, w) with all three pairs good."""
    A = g.adj
    count = 0
    for u in range(g.n):
        nb = [v for v in np.flatnonzero(A[u]).tolist() if not bad[u, v]]
        for v, w in itertools.combinations(nb, 2):
            if not A[v, w] and not bad[v, w]:
                count += 1
    return count


def suite_structure(entry: CorpusEntry, params: dict) -> list[dict]:
    g = entry.graph
    rows = []
    if g.n <= EXACT_CLUSTER_CAP:
        ex = cluster_edit(g, "exact").edit_count
        pv = cluster_edit(g, "pivot", seed=params["seed"]).edit_count
        rows.append(_row("structure", entry, "cluster-edit", pv >= ex, exact=ex, pivot=pv))
    if g.n > params["structure_n"]:
        return rows
    s = decompose(g)
    delta = params["delta"]
    gamma = 1.0 / g.n if params["structure_gamma"] == "1/n" else float(params["structure_gamma"])
    if gamma * g.n < 1 or gamma >= 1:
        return rows
    v = structure_verdict(g, s, params["eps"], gamma, delta, eta=params["eta"], seed=params["seed"])
    if v.outcome == "hypothesis-violated":
        rows.append(_row("structure", entry, "dichotomy", "not-applicable", outcome=v.outcome))
        return rows
    good = exhaustive_good_cherries(g, v.census.bad)
    ok = v.outcome == "eigen-witness" or good == 0
    if v.witness is not None:
        w = v.witness
        ok = ok and s.lambda_min - 1e-8 <= w.rayleigh <= w.claim_bound + 1e-9
    rows.append(_row("structure", entry, "dichotomy", ok, outcome=v.outcome, good_cherries=good,
                     census_total=v.census.total, census_bound=v.census.bound,
                     rayleigh=v.witness.rayleigh if v.witness else None))
    rows.append(_row("structure", entry, "claim3", v.census.status == "pass", total=v.census.total,
                     bound=v.census.bound))
    return rows


def suite_increment(entry: CorpusEntry, params: dict) -> list[dict]:
    g = entry.graph
    rows = []
    t = triangle_count(g)
    nb = int(neighborhood_edge_counts(g).sum())
    rows.append(_row("increment", entry, "neighborhood-identity", 2 * nb == 6 * t, sum=2 * nb, six_t=6 * t))
    if g.m == 0:
        return rows
    tr = increment_loop(g, params["target"], params["kappa"], params["step_cap"])
    bad = tr.monotone_violations()
    rows.append(_row("increment", entry, "potential", not bad, reason=tr.reason, steps=len(tr.steps),
                     final_density=tr.final_density, violations=len(bad)))
    return rows


def planted_clique_row(entry: CorpusEntry, params: dict) -> dict:
    tr = increment_loop(entry.graph, params["target"], params["kappa"], params["step_cap"])
    return _row("increment", entry, "planted-clique", "info", reached=tr.reason == "density-target",
                reason=tr.reason, steps=len(tr.steps), final_density=tr.final_density,
                final_n=int(len(tr.final_vertices)), violations=len(tr.monotone_violations()))


SUITE_FUNCS = {
    "identities": suite_identities,
    "recursion": suite_recursion,
    "probe": suite_probe,
    "surplus": suite_surplus,
    "structure": suite_structure,
    "increment": suite_increment,
}


def _run_one(args):
    suite, entry, params = args
    return SUITE_FUNCS[suite](entry, params)


def _run_planted(args):
    entry, params = args
    return [planted_clique_row(entry, params)]


def run_corpus(suite: str, seed: int = 7, params: dict | None = None, workers: int = 1,
               entries: list[CorpusEntry] | None = None) -> tuple[list[dict], dict]:
    """Evaluate one suite (or ``all``) over the corpus; rows are in corpus order."""
    from .config import resolve_params

    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    params = resolve_params("desk", params or {})
    params["seed"] = seed
    if entries is None:
        entries = build_corpus(seed)
    params["_truncation"] = tuple(designated_truncation(entries))
    suites = SUITES if suite == "all" else (suite,)
    jobs = [(name, e, params) for name in suites for e in entries]
    extra = []
    if "increment" in suites:
        extra = [(e, params) for e in planted_clique_instances(seed, params["planted_count"])]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_one, jobs, chunksize=4))
            chunks += list(pool.map(_run_planted, extra, chunksize=4))
    else:
        chunks = [_run_one(j) for j in jobs] + [_run_planted(x) for x in extra]
    rows = [r for chunk in chunks for r in chunk]
    return rows, summarize(rows)


def summarize(rows: list[dict]) -> dict:
    counts = {"pass": 0, "fail": 0, "not-applicable": 0, "info": 0}
    by_check: dict = {}
    for r in rows:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
        key = f'{r["suite"]}/{r["check"]}'
        c = by_check.setdefault(key, {"pass": 0, "fail": 0, "not-applicable": 0, "info": 0})
        c[r["status"]] += 1
    out = {"counts": counts, "checks": by_check, "graphs": len({r["graph"] for r in rows})}
    planted = [r for r in rows if r["check"] == "planted-clique"]
    if planted:
        out["planted_clique_rate"] = sum(r["reached"] for r in planted) / len(planted)
    return out
