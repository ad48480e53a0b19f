"""One line per acceptance criterion, checked at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -v``; each test prints
``ACCEPTANCE <k> PASS|FAIL: <detail>`` before asserting.
"""

import time

import pytest

from spectral_surplus.cli import main
from spectral_surplus.config import resolve_params
from spectral_surplus.corpus import SUITES, run_corpus
from spectral_surplus.graph import cluster_edit, family
from spectral_surplus.spectral import decompose, embedding_vectors
from spectral_surplus.structure import classify_pairs, find_eigen_witness, partition_by_embedding
from spectral_surplus.surplus import dual_upper, maxcut_exact, sdp_lower


@pytest.fixture(scope="module")
def corpus():
    params = resolve_params("desk", {})
    rows, secs = {}, {}
    for suite in SUITES:
        t0 = time.perf_counter()
        rows[suite], _ = run_corpus(suite, 7, params)
        secs[suite] = time.perf_counter() - t0
    return rows, secs


def pick(rows, check):
    return [r for r in rows if r["check"] == check]


def report(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {k:>2} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_01_spectral_identities(corpus, capsys):
    rows, secs = corpus
    r = rows["identities"]
    tr = pick(r, "trace")
    fro = pick(r, "frobenius")
    circ = pick(r, "circulant-dft")
    graphs = {x["graph"] for x in tr}
    ok = (len(graphs) == 300 and max(x["n"] for x in tr) <= 256
          and all(abs(x["value"]) <= 1e-6 for x in tr)
          and all(abs(x["value"]) <= 1e-6 * x["n"] for x in fro)
          and len(circ) > 0 and all(x["value"] <= 1e-8 for x in circ)
          and secs["identities"] < 120)
    worst_tr = max(abs(x["value"]) for x in tr)
    worst_c = max(x["value"] for x in circ)
    report(capsys, 1, ok, f"{len(graphs)} graphs, max|trace|={worst_tr:.1e}, {len(circ)} circulants "
           f"max DFT err={worst_c:.1e}, {secs['identities']:.1f}s")


def test_criterion_02_hadamard_identity(corpus, capsys):
    rows, _ = corpus
    r = pick(rows["probe"], "hadamard-unclipped") + pick(rows["probe"], "hadamard-clipped")
    fails = sum(x["failures"] for x in r)
    worst = max(x["worst_rel"] for x in r)
    ok = len(r) == 600 and all(x["probes"] == 100 for x in r) and fails == 0 and worst <= 1e-6
    report(capsys, 2, ok, f"{len(r)} graph/mode pairs x 100 probes, failures={fails}, worst rel={worst:.1e}")


def test_criterion_03_key_recursion(corpus, capsys):
    rows, _ = corpus
    r = pick(rows["recursion"], "key-recursion")
    bad = [x["graph"] for x in r if x["status"] != "pass"]
    points = sum(x["points"] for x in r)
    ok = len(r) == 300 and not bad
    report(capsys, 3, ok, f"{points} grid points on {len(r)} graphs, failing graphs={len(bad)}")


def test_criterion_04_surplus_recursion(corpus, capsys):
    rows, _ = corpus
    r = pick(rows["recursion"], "surplus-recursion")
    gated = [x for x in r if x["status"] != "not-applicable"]
    bad = [x["graph"] for x in gated if x["status"] != "pass"]
    ok = len(gated) > 0 and not bad
    report(capsys, 4, ok, f"{len(gated)} graphs pass the gate, failures={len(bad)}")


def test_criterion_05_certificate_sandwich(corpus, capsys):
    rows, _ = corpus
    sp = pick(rows["surplus"], "sp-sandwich")
    star = pick(rows["surplus"], "spstar-sandwich")
    ok_sp = all(x["floor"] <= x["sp"] + 1e-9 and x["sp"] <= x["upper"] + 1e-9 for x in sp)
    ok_star = all(x["energy"] <= x["sdp"] + 1e-6 and x["sdp"] <= x["dual"] + 1e-6 for x in star)
    spots = {name: float(maxcut_exact(family(name, **kw)).surplus)
             for name, kw in (("complete", {"n": 4}), ("cycle", {"n": 5}), ("petersen", {}))}
    k4 = decompose(family("complete", n=4))
    lo, up = sdp_lower(family("complete", n=4), spectrum=k4).value, dual_upper(k4).value
    ok_spot = (spots == {"complete": 1.0, "cycle": 1.5, "petersen": 4.5}
               and 1.5 - 1e-6 <= lo and up <= 2 + 1e-6)
    ok = len(sp) > 0 and len(sp) == len(star) and ok_sp and ok_star and ok_spot
    report(capsys, 5, ok, f"{len(sp)} graphs n<=20, sp sandwich={ok_sp}, sp* sandwich={ok_star}, "
           f"sp(K4,C5,Petersen)={spots['complete']},{spots['cycle']},{spots['petersen']}, "
           f"sp*(K4) in [{lo:.6f}, {up:.6f}]")


def test_criterion_06_cubic_certificate(corpus, capsys):
    rows, _ = corpus
    r = pick(rows["surplus"], "cubic")
    bad = [x["graph"] for x in r if not x["lhs"] <= x["rhs"] + 1e-6]
    ok = len(r) == 300 and not bad
    report(capsys, 6, ok, f"(-lambda_n)^3 <= 2n sdp_lower on {len(r)} graphs, failures={len(bad)}")


def test_criterion_07_flatness(corpus, capsys):
    rows, _ = corpus
    r = pick(rows["identities"], "flatness")
    bad = [x["graph"] for x in r if x["status"] != "pass"]
    ok = len(r) == 300 and not bad
    report(capsys, 7, ok, f"{len(r)} graphs, min slack={min(x['value'] for x in r):.2e}, failures={len(bad)}")


def test_criterion_08_truncation(corpus, capsys):
    rows, secs = corpus
    r = pick(rows["probe"], "truncation")
    bad = [x["graph"] for x in r if x["status"] != "pass"]
    ok = len(r) == 20 and not bad and secs["probe"] < 300
    report(capsys, 8, ok, f"{len(r)} designated graphs at 4 SE, 10^4 samples, failures={len(bad)}, "
           f"probe suite {secs['probe']:.1f}s")


def test_criterion_09_structure_dichotomy(corpus, capsys):
    rows, _ = corpus
    r = pick(rows["structure"], "dichotomy")
    gated = [x for x in r if x["status"] != "not-applicable"]
    bad = [x["graph"] for x in gated if x["status"] != "pass"]
    blow = {}
    for m in range(5, 21):
        g = family("cherry_blowup", k=m)
        s = decompose(g)
        parts = partition_by_embedding(embedding_vectors(s, 0.2), 0.05)
        w = find_eigen_witness(g, parts, classify_pairs(g, parts, 0.05), s.lambda_min)
        blow[m] = w is not None and w.rayleigh <= -(m + 3) / 3 + 1e-8
    ok = len(gated) > 0 and not bad and all(blow.values())
    report(capsys, 9, ok, f"{len(gated)} gated graphs, dichotomy failures={len(bad)}, "
           f"blow-up witnesses m=5..20: {sum(blow.values())}/16")


def test_criterion_10_cluster_edit(corpus, capsys):
    rows, _ = corpus
    r = pick(rows["structure"], "cluster-edit")
    pivot_ok = all(x["pivot"] >= x["exact"] for x in r)
    unions = all(cluster_edit(family("union_cliques", sizes=sz), "exact").edit_count == 0
                 for sz in ([1], [2, 3], [3, 4, 5], [1, 1, 6]))
    p3 = cluster_edit(family("path", n=3), "exact").edit_count
    c5 = cluster_edit(family("cycle", n=5), "exact").edit_count
    ok = len(r) > 0 and pivot_ok and unions and p3 == 1 and c5 == 2
    report(capsys, 10, ok, f"pivot>=exact on {len(r)} graphs n<=12: {pivot_ok}, unions->0: {unions}, "
           f"P3->{p3} (want 1), C5->{c5} (want 2)")


def test_criterion_11_increment(corpus, capsys):
    rows, _ = corpus
    r = rows["increment"]
    ident = pick(r, "neighborhood-identity")
    pot = pick(r, "potential")
    planted = pick(r, "planted-clique")
    ident_ok = len(ident) == 300 and all(x["sum"] == x["six_t"] for x in ident)
    pot_ok = all(x["violations"] == 0 for x in pot + planted)
    rate = sum(x["reached"] for x in planted) / max(len(planted), 1)
    ok = ident_ok and pot_ok and len(planted) == 100 and rate >= 0.95
    report(capsys, 11, ok, f"identity exact on {len(ident)} graphs: {ident_ok}, potential monotone: {pot_ok}, "
           f"planted-clique reach rate {rate:.2f} (want >= 0.95)")


def test_criterion_12_determinism(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        main(["corpus", "--suite", "all", "--seed", "7", "--out", str(path)])
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    report(capsys, 12, ok, f"two corpus runs, {len(outs[0])} bytes each, identical={outs[0] == outs[1]}")
