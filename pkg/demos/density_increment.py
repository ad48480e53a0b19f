"""Density increment traces, including the fixed point that stops planted cliques."""

from spectral_surplus.graph import Graph, family
from spectral_surplus.increment import increment_loop

k, extra = 20, 200
clique = Graph.from_edges(k + extra, [(i, j) for i in range(k) for j in range(i + 1, k)])

cases = {
    "K20 + 200 isolated": clique,
    "25 x K4": family("union_cliques", sizes=[4] * 25),
    "planted K15, no noise": family("planted_clique", n=200, k=15, p=0.0, seed=1),
    "planted K15, noise 0.02": family("planted_clique", n=200, k=15, p=0.02, seed=1),
}
for name, g in cases.items():
    tr = increment_loop(g, target=0.3)
    print(f"{name}: {tr.reason}, final density {tr.final_density:.3f} on {len(tr.final_vertices)} vertices")
    for r in tr.rows():
        print(f"  step {r['step']}: n={r['n_i']} p={r['p_i']:.4f} {r['case']} |R|={r['R']} p^3n={r['potential']:.3g}")
