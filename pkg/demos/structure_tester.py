"""The partitioning tester on a cherry blow-up and on a union of cliques."""

from spectral_surplus.graph import family
from spectral_surplus.spectral import decompose
from spectral_surplus.structure import structure_verdict

for name, g in (("blow-up m=10", family("cherry_blowup", k=10)),
                ("cliques 3,4,5", family("union_cliques", sizes=[3, 4, 5])),
                ("K_10,10", family("complete_bipartite", a=10, b=10))):
    s = decompose(g)
    v = structure_verdict(g, s, eps=0.1, gamma=0.2, delta=0.5, mu=0.05)
    print(f"{name}: {v.outcome} (tail mass {v.details['tail_mass']:.1f}, lambda_n {s.lambda_min:.3f})")
    if v.witness is not None:
        w = v.witness
        print(f"  parts {w.triple}, Rayleigh {w.rayleigh:.4f} <= {w.claim_bound:.2f}")
    if v.edit_certificate is not None:
        print(f"  cluster edits: {v.edit_certificate.edit_count}")
