"""Threshold sums, the key recursion and the Hadamard identity on random graphs."""

import numpy as np

from spectral_surplus.graph import family
from spectral_surplus.probe import Subspace, clip, hadamard_identity_check, sample_gaussian
from spectral_surplus.recursion import verify_key_recursion
from spectral_surplus.spectral import ThresholdProfile, decompose

# the recursion compares S_T^2 with 2n S_{T^2/4n} above the floor 4(-lambda_n)sqrt(n),
# so only graphs with a mild negative spectrum have a nonempty grid
for name, g in (("cliques 60,40,30", family("union_cliques", sizes=[60, 40, 30])),
                ("ER(80, 0.3)", family("erdos_renyi", n=80, p=0.3, seed=3))):
    s = decompose(g)
    rep = verify_key_recursion(ThresholdProfile(s))
    print(f"{name}: {len(rep.rows)} grid points, worst ratio {rep.worst_ratio:.3f}, passed={rep.passed}")
    for row in rep.rows[::12]:
        print("  ", {k: round(v, 3) if isinstance(v, float) else v for k, v in row.items()})

# both sides of the Hadamard identity for a raw and a clipped probe
W = Subspace(np.eye(g.n), "R^n")
q = sample_gaussian(W, 0, 0)
for tag, vec in (("raw", q), ("clipped", clip(q, 2.0))):
    chk = hadamard_identity_check(s, vec)
    print(f"hadamard {tag}: lhs={chk.lhs:.6f} rhs={chk.rhs:.6f}")
