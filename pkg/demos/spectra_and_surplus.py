"""Walk through the spectrum of a few classic graphs and sandwich their surplus."""

from spectral_surplus.graph import family
from spectral_surplus.spectral import decompose, energy
from spectral_surplus.surplus import (cubic_certificate, degeneracy_floor, dual_upper, edwards_floor,
                                      energy_certificate, maxcut_exact, mixing_upper, sdp_lower)

graphs = {
    "K4": family("complete", n=4),
    "C5": family("cycle", n=5),
    "Petersen": family("petersen"),
    "K33": family("turan", n=6, r=2),
    "Paley(13)": family("paley", q=13),
}

for name, g in graphs.items():
    s = decompose(g)
    print(f"{name}: n={g.n} m={g.m} lambda_1={s.lambda_max:.3f} lambda_n={s.lambda_min:.3f} E={energy(s):.3f}")

    # lower bounds on sp, then the exact value, then upper bounds
    floors = max(edwards_floor(g).value, degeneracy_floor(g).value)
    cut = maxcut_exact(g)
    print(f"  sp floors {floors:.3f} <= sp = {cut.surplus} <= mixing {mixing_upper(g, s).value:.3f}")

    # sp* sits between the spectral lower certificates and the dual bound
    lo = sdp_lower(g, spectrum=s).value
    print(f"  sp*: energy/4 {energy_certificate(s).value:.3f}, cubic {cubic_certificate(s).value:.3f}, "
          f"sdp {lo:.3f}, dual {dual_upper(s).value:.3f}")
