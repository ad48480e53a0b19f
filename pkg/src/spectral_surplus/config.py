"""Parameter presets. ``desk`` is tuned for n <= 256; ``paper`` restores the
asymptotic constants (mostly vacuous at that scale)."""

from __future__ import annotations

PRESETS = {
    "desk": {
        "eps": 0.1,           # closeness tolerance for cluster-edit comparisons
        "delta": 0.0009,      # tail-mass gate; mu = delta^(1/3) < 0.1 needs delta < 0.001
        "gamma": 0.25,        # embedding threshold gamma n
        "structure_gamma": "1/n",  # corpus structure suite: smallest admissible gamma
        "eta": 0.05,          # partition grid side
        "mu": None,           # pair-class threshold; None means delta^(1/3)
        "kappa": 1e-2,        # square-root increment constant
        "target": 0.3,        # increment density target
        "step_cap": 64,
        "c": 1.0 / 99.0,      # surplus recursion exponent
        "rho": 1.0 / 1000.0,  # density exponent of the main theorem
        "gamma_increment": 1.0 / 200.0,  # density/surplus exponent of the increment lemma
        "top_eps": 0.005,
        "top_delta": 0.005,
        "probes": 100,
        "probe_beta": 2.0,
        "samples": 10_000,
        "sdp_iters": 500,
        "sdp_iters_large": 50,
        "surplus_n": 20,
        "structure_n": 64,
        "planted_count": 100,
    },
}
PRESETS["paper"] = dict(PRESETS["desk"], kappa=1e-10, rho=1.0 / 1000.0, gamma_increment=1.0 / 200.0,
                        c=1.0 / 99.0)


def resolve_params(preset: str, overrides: dict) -> dict:
    """Preset table first, then overrides (string values are coerced to the preset's type)."""
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}")
    out = dict(PRESETS[preset])
    for key, val in overrides.items():
        if key.startswith("_") or key == "seed":
            out[key] = val
            continue
        if key not in out:
            raise ValueError(f"unknown parameter {key!r}")
        base = out[key]
        if isinstance(val, str) and not isinstance(base, str):
            try:
                val = int(float(val)) if isinstance(base, int) else float(val)
            except ValueError:
                raise ValueError(f"parameter {key!r} expects a number, got {val!r}") from None
        out[key] = val
    return out
