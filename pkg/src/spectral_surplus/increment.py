"""Density increment: peel high-degree vertices, then either double the
density on a small set or jump to a square-root density around the densest
neighbourhood. Iterating it never decreases the potential p^3 n (in regime).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, induced_subgraph, neighborhood_edge_counts, triangle_count

KAPPA_DESK = 1e-2
KAPPA_PAPER = 1e-10
POTENTIAL_RTOL = 1e-9

DOUBLE = "double-density"
SQRT = "sqrt-density"
EARLY_EXIT = "early-exit"


def potential(p: float, n: int) -> float:
    if not 0.0 <= p <= 1.0 or n < 0:
        raise ValueError("need p in [0, 1] and n >= 0")
    return p**3 * n


def _density(m: int, n: int) -> float:
    return 2.0 * m / (n * n) if n else 0.0


def default_regime_cap(kappa: float) -> float:
    # square-root step: p1^3 n1 >= kappa^3 p^(5/2) n, which is >= p^3 n iff p <= kappa^6
    return kappa**6


def peel_high_degree(g: Graph, threshold: float) -> tuple[np.ndarray, Graph, np.ndarray]:
    """Repeatedly drop a vertex whose current degree is >= threshold.

    Highest current degree goes first, ties to the lowest index. Returns the
    peeled vertices in removal order, the remaining induced subgraph and the
    original indices of its vertices.
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    deg = g.deg.astype(np.int64).copy()
    alive = np.ones(g.n, dtype=bool)
    removed = []
    while True:
        cand = np.where(alive, deg, -1)
        v = int(np.argmax(cand))
        if g.n == 0 or cand[v] < threshold:
            break
        removed.append(v)
        alive[v] = False
        deg[g.adj[v]] -= 1
    keep = np.flatnonzero(alive)
    return np.array(removed, dtype=np.int64), induced_subgraph(g, keep), keep


def densest_neighborhood(g: Graph) -> tuple[int, int]:
    """Vertex whose neighbourhood spans the most edges (lowest index on ties)."""
    if g.n < 1:
        raise GraphError("densest_neighborhood needs n >= 1")
    counts = neighborhood_edge_counts(g)
    assert 2 * int(counts.sum()) == 6 * triangle_count(g), "neighbourhood/triangle identity broken"
    v0 = int(np.argmax(counts))
    return v0, int(counts[v0])


def _pad(g: Graph, core: np.ndarray, size: int) -> np.ndarray:
    """Extend ``core`` to ``size`` vertices by descending degree, ties by index."""
    chosen = np.zeros(g.n, dtype=bool)
    chosen[core] = True
    need = size - int(chosen.sum())
    if need > 0:
        rest = np.flatnonzero(~chosen)
        order = rest[np.lexsort((rest, -g.deg[rest]))]
        chosen[order[:need]] = True
    return np.flatnonzero(chosen)


@dataclass
class IncrementStep:
    input_vertices: np.ndarray
    output_vertices: np.ndarray
    case: str
    p0: float
    p1: float
    peeled: np.ndarray
    details: dict = field(default_factory=dict)

    @property
    def n0(self) -> int:
        return len(self.input_vertices)

    @property
    def n1(self) -> int:
        return len(self.output_vertices)


def increment_step(g0: Graph, kappa: float = KAPPA_DESK, peel_factor: float = 4.0,
                   vertices=None) -> IncrementStep:
    """One density-increment step on ``g0``.

    ``vertices`` names the vertices of ``g0`` in some ambient graph; the
    returned vertex sets are expressed in those labels.
    """
    if g0.m < 1:
        raise GraphError("increment step needs at least one edge")
    n0 = g0.n
    labels = np.arange(n0) if vertices is None else np.asarray(vertices, dtype=np.int64)
    p0 = _density(g0.m, n0)
    R, rem, keep = peel_high_degree(g0, peel_factor * p0 * n0)
    p_rem = _density(rem.m, rem.n)
    details = {"threshold": peel_factor * p0 * n0, "remainder_density": p_rem}

    if p_rem <= p0 / 4:
        W = _pad(g0, R, math.ceil(n0 / 8))
        case_try = DOUBLE
    else:
        v0, e0 = densest_neighborhood(rem)
        size = min(rem.n, math.floor(20 * p_rem * rem.n))
        W = keep[_pad(rem, rem.neighbors(v0), size)]
        details.update({"v0": int(keep[v0]), "neighborhood_edges": e0})
        case_try = SQRT

    sub = induced_subgraph(g0, W)
    p1 = _density(sub.m, sub.n)
    n1 = len(W)
    if case_try == DOUBLE:
        ok = n1 >= n0 / 8 and p1 >= 2 * p0
    else:
        ok = n1 >= p0 * n0 and p1 >= kappa * math.sqrt(p0)
    details["attempted"] = case_try
    case = case_try if ok else EARLY_EXIT
    out = labels[W] if ok else labels.copy()
    return IncrementStep(labels.copy(), out, case, p0, p1 if ok else p0, labels[R], details)


@dataclass
class IncrementTrace:
    steps: list = field(default_factory=list)
    reason: str = ""  # density-target | precondition-failed | step-cap
    final_vertices: np.ndarray | None = None
    final_density: float = 0.0
    regime_cap: float = 0.0

    def rows(self) -> list[dict]:
        return [{"step": i, "n_i": s.n0, "p_i": s.p0, "case": s.case, "R": int(len(s.peeled)),
                 "potential": potential(min(s.p0, 1.0), s.n0)} for i, s in enumerate(self.steps)]

    def monotone_violations(self, regime_cap: float | None = None) -> list[int]:
        """Steps i (tagged, p_i <= cap) where p^3 n drops by more than the tolerance."""
        cap = self.regime_cap if regime_cap is None else regime_cap
        bad = []
        for i, s in enumerate(self.steps):
            if s.case == EARLY_EXIT or s.p0 > cap:
                continue
            before = potential(s.p0, s.n0)
            after = potential(min(s.p1, 1.0), s.n1)
            if after < before * (1 - POTENTIAL_RTOL):
                bad.append(i)
        return bad


def increment_loop(g: Graph, target: float = 0.3, kappa: float = KAPPA_DESK, step_cap: int = 64,
                   regime_cap: float | None = None, peel_factor: float = 4.0) -> IncrementTrace:
    """Iterate :func:`increment_step` until the density reaches ``target``.

    A step whose output equals its input is a fixed point: every further step
    would repeat it, so the loop stops there with reason ``step-cap``.
    """
    if not 0 < target < 1:
        raise ValueError("target density must lie in (0, 1)")
    if step_cap < 1:
        raise ValueError("step cap must be >= 1")
    cap = default_regime_cap(kappa) if regime_cap is None else regime_cap
    trace = IncrementTrace(regime_cap=cap)
    verts = np.arange(g.n)
    cur = g
    while True:
        p = _density(cur.m, cur.n)
        if cur.n and p >= target:
            trace.reason = "density-target"
            break
        if len(trace.steps) >= step_cap:
            trace.reason = "step-cap"
            break
        if cur.m < 1:
            trace.steps.append(IncrementStep(verts.copy(), verts.copy(), EARLY_EXIT, p, p,
                                             np.zeros(0, dtype=np.int64), {"attempted": None}))
            trace.reason = "precondition-failed"
            break
        step = increment_step(cur, kappa, peel_factor, vertices=verts)
        trace.steps.append(step)
        if step.case == EARLY_EXIT:
            trace.reason = "precondition-failed"
            break
        if p <= cap:
            assert potential(min(step.p1, 1.0), step.n1) >= potential(p, cur.n) * (1 - POTENTIAL_RTOL)
        if step.n1 == len(verts):
            trace.reason = "step-cap"
            trace.steps[-1].details["fixed_point"] = True
            break
        pos = np.searchsorted(verts, step.output_vertices)
        cur = induced_subgraph(cur, pos)
        verts = step.output_vertices
    trace.final_vertices = verts
    trace.final_density = _density(cur.m, cur.n)
    return trace
