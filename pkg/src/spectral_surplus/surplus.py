"""Max-cut, surplus, and certificates bracketing sp and its semidefinite relaxation sp*.

sp(G)  = mc(G) - m/2
sp*(G) = sup { <-A, M>/2 : M psd, M_ii <= 1 }   with  sp <= sp*
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from .graph import Graph, degeneracy, induced_subgraph
from .spectral import Spectrum, decompose, energy

EXACT_MAXCUT_CAP = 26


@dataclass(frozen=True, eq=False)
class Cut:
    side: np.ndarray  # bool per vertex
    cut_edges: int
    m: int

    @property
    def surplus(self) -> Fraction:
        return Fraction(2 * self.cut_edges - self.m, 2)


def cut_value(g: Graph, side) -> int:
    side = np.asarray(side, dtype=bool)
    return int(np.count_nonzero(g.adj & (side[:, None] != side[None, :]))) // 2


# --------------------------------------------------------------------------
# exact max-cut
# --------------------------------------------------------------------------

@njit(cache=True)
def _maxcut_bb(nbr_ptr, nbr_idx, order, m, best_cut, best_side):
    n = order.shape[0]
    side = np.full(n, -1, np.int8)
    choice = np.zeros(n + 1, np.int8)
    cut = np.zeros(n + 1, np.int64)
    inner = np.zeros(n + 1, np.int64)
    # the first vertex stays on side 0 (mirror symmetry)
    side[order[0]] = 0
    depth = 1
    choice[1] = 0
    best = best_cut
    while depth >= 1:
        c = choice[depth]
        v = order[depth]
        if c >= 2:
            side[v] = -1
            depth -= 1
            continue
        choice[depth] = c + 1
        dc = 0
        di = 0
        for t in range(nbr_ptr[v], nbr_ptr[v + 1]):
            u = nbr_idx[t]
            su = side[u]
            if su >= 0:
                di += 1
                if su != c:
                    dc += 1
        newcut = cut[depth - 1] + dc
        newinner = inner[depth - 1] + di
        # every edge not yet inside the assigned set could still be cut
        if newcut + (m - newinner) <= best:
            continue
        side[v] = c
        cut[depth] = newcut
        inner[depth] = newinner
        if depth == n - 1:
            if newcut > best:
                best = newcut
                for w in range(n):
                    best_side[w] = side[w]
            side[v] = -1
            continue
        depth += 1
        choice[depth] = 0
    return best


def maxcut_exact(g: Graph, cap: int = EXACT_MAXCUT_CAP) -> Cut:
    """Globally optimal cut by depth-first branch and bound.

    Vertices are assigned in descending-degree order with incremental cut
    updates; a branch is pruned when its cut plus all edges still touching an
    unassigned vertex cannot beat the incumbent (seeded by local search).
    """
    if g.n > cap:
        raise ValueError(f"exact max-cut capped at n <= {cap}")
    if g.n <= 1 or g.m == 0:
        return Cut(np.zeros(g.n, dtype=bool), 0, g.m)
    start = maxcut_local(g, seed=0, restarts=4)
    order = np.argsort(-g.deg, kind="stable").astype(np.int64)
    ptr = np.concatenate([[0], np.cumsum(g.deg)]).astype(np.int64)
    idx = np.concatenate([g.neighbors(v) for v in range(g.n)]).astype(np.int64)
    best_side = start.side.astype(np.int8)
    # normalise so the first vertex in order sits on side 0
    if best_side[order[0]] == 1:
        best_side = 1 - best_side
    best = _maxcut_bb(ptr, idx, order, g.m, start.cut_edges, best_side)
    side = best_side.astype(bool)
    value = cut_value(g, side)
    assert value == best
    return Cut(side, value, g.m)


def maxcut_local(g: Graph, seed: int = 0, restarts: int = 8) -> Cut:
    """Best single-vertex-flip local optimum over random starts.

    At a flip-local optimum every vertex has at least half its edges cut, so
    the result is always >= ceil(m/2).
    """
    A = g.adj.astype(np.int64)
    best = None
    for r in range(max(restarts, 1)):
        rng = np.random.default_rng([seed, r])
        s = np.where(rng.random(g.n) < 0.5, 1, -1).astype(np.int64)
        while True:
            # gain of flipping v: (same-side neighbours) - (other-side neighbours)
            gain = s * (A @ s)
            v = int(np.argmax(gain))
            if g.n == 0 or gain[v] <= 0:
                break
            s[v] = -s[v]
        side = s > 0
        value = cut_value(g, side)
        if best is None or value > best.cut_edges:
            best = Cut(side, value, g.m)
    assert 2 * best.cut_edges >= g.m
    return best


# --------------------------------------------------------------------------
# certificates
# --------------------------------------------------------------------------

@dataclass(eq=False)
class SurplusCertificate:
    kind: str
    value: float
    target: str  # "sp" | "spStar"
    direction: str  # "lower" | "upper"
    witness: object = None
    details: dict = field(default_factory=dict)

    def to_dict(self, witness_ref: str | None = None) -> dict:
        return {
            "kind": self.kind,
            "target": self.target,
            "direction": self.direction,
            "value": float(self.value),
            "witnessRef": witness_ref,
        }

    def witness_json(self):
        w = self.witness
        if w is None:
            return None
        if isinstance(w, Cut):
            return [int(x) for x in w.side]
        if isinstance(w, np.ndarray):
            return [[float(x) for x in row] for row in np.atleast_2d(w)]
        return float(w)


def factor_objective(g: Graph, U: np.ndarray) -> float:
    """(1/2) <-A, U U^T>."""
    if U.size == 0:
        return 0.0
    A = g.adjacency_matrix(float)
    return -0.5 * float(np.sum(U * (A @ U)))


def check_witness(g: Graph, cert: SurplusCertificate, rel: float = 1e-8) -> bool:
    """Re-evaluate a certificate from its witness."""
    w = cert.witness
    tol = rel * max(1.0, abs(float(cert.value)))
    if isinstance(w, Cut):
        return cut_value(g, w.side) == w.cut_edges and abs(float(w.surplus) - float(cert.value)) <= tol
    if isinstance(w, np.ndarray):
        if w.size and np.max(np.linalg.norm(w, axis=1)) > 1 + 1e-9:
            return False
        return abs(factor_objective(g, w) - float(cert.value)) <= tol
    return True


def exact_certificate(g: Graph) -> SurplusCertificate:
    cut = maxcut_exact(g)
    return SurplusCertificate("exact-cut", cut.surplus, "sp", "lower", cut)


def energy_certificate(s: Spectrum) -> SurplusCertificate:
    """sp* >= E(G)/4 via M = sum over nonpositive eigenvalues of v_i v_i^T."""
    U = s.vectors[:, s.lambdas <= 0]
    # rows of an orthonormal column subset have norm <= 1
    diag = np.sum(U * U, axis=1)
    assert np.all(diag <= 1 + 1e-9)
    val = energy(s) / 4.0
    return SurplusCertificate("energy-lower", val, "spStar", "lower", np.ascontiguousarray(U),
                              {"max_diag": float(diag.max()) if diag.size else 0.0})


def cubic_certificate(s: Spectrum) -> SurplusCertificate:
    """sp* >= (1/2n) sum over negative eigenvalues of (-lambda)^3.

    Implies (-lambda_n)^3 <= 2n sp*.
    """
    n = s.n
    neg = s.lambdas < 0
    lam = s.lambdas[neg]
    U = s.vectors[:, neg] * (np.abs(lam) / math.sqrt(n))
    diag = np.sum(U * U, axis=1)
    assert np.all(diag <= 1 + 1e-9)
    val = float(np.sum((-lam) ** 3)) / (2.0 * n)
    lam_n = max(-s.lambda_min, 0.0)
    return SurplusCertificate("cubic-lower", val, "spStar", "lower", np.ascontiguousarray(U), {
        "max_diag": float(diag.max()) if diag.size else 0.0,
        "least_eigenvalue_bound": (2.0 * n * val) ** (1.0 / 3.0),
        "least_eigenvalue_cubed": lam_n**3,
    })


def dual_upper(s: Spectrum) -> SurplusCertificate:
    """sp* <= n max(-lambda_n, 0)/2 from the uniform dual y_i = -lambda_n/2."""
    y = max(-s.lambda_min, 0.0) / 2.0
    return SurplusCertificate("dual-upper", s.n * y, "spStar", "upper", y)


def mixing_upper(g: Graph, s: Spectrum) -> SurplusCertificate:
    """sp <= -lambda_n n."""
    return SurplusCertificate("mixing-upper", max(-s.lambda_min, 0.0) * g.n, "sp", "upper")


def edwards_floor(g: Graph) -> SurplusCertificate:
    val = math.sqrt(g.m / 8.0 + 1.0 / 64.0) - 1.0 / 8.0
    return SurplusCertificate("edwards", val, "sp", "lower")


def degeneracy_floor(g: Graph) -> SurplusCertificate:
    d = degeneracy(g)
    return SurplusCertificate("degeneracy", g.m / (2.0 * (d + 1)), "sp", "lower", details={"degeneracy": d})


# --------------------------------------------------------------------------
# low-rank ascent for sp*
# --------------------------------------------------------------------------

def spectral_norm_estimate(A: np.ndarray, iters: int = 20, seed: int = 0) -> float:
    if not A.any():
        return 0.0
    x = np.random.default_rng(seed).standard_normal(A.shape[0])
    est = 0.0
    for _ in range(iters):
        y = A @ x
        ny = np.linalg.norm(y)
        if ny == 0.0:
            break
        est = ny / np.linalg.norm(x)
        x = y / ny
    return est


def _project_rows(U: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(U, axis=1, keepdims=True)
    return U / np.maximum(norms, 1.0)


def sdp_lower(g: Graph, rank: int | None = None, iters: int = 500, step: float | None = None,
              tol: float = 1e-10, seed: int = 0, init: str = "spectral",
              spectrum: Spectrum | None = None) -> SurplusCertificate:
    """Feasible lower bound on sp* by projected gradient ascent on factor rows.

    M = U U^T with every row of U in the unit ball, so each iterate is a valid
    certificate. ``init="spectral"`` warm-starts from the better of the energy
    and cubic certificates; ``init="random"`` uses ``rank`` random columns
    (default ceil(sqrt(2n))). A step that would lower the objective is halved,
    so the recorded history is nondecreasing.
    """
    n = g.n
    A = g.adjacency_matrix(float)
    if rank is None:
        rank = max(1, math.ceil(math.sqrt(2 * n)))
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if g.m == 0:
        return SurplusCertificate("sdp-lower", 0.0, "spStar", "lower", np.zeros((n, rank)),
                                  {"history": [0.0], "iterations": 0})

    if init == "spectral":
        s = spectrum if spectrum is not None else decompose(g)
        warm = max((energy_certificate(s), cubic_certificate(s)), key=lambda c: c.value)
        U = warm.witness
        if U.shape[1] < rank:
            U = np.hstack([U, np.zeros((n, rank - U.shape[1]))])
    elif init == "random":
        U = _project_rows(np.random.default_rng(seed).standard_normal((n, rank)))
    else:
        raise ValueError(f"unknown init {init!r}")
    U = _project_rows(U)

    if step is None:
        L = spectral_norm_estimate(A, 20, seed)
        step = 1.0 / (2.0 * L)
    value = -0.5 * float(np.sum(U * (A @ U)))
    history = [value]
    it = 0
    for it in range(1, iters + 1):
        grad = -(A @ U)
        eta = step
        while True:
            cand = _project_rows(U + eta * grad)
            cval = -0.5 * float(np.sum(cand * (A @ cand)))
            if not np.isfinite(cval):
                raise FloatingPointError("non-finite iterate in sdp ascent")
            if cval >= value or eta < 1e-12 * step:
                break
            eta *= 0.5
        if cval < value:
            break
        gain = cval - value
        U, value = cand, cval
        history.append(value)
        if gain <= tol * max(1.0, abs(value)):
            break
    return SurplusCertificate("sdp-lower", value, "spStar", "lower", U,
                              {"history": history, "iterations": it, "step": step, "rank": U.shape[1]})


# --------------------------------------------------------------------------
# induced-subgraph monotonicity
# --------------------------------------------------------------------------

@dataclass
class MonotonicityReport:
    sp_graph: Fraction
    sp_sub: Fraction
    sp_ok: bool
    sp_star: str  # "pass" | "fail" | "inconclusive"
    embedded_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.sp_ok and self.embedded_ok and self.sp_star != "fail"


def monotonicity_check(g: Graph, s, cap: int = EXACT_MAXCUT_CAP) -> MonotonicityReport:
    """sp(G) >= sp(G[s]) exactly; sp*(G) >= sp*(G[s]) via certificates.

    The sp* side is conclusive when sdp_lower(G) >= dual_upper(G[s]). In
    addition the subgraph's feasible factor is zero-padded into G and must
    give the same objective there.
    """
    verts = sorted(set(int(v) for v in s))
    h = induced_subgraph(g, verts)
    if g.n > cap:
        raise ValueError(f"exact max-cut capped at n <= {cap}")
    sp_g = maxcut_exact(g).surplus
    sp_h = maxcut_exact(h).surplus

    sg = decompose(g) if g.n else None
    lo_g = sdp_lower(g, spectrum=sg).value if g.n else 0.0
    if h.n:
        sh = decompose(h)
        up_h = dual_upper(sh).value
        cert_h = sdp_lower(h, spectrum=sh)
        lo_h = cert_h.value
        padded = np.zeros((g.n, cert_h.witness.shape[1]))
        padded[verts] = cert_h.witness
        embedded_ok = abs(factor_objective(g, padded) - lo_h) <= 1e-9 * max(1.0, abs(lo_h))
    else:
        up_h = lo_h = 0.0
        embedded_ok = True
    up_g = dual_upper(sg).value if g.n else 0.0
    if lo_g >= up_h - 1e-9:
        star = "pass"
    elif up_g < lo_h - 1e-9:
        star = "fail"
    else:
        star = "inconclusive"
    return MonotonicityReport(sp_g, sp_h, sp_g >= sp_h, star, embedded_ok,
                              {"sdp_lower_graph": lo_g, "dual_upper_sub": up_h,
                               "sdp_lower_sub": lo_h, "dual_upper_graph": up_g})
