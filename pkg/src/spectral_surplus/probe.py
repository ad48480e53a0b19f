"""Gaussian probes on eigenvector-product subspaces, clipping, and the
entrywise-square identity behind the key recursion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spectral import Spectrum, ThresholdProfile

STAT_SIGMAS = 4.0
MIN_SAMPLES = 100


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray  # n x dim, orthonormal columns
    label: str = ""

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, w: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.T @ w)


@dataclass(frozen=True, eq=False)
class ProbeVector:
    entries: np.ndarray
    seed: int | None = None
    index: int = 0
    subspace: str = ""
    clipped: bool = False
    beta: float | None = None


def product_vectors(s: Spectrum, idx) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Columns v_i * v_j (entrywise) for i <= j in ``idx``."""
    idx = list(idx)
    pairs = [(i, j) for a, i in enumerate(idx) for j in idx[a:]]
    if not pairs:
        return np.zeros((s.n, 0)), pairs
    I = [i for i, _ in pairs]
    J = [j for _, j in pairs]
    return s.vectors[:, I] * s.vectors[:, J], pairs


def orthonormal_span(vectors: np.ndarray, rank_tol: float) -> np.ndarray:
    """Column-pivoted modified Gram-Schmidt with one re-orthogonalisation pass."""
    n, k = vectors.shape
    resid = vectors.astype(float, copy=True)
    basis = []
    for _ in range(min(n, k)):
        norms = np.linalg.norm(resid, axis=0)
        j = int(np.argmax(norms))
        if norms[j] <= rank_tol:
            break
        q = resid[:, j] / norms[j]
        if basis:
            B = np.column_stack(basis)
            q = q - B @ (B.T @ q)
            nq = np.linalg.norm(q)
            if nq <= rank_tol:
                resid[:, j] = 0.0
                continue
            q /= nq
        basis.append(q)
        resid -= np.outer(q, q @ resid)
        resid[:, j] = 0.0
    if not basis:
        return np.zeros((n, 0))
    return np.column_stack(basis)


def hadamard_span(s: Spectrum, T: float, rank_tol: float | None = None) -> Subspace:
    """Orthonormal basis of span{v_i * v_j : i, j in L_T}."""
    idx = ThresholdProfile(s).level_set(T)
    if idx.size == 0:
        raise ValueError(f"L_T is empty at T={T:g}")
    if rank_tol is None:
        rank_tol = 1e-10 * math.sqrt(s.n)
    prods, _ = product_vectors(s, idx)
    return Subspace(orthonormal_span(prods, rank_tol), label=f"hadamard(T={T:g})")


def _normals(seed: int, index: int, size: int) -> np.ndarray:
    # counter-based stream keyed on (seed, index): any probe is reproducible alone
    key = (int(seed) & 0xFFFFFFFFFFFFFFFF) | ((int(index) & 0xFFFFFFFFFFFFFFFF) << 64)
    return np.random.Generator(np.random.Philox(key=key)).standard_normal(size)


def sample_gaussian(w: Subspace, seed: int, index: int = 0) -> ProbeVector:
    """q = sum_i x_i b_i with x ~ N(0, I_dim)."""
    if w.dim < 1:
        raise ValueError("cannot sample on a zero-dimensional subspace")
    x = _normals(seed, index, w.dim)
    return ProbeVector(w.basis @ x, seed=seed, index=index, subspace=w.label)


def sample_gaussian_batch(w: Subspace, seed: int, count: int) -> np.ndarray:
    """Rows are the probes for indices 0..count-1 (same as :func:`sample_gaussian`)."""
    if w.dim < 1:
        raise ValueError("cannot sample on a zero-dimensional subspace")
    X = np.empty((count, w.dim))
    for i in range(count):
        X[i] = _normals(seed, i, w.dim)
    return X @ w.basis.T


def clip_rows(Q: np.ndarray, beta: float) -> np.ndarray:
    """Clamp every row q to [-beta x, beta x] with x = ||q||_2 / sqrt(n)."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if math.isinf(beta):
        return Q.copy()
    n = Q.shape[1]
    cap = beta * np.linalg.norm(Q, axis=1, keepdims=True) / math.sqrt(n)
    return np.clip(Q, -cap, cap)


def clip(q, beta: float):
    """Clipping T_beta q; accepts a :class:`ProbeVector` or a plain array.

    beta = 1 is accepted as the degenerate edge of the admissible range.
    """
    if not beta >= 1.0:
        raise ValueError("clipping factor must be >= 1")
    raw = q.entries if isinstance(q, ProbeVector) else np.asarray(q, dtype=float)
    out = clip_rows(raw[None, :], beta)[0] if raw.size else raw.copy()
    norm = np.linalg.norm(raw)
    slack = 1e-12 * (1.0 + norm)
    assert np.linalg.norm(out) <= norm + slack
    assert np.linalg.norm(raw - out) <= norm + slack
    if isinstance(q, ProbeVector):
        return ProbeVector(out, q.seed, q.index, q.subspace, True, beta)
    return out


@dataclass
class IdentityCheck:
    lhs: float
    rhs: float
    quadratic_form: float
    passed: bool


def hadamard_identity_check(s: Spectrum, q, tol: float = 1e-6) -> IdentityCheck:
    """sum_i lambda_i <v_i,q>^2  ==  sum_{i,j} lambda_i lambda_j <v_i * v_j, q>^2.

    Holds for every q because the adjacency matrix equals its entrywise square.
    The left side is also compared with q^T A q.
    """
    q = q.entries if isinstance(q, ProbeVector) else np.asarray(q, dtype=float)
    V, lam = s.vectors, s.lambdas
    c = V.T @ q
    lhs = float(np.sum(lam * c * c))
    # <v_i * v_j, q> = (V^T diag(q) V)_ij
    M = V.T @ (V * q[:, None])
    rhs = float(np.einsum("i,ij,j->", lam, M * M, lam))
    quad = float(q @ (s.adjacency @ q))
    scale = 1.0 + abs(lhs)
    ok = abs(lhs - rhs) <= tol * scale and abs(lhs - quad) <= tol * scale
    return IdentityCheck(lhs, rhs, quad, bool(ok))


@dataclass
class TruncationReport:
    T: float
    beta: float
    dim: int
    samples: int
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.rows)


def truncation_effect_estimate(s: Spectrum, T: float, samples: int = 10_000, seed: int = 0, beta: float | None = None) -> TruncationReport:
    """Monte Carlo check of the two moment bounds for clipped probes.

    part 1: E<v_i*v_j, T_beta q>^2 >= (||v_i*v_j|| - 1/(2 sqrt n))_+^2 for i, j in L_T
    part 2: E<v_i, T_beta q>^2 <= 25 for i in L_{T^2/8n}

    ``beta`` defaults to 2n^4/T^4. A row passes when its bound is on the safe
    side of mean -/+ 4 standard errors.
    """
    n = s.n
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    if not 0.0 < T <= n:
        raise ValueError("T must lie in (0, n]")
    prof = ThresholdProfile(s)
    idx = prof.level_set(T)
    if idx.size == 0:
        raise ValueError(f"L_T is empty at T={T:g}")
    if beta is None:
        beta = 2.0 * n**4 / T**4
    W = hadamard_span(s, T)
    Q = clip_rows(sample_gaussian_batch(W, seed, samples), beta)
    rep = TruncationReport(float(T), float(beta), W.dim, samples)
    root = math.sqrt(samples)

    prods, pairs = product_vectors(s, idx)
    proj = Q @ prods  # samples x pairs
    sq = proj * proj
    means = sq.mean(axis=0)
    errs = sq.std(axis=0, ddof=1) / root
    norms = np.linalg.norm(prods, axis=0)
    for k, (i, j) in enumerate(pairs):
        bound = max(norms[k] - 0.5 / math.sqrt(n), 0.0) ** 2
        ok = means[k] + STAT_SIGMAS * errs[k] >= bound
        rep.rows.append({"part": 1, "pair": [int(i), int(j)], "mean": float(means[k]),
                         "stderr": float(errs[k]), "bound": float(bound), "pass": bool(ok)})

    idx2 = prof.level_set(T * T / (8.0 * n))
    proj2 = Q @ s.vectors[:, idx2]
    sq2 = proj2 * proj2
    means2 = sq2.mean(axis=0)
    errs2 = sq2.std(axis=0, ddof=1) / root
    for k, i in enumerate(idx2.tolist()):
        ok = means2[k] - STAT_SIGMAS * errs2[k] <= 25.0
        rep.rows.append({"part": 2, "pair": [int(i), int(i)], "mean": float(means2[k]),
                         "stderr": float(errs2[k]), "bound": 25.0, "pass": bool(ok)})
    return rep
