"""Full adjacency eigendecomposition and the quantities derived from it."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph


class SpectrumError(RuntimeError):
    pass


def default_tolerance(n: int, lambda_max: float) -> float:
    return 1e-8 * max(n, 1) * max(1.0, abs(lambda_max))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenpairs of an adjacency matrix, eigenvalues in descending order.

    ``vectors[:, i]`` is the unit eigenvector for ``lambdas[i]``.
    """

    lambdas: np.ndarray
    vectors: np.ndarray
    m: int
    adjacency: np.ndarray
    tol: float
    residual: float

    @property
    def n(self) -> int:
        return self.lambdas.shape[0]

    @property
    def lambda_min(self) -> float:
        return float(self.lambdas[-1]) if self.n else 0.0

    @property
    def lambda_max(self) -> float:
        return float(self.lambdas[0]) if self.n else 0.0

    def to_dict(self, vectors: bool = False) -> dict:
        out = {"lambdas": [float(x) for x in self.lambdas], "residual": float(self.residual)}
        if vectors:
            out["vectors"] = [[float(x) for x in col] for col in self.vectors.T]
        return out

    def to_json(self, vectors: bool = False) -> str:
        return json.dumps(self.to_dict(vectors), sort_keys=True)


def _canonical_signs(vecs: np.ndarray, eps: float) -> np.ndarray:
    # first entry that is clearly nonzero becomes positive
    big = np.abs(vecs) > eps
    first = np.argmax(big, axis=0)
    signs = np.sign(vecs[first, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def _order_ties(lams: np.ndarray, vecs: np.ndarray, gap: float) -> np.ndarray:
    """Within each cluster of (numerically) equal eigenvalues sort vectors lexicographically."""
    out = vecs.copy()
    n = lams.shape[0]
    i = 0
    while i < n:
        j = i + 1
        while j < n and lams[j - 1] - lams[j] <= gap:
            j += 1
        if j - i > 1:
            block = np.round(vecs[:, i:j], 10)
            # lexsort keys: last key is primary, so feed rows reversed
            order = np.lexsort(block[::-1])[::-1]
            out[:, i:j] = vecs[:, i:j][:, order]
        i = j
    return out


def decompose(g: Graph, tol: float | None = None) -> Spectrum:
    """Symmetric eigendecomposition of the adjacency matrix of ``g``.

    Raises :class:`SpectrumError` if LAPACK fails or if the result violates
    the residual, trace, Frobenius or orthonormality checks at ``tol``.
    """
    if g.n < 1:
        raise SpectrumError("decomposition needs n >= 1")
    a = g.adjacency_matrix(float)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(f"eigensolver failed to converge: {exc}") from exc
    w = w[::-1].copy()
    v = v[:, ::-1]
    if tol is None:
        tol = default_tolerance(g.n, w[0])
    v = _canonical_signs(v, 1e-12)
    v = _order_ties(w, v, gap=1e-9 * max(1.0, abs(w[0])))
    v = np.ascontiguousarray(v)

    resid = float(np.max(np.linalg.norm(a @ v - v * w, axis=0)))
    spec = Spectrum(w, v, g.m, a, float(tol), resid)
    for arr in (w, v, a):
        arr.setflags(write=False)
    problems = check_invariants(spec)
    if problems:
        raise SpectrumError("; ".join(problems))
    return spec


def check_invariants(s: Spectrum) -> list[str]:
    """Return a list of violated invariants (empty when all hold)."""
    bad = []
    tol = s.tol
    if s.residual > tol:
        bad.append(f"residual {s.residual:.3e} > {tol:.3e}")
    if abs(s.lambdas.sum()) > tol:
        bad.append(f"trace {s.lambdas.sum():.3e} not zero")
    if abs(float(np.sum(s.lambdas**2)) - 2 * s.m) > tol:
        bad.append("sum of squared eigenvalues differs from 2m")
    gram = s.vectors.T @ s.vectors
    if np.max(np.abs(gram - np.eye(s.n))) > tol:
        bad.append("eigenvectors not orthonormal")
    if np.any(np.diff(s.lambdas) > 0):
        bad.append("eigenvalues not sorted descending")
    return bad


def energy(s: Spectrum) -> float:
    return float(np.abs(s.lambdas).sum())


class ThresholdProfile:
    """Queries for L_T = {i : lambda_i >= T} and S_T = sum over L_T."""

    def __init__(self, s: Spectrum):
        self.spectrum = s
        self._asc = s.lambdas[::-1].copy()
        # suffix sums of the ascending array, i.e. prefix sums of the descending one
        self._prefix = np.concatenate([[0.0], np.cumsum(s.lambdas)])

    def count(self, T: float) -> int:
        return self.spectrum.n - int(np.searchsorted(self._asc, T, side="left"))

    def level_set(self, T: float) -> np.ndarray:
        return np.arange(self.count(T))

    def S(self, T: float) -> float:
        return float(self._prefix[self.count(T)])

    def L(self, T: float) -> np.ndarray:
        return self.level_set(T)


def threshold_profile(s: Spectrum) -> ThresholdProfile:
    return ThresholdProfile(s)


def triangle_count_spectral(s: Spectrum) -> float:
    return float(np.sum(s.lambdas**3)) / 6.0


@dataclass
class FlatnessReport:
    slack: dict  # index -> bound - ||v_i||_inf
    flagged: list
    max_slack: float
    min_slack: float

    @property
    def passed(self) -> bool:
        return not self.flagged


def flatness_check(s: Spectrum, tol: float | None = None) -> FlatnessReport:
    """Check ||v_i||_inf <= sqrt(n)/|lambda_i| for every nonzero eigenvalue."""
    tol = s.tol if tol is None else tol
    n = s.n
    slack = {}
    flagged = []
    for i, lam in enumerate(s.lambdas.tolist()):
        if abs(lam) <= s.tol:
            continue
        bound = np.sqrt(n) / abs(lam)
        val = float(np.max(np.abs(s.vectors[:, i])))
        slack[i] = bound - val
        if val > bound + tol:
            flagged.append(i)
    vals = list(slack.values())
    return FlatnessReport(
        slack, flagged,
        max(vals) if vals else 0.0,
        min(vals) if vals else 0.0,
    )


@dataclass(frozen=True, eq=False)
class EmbeddingVectors:
    gamma: float
    indices: np.ndarray  # S = L_{gamma n}
    H: np.ndarray  # n x |S|, row v is H_v
    spectrum: Spectrum = field(repr=False)

    @property
    def tail_mass(self) -> float:
        return residual_gram_mass(self.spectrum, self.indices)


def embedding_vectors(s: Spectrum, gamma: float) -> EmbeddingVectors:
    """Rows H_v with H_{v,i} = sqrt(lambda_i) * v_i[v] over i in L_{gamma n}."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if gamma * s.n < 1.0:
        raise ValueError("embedding needs gamma * n >= 1")
    prof = ThresholdProfile(s)
    idx = prof.level_set(gamma * s.n)
    H = s.vectors[:, idx] * np.sqrt(s.lambdas[idx])
    limit = gamma ** -0.5 + s.tol
    if H.size and np.max(np.abs(H)) > limit:
        raise SpectrumError("embedding row exceeds gamma^(-1/2) in max norm")
    if idx.size > float(np.sum(s.lambdas**2)) / (gamma * s.n) ** 2 + 1e-9:
        raise SpectrumError("|S| exceeds sum(lambda^2) / (gamma n)^2")
    return EmbeddingVectors(gamma, idx, H, s)


def residual_gram_mass(s: Spectrum, S) -> float:
    """Sum of lambda_i^2 over indices not in S."""
    keep = np.ones(s.n, dtype=bool)
    keep[np.asarray(list(S), dtype=np.int64)] = False
    return float(np.sum(s.lambdas[keep] ** 2))
