"""Spectral partitioning tester: either an eigenvalue witness (a very negative
Rayleigh quotient) or evidence that the graph is close to a union of cliques.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import EXACT_CLUSTER_CAP, Graph, cherry_count, cluster_edit
from .spectral import EmbeddingVectors, Spectrum, ThresholdProfile, embedding_vectors, residual_gram_mass

SPARSE, DENSE, IMPURE = 0, 1, 2
CLASS_NAMES = {SPARSE: "sparse", DENSE: "dense", IMPURE: "impure"}


@dataclass(eq=False)
class PartPartition:
    labels: np.ndarray  # vertex -> part index
    parts: list  # sorted vertex arrays
    eta: float
    representatives: np.ndarray  # t x |S| centroids
    embedding: EmbeddingVectors = field(repr=False)

    @property
    def t(self) -> int:
        return len(self.parts)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(p) for p in self.parts], dtype=np.int64)

    def paper_grid_side(self) -> float:
        return self.embedding.gamma ** 9.5

    def paper_part_count_log10(self) -> float:
        g = self.embedding.gamma
        return g**-2 * math.log10(math.ceil(2 * g**-10 + 1))


def partition_by_embedding(emb: EmbeddingVectors, eta: float = 0.05) -> PartPartition:
    """Group vertices whose embedding coordinates fall in the same eta-cell."""
    if eta <= 0:
        raise ValueError("grid side eta must be positive")
    H = emb.H
    n = H.shape[0]
    if H.shape[1] == 0:
        labels = np.zeros(n, dtype=np.int64)
    else:
        snapped = np.round(H, 12)
        cells = np.floor((snapped - snapped.min(axis=0)) / eta).astype(np.int64)
        _, first, inv = np.unique(cells, axis=0, return_index=True, return_inverse=True)
        # number parts by their smallest vertex
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first)] = np.arange(len(first))
        labels = rank[inv.ravel()]
    t = int(labels.max()) + 1 if n else 0
    parts = [np.flatnonzero(labels == i) for i in range(t)]
    reps = np.array([H[p].mean(axis=0) for p in parts]) if t else np.zeros((0, H.shape[1]))
    for p in parts:
        if H.shape[1] and len(p) > 1:
            spread = H[p].max(axis=0) - H[p].min(axis=0)
            assert spread.max() <= eta + 1e-9
    return PartPartition(labels, parts, eta, reps, emb)


@dataclass(eq=False)
class PairClassification:
    mu: float
    edges: np.ndarray  # t x t, ordered pairs (u, v) in V_i x V_j that are edges
    codes: np.ndarray  # t x t of SPARSE / DENSE / IMPURE
    inner: np.ndarray  # t x t centroid inner products a_ij
    sizes: np.ndarray

    def cls(self, i: int, j: int) -> str:
        return CLASS_NAMES[int(self.codes[i, j])]

    def rows(self) -> list[dict]:
        t = len(self.sizes)
        return [{"pair": [i, j], "class": self.cls(i, j), "edges": int(self.edges[i, j]),
                 "a": float(self.inner[i, j])} for i in range(t) for j in range(i, t)]


def _pair_edges(g: Graph, parts: PartPartition) -> np.ndarray:
    P = np.zeros((parts.t, g.n))
    P[parts.labels, np.arange(g.n)] = 1.0
    return np.rint(P @ g.adjacency_matrix(float) @ P.T).astype(np.int64)


def _codes(edges: np.ndarray, sizes: np.ndarray, mu: float) -> np.ndarray:
    cap = np.outer(sizes, sizes).astype(float)
    # dense is tested first; only matters if mu >= 1/2
    return np.where(edges >= (1 - mu) * cap, DENSE, np.where(edges <= mu * cap, SPARSE, IMPURE)).astype(np.int8)


def classify_pairs(g: Graph, parts: PartPartition, mu: float) -> PairClassification:
    if not 0 < mu < 0.5:
        raise ValueError("mu must lie in (0, 0.5)")
    e = _pair_edges(g, parts)
    sizes = parts.sizes
    reps = parts.representatives
    return PairClassification(mu, e, _codes(e, sizes, mu), reps @ reps.T, sizes)


@dataclass(eq=False)
class EigenWitness:
    x: np.ndarray
    rayleigh: float
    triple: tuple  # (i, j, k) part indices
    case: int  # 1 if j != k else 2
    min_part: int = 0

    @property
    def claim_bound(self) -> float:
        return -self.min_part / 10

    def to_dict(self) -> dict:
        return {"x": [float(v) for v in self.x], "rayleigh": self.rayleigh,
                "triple": [int(t) for t in self.triple], "case": self.case, "min_part": self.min_part}


def witness_vector(g: Graph, parts: PartPartition, triple) -> EigenWitness:
    """Test vector +1/|V_i| on V_i and -1/|V_j|, -1/|V_k| on V_j, V_k."""
    i, j, k = triple
    x = np.zeros(g.n)
    x[parts.parts[i]] = 1.0 / len(parts.parts[i])
    x[parts.parts[j]] = -1.0 / len(parts.parts[j])
    x[parts.parts[k]] = -1.0 / len(parts.parts[k])
    A = g.adjacency_matrix(float)
    rq = float(x @ A @ x) / float(x @ x)
    smallest = min(len(parts.parts[i]), len(parts.parts[j]), len(parts.parts[k]))
    return EigenWitness(x, rq, (int(i), int(j), int(k)), 1 if j != k else 2, smallest)


def _quotient_rayleigh(classes: PairClassification, i, j, k) -> float:
    e, s = classes.edges, classes.sizes.astype(float)
    if j != k:
        num = (e[i, i] / s[i] ** 2 + e[j, j] / s[j] ** 2 + e[k, k] / s[k] ** 2
               - 2 * e[i, j] / (s[i] * s[j]) - 2 * e[i, k] / (s[i] * s[k]) + 2 * e[j, k] / (s[j] * s[k]))
        den = 1 / s[i] + 1 / s[j] + 1 / s[k]
    else:
        num = e[i, i] / s[i] ** 2 - 2 * e[i, j] / (s[i] * s[j]) + e[j, j] / s[j] ** 2
        den = 1 / s[i] + 1 / s[j]
    return num / den


def find_eigen_witness(g: Graph, parts: PartPartition, classes: PairClassification,
                       lambda_min: float | None = None) -> EigenWitness | None:
    """Search parts (i, j, k) with (i,j), (i,k) dense and (j,k) sparse.

    Among all such triples the one with the largest smallest part is used
    (ties: lowest Rayleigh quotient). The returned quotient is asserted to be
    at most -min(|V_i|, |V_j|, |V_k|)/10.
    """
    if not classes.mu < 0.1:
        raise ValueError("eigen witness needs mu < 0.1")
    codes, sizes = classes.codes, classes.sizes
    best = None
    for i in range(len(sizes)):
        dense = np.flatnonzero(codes[i] == DENSE)
        for a, j in enumerate(dense):
            for k in dense[a:]:
                if codes[j, k] != SPARSE:
                    continue
                key = (-min(sizes[i], sizes[j], sizes[k]), _quotient_rayleigh(classes, i, j, k))
                if best is None or key < best[0]:
                    best = (key, (i, j, k))
    if best is None:
        return None
    w = witness_vector(g, parts, best[1])
    assert w.rayleigh <= w.claim_bound + 1e-9, "witness misses the -min/10 bound"
    if lambda_min is not None:
        assert w.rayleigh >= lambda_min - 1e-8, "Rayleigh quotient below the least eigenvalue"
    return w


@dataclass(eq=False)
class BadPairCensus:
    delta: float
    mu: float
    t_cap: int
    small: int
    impure: int
    contradiction: int
    independent: dict
    bad: np.ndarray  # n x n bool over ordered pairs
    tail_mass: float
    hypothesis: bool
    bound: float
    status: str  # "pass" | "fail" | "hypothesis-violated"

    @property
    def total(self) -> int:
        return self.small + self.impure + self.contradiction

    def to_dict(self) -> dict:
        return {"delta": self.delta, "mu": self.mu, "t_cap": self.t_cap, "small": self.small,
                "impure": self.impure, "contradiction": self.contradiction, "total": self.total,
                "independent": self.independent, "tail_mass": self.tail_mass,
                "hypothesis": self.hypothesis, "bound": self.bound, "status": self.status}


def bad_pair_census(g: Graph, parts: PartPartition, delta: float, t_cap: int | None = None,
                    classes: PairClassification | None = None) -> BadPairCensus:
    """Count bad ordered vertex pairs in V x V (diagonal included).

    Categories are counted disjointly in priority order: small part, then
    impure pair, then adjacency contradicting the pair class. Classes use
    mu = delta^(1/3). The 4 delta^(1/3) n^2 bound is only claimed when the
    embedding's tail mass is at most delta n^2.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    n = g.n
    mu = delta ** (1.0 / 3.0)
    t_cap = parts.t if t_cap is None else t_cap
    sizes = parts.sizes
    if classes is not None and abs(classes.mu - mu) <= 1e-12:
        codes = classes.codes
    else:
        codes = _codes(_pair_edges(g, parts), sizes, mu)
    lab = parts.labels
    sz = sizes[lab]
    small = np.minimum(sz[:, None], sz[None, :]) <= delta * n / max(t_cap, 1)
    c = codes[np.ix_(lab, lab)]
    adj = g.adj
    impure = c == IMPURE
    contra = ((c == DENSE) & ~adj) | ((c == SPARSE) & adj)
    cat2 = impure & ~small
    cat3 = contra & ~small & ~impure
    bad = small | impure | contra
    tail = parts.embedding.tail_mass
    hyp = tail <= delta * n * n
    bound = 4 * mu * n * n
    total = int(small.sum() + cat2.sum() + cat3.sum())
    if not hyp:
        status = "hypothesis-violated"
    else:
        status = "pass" if total <= bound else "fail"
    return BadPairCensus(delta, mu, int(t_cap), int(small.sum()), int(cat2.sum()), int(cat3.sum()),
                         {"small": int(small.sum()), "impure": int(impure.sum()), "contradiction": int(contra.sum())},
                         bad, float(tail), bool(hyp), float(bound), status)


def good_cherries(g: Graph, bad: np.ndarray) -> tuple[int, tuple | None]:
    """Cherries (u; v, w) whose three vertex pairs are all good.

    Returns the count and one example (center first).
    """
    good = ~bad
    centre = (g.adj & good).astype(np.int64)
    ends = (~g.adj & good).astype(np.int64)
    np.fill_diagonal(ends, 0)
    per_centre = np.einsum("uv,uv->u", centre, centre @ ends) // 2
    total = int(per_centre.sum())
    example = None
    if total:
        u = int(np.flatnonzero(per_centre)[0])
        nb = np.flatnonzero(centre[u])
        sub = ends[np.ix_(nb, nb)]
        a, b = np.argwhere(np.triu(sub, 1))[0]
        example = (u, int(nb[a]), int(nb[b]))
    return total, example


@dataclass(eq=False)
class StructureVerdict:
    outcome: str  # "eigen-witness" | "closeness-evidence" | "hypothesis-violated"
    witness: EigenWitness | None = None
    census: BadPairCensus | None = None
    edit_certificate: object = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"outcome": self.outcome, "census": self.census.to_dict() if self.census else None,
               "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.edit_certificate is not None:
            ec = self.edit_certificate
            out["editCertificate"] = {"editCount": int(ec.edit_count), "mode": ec.mode,
                                      "partition": [int(x) for x in ec.partition]}
        else:
            out["editCertificate"] = None
        return out


def structure_verdict(g: Graph, s: Spectrum, eps: float, gamma: float, delta: float,
                      eta: float = 0.05, mu: float | None = None, seed: int = 0) -> StructureVerdict:
    """Run the partitioning pipeline and return the dichotomy outcome.

    ``mu`` defaults to delta^(1/3) and must be below 0.1.
    """
    n = g.n
    if mu is None:
        mu = delta ** (1.0 / 3.0)
    if not mu < 0.1:
        raise ValueError("mu must be below 0.1")
    if not (0 < eps < 1 and 0 < gamma < 1 and 0 < delta < 1):
        raise ValueError("eps, gamma, delta must lie in (0, 1)")
    prof = ThresholdProfile(s)
    tail = residual_gram_mass(s, prof.level_set(gamma * n))
    details = {"tail_mass": tail, "tail_bound": delta * n * n, "eta": eta, "mu": mu,
               "paper_eta": gamma**9.5}
    if tail > delta * n * n:
        return StructureVerdict("hypothesis-violated", details=details)

    emb = embedding_vectors(s, gamma)
    parts = partition_by_embedding(emb, eta)
    classes = classify_pairs(g, parts, mu)
    census = bad_pair_census(g, parts, delta, classes=classes)
    n_good, example = good_cherries(g, census.bad)
    details.update({"parts": parts.t, "good_cherries": n_good,
                    "paper_part_count_log10": parts.paper_part_count_log10()})

    witness = find_eigen_witness(g, parts, classes, s.lambda_min)
    if witness is None and example is not None and census.mu < 0.1:
        u, v, w = (int(parts.labels[x]) for x in example)
        witness = witness_vector(g, parts, (u, v, w))
        assert witness.rayleigh <= witness.claim_bound + 1e-9
        assert witness.rayleigh >= s.lambda_min - 1e-8
    if witness is not None:
        return StructureVerdict("eigen-witness", witness, census, details=details)

    cherries = cherry_count(g)
    if n <= EXACT_CLUSTER_CAP:
        cert = cluster_edit(g, "exact")
    else:
        cert = cluster_edit(g, "pivot", seed=seed)
    details.update({
        "cherries": cherries,
        "cherry_bound": 12 * census.mu * n**3,
        "cherry_bound_ok": cherries <= 12 * census.mu * n**3,
        "eps_close": cert.edit_count <= eps * n * n,
    })
    if n_good == 0:
        # every cherry then contains a bad pair
        assert cherries <= census.total * n
    return StructureVerdict("closeness-evidence", None, census, cert, details)
