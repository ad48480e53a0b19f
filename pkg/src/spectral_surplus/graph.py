"""Simple undirected graphs, generators, combinatorial counters and edge-list I/O.

The adjacency matrix is kept as a read-only boolean array; neighbourhoods are
also cached as Python integer bitsets so that intersections (triangles,
neighbourhood edge counts) cost one ``&`` and one ``bit_count`` per pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "deg", "m", "_rows")

    def __init__(self, adj):
        a = np.array(adj, dtype=bool, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphError("adjacency must be a square matrix")
        if a.diagonal().any():
            raise GraphError("self-loops are not allowed")
        if not np.array_equal(a, a.T):
            raise GraphError("adjacency must be symmetric")
        a.setflags(write=False)
        deg = a.sum(axis=1).astype(np.int64)
        deg.setflags(write=False)
        self.n = a.shape[0]
        self.adj = a
        self.deg = deg
        self.m = int(deg.sum()) // 2
        self._rows = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        a = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            a[u, v] = a[v, u] = True
        return cls(a)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), dtype=bool))

    @property
    def rows(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as an integer bitset."""
        if self._rows is None:
            packed = np.packbits(self.adj, axis=1, bitorder="little")
            self._rows = tuple(int.from_bytes(r.tobytes(), "little") for r in packed)
        return self._rows

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self.adj, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def adjacency_matrix(self, dtype=float) -> np.ndarray:
        return self.adj.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, np.packbits(self.adj).tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# --------------------------------------------------------------------------
# edge-list text format
# --------------------------------------------------------------------------

def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse ``u v`` lines (0-based) with an optional ``# n=<int>`` header.

    An explicit ``n`` argument overrides the header. Duplicate edges collapse.
    """
    edges = []
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if lineno == 1 and body.startswith("n="):
                try:
                    header_n = int(body[2:])
                except ValueError:
                    raise ParseError(lineno, f"bad header {raw!r}") from None
                if header_n < 0:
                    raise ParseError(lineno, "negative vertex count")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer vertex in {raw!r}") from None
        if u < 0 or v < 0:
            raise ParseError(lineno, "negative vertex index")
        if u == v:
            raise ParseError(lineno, f"self-loop at vertex {u}")
        edges.append((u, v))

    size = n if n is not None else header_n
    top = 1 + max((max(e) for e in edges), default=-1)
    if size is None:
        size = top
    elif top > size:
        raise GraphError(f"vertex index {top - 1} exceeds declared n={size}")
    return Graph.from_edges(size, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"# n={g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_edge_list(g))


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------

FAMILIES = (
    "complete", "turan", "union_cliques", "complete_bipartite", "erdos_renyi",
    "circulant", "paley", "complete_minus_clique",
    # small fixtures used by the corpora and tests
    "empty", "cycle", "path", "star", "petersen", "cherry_blowup", "planted_clique",
)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


@dataclass(frozen=True)
class GraphFamilySpec:
    """A named graph family with its parameters.

    ``sizes`` is used by union_cliques, ``connections`` by circulant,
    ``a``/``b`` by complete_bipartite, ``k`` by complete_minus_clique,
    cherry_blowup (block size) and planted_clique (clique size).
    """

    family: str
    n: int | None = None
    r: int | None = None
    sizes: tuple[int, ...] = ()
    a: int | None = None
    b: int | None = None
    p: float | None = None
    seed: int = 0
    connections: tuple[int, ...] = ()
    q: int | None = None
    k: int | None = None

    def validate(self) -> None:
        f = self.family
        if f not in FAMILIES:
            raise GraphError(f"unknown family {f!r}")

        def need_n(lo=0):
            if self.n is None or self.n < lo:
                raise GraphError(f"{f} needs n >= {lo}")

        if f in ("complete", "empty", "path", "star"):
            need_n(1 if f == "star" else 0)
        elif f == "cycle":
            need_n(3)
        elif f == "turan":
            need_n(0)
            if self.r is None or self.r < 1:
                raise GraphError("turan needs r >= 1")
        elif f == "union_cliques":
            if not self.sizes or min(self.sizes) < 1:
                raise GraphError("union_cliques needs positive sizes")
            if self.n is not None and self.n != sum(self.sizes):
                raise GraphError("union_cliques sizes must sum to n")
        elif f == "complete_bipartite":
            if self.a is None or self.b is None or self.a < 0 or self.b < 0:
                raise GraphError("complete_bipartite needs a, b >= 0")
        elif f == "erdos_renyi":
            need_n(0)
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise GraphError("erdos_renyi needs p in [0, 1]")
        elif f == "circulant":
            need_n(1)
            conn = {c % self.n for c in self.connections}
            if 0 in conn:
                raise GraphError("circulant connection set must exclude 0")
            if conn != {(-c) % self.n for c in conn}:
                raise GraphError("circulant connection set must be symmetric")
        elif f == "paley":
            if self.q is None or not _is_prime(self.q) or self.q % 4 != 1:
                raise GraphError("paley needs a prime q = 1 mod 4")
        elif f == "complete_minus_clique":
            need_n(0)
            if self.k is None or not 0 <= self.k <= self.n:
                raise GraphError("complete_minus_clique needs 0 <= k <= n")
        elif f == "cherry_blowup":
            if self.k is None or self.k < 1:
                raise GraphError("cherry_blowup needs block size k >= 1")
        elif f == "planted_clique":
            need_n(1)
            if self.k is None or not 0 <= self.k <= self.n:
                raise GraphError("planted_clique needs 0 <= k <= n")
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise GraphError("planted_clique needs noise p in [0, 1]")


def _circulant(n: int, conn: Iterable[int]) -> Graph:
    conn = sorted({c % n for c in conn})
    idx = np.arange(n)
    diff = (idx[None, :] - idx[:, None]) % n
    return Graph(np.isin(diff, conn))


def _union_cliques(sizes: Sequence[int]) -> Graph:
    labels = np.repeat(np.arange(len(sizes)), sizes)
    a = labels[:, None] == labels[None, :]
    np.fill_diagonal(a, False)
    return Graph(a)


def _multipartite(labels: np.ndarray) -> Graph:
    return Graph(labels[:, None] != labels[None, :])


def generate(spec: GraphFamilySpec) -> Graph:
    spec.validate()
    f, n = spec.family, spec.n
    if f == "complete":
        a = ~np.eye(n, dtype=bool)
        return Graph(a)
    if f == "empty":
        return Graph.empty(n)
    if f == "turan":
        return _multipartite(np.arange(n) % spec.r)
    if f == "union_cliques":
        return _union_cliques(spec.sizes)
    if f == "complete_bipartite":
        return _multipartite(np.repeat([0, 1], [spec.a, spec.b]))
    if f == "erdos_renyi":
        rng = np.random.default_rng(spec.seed)
        upper = np.triu(rng.random((n, n)) < spec.p, 1)
        return Graph(upper | upper.T)
    if f == "circulant":
        return _circulant(n, spec.connections)
    if f == "paley":
        q = spec.q
        residues = {(x * x) % q for x in range(1, q)}
        return _circulant(q, residues)
    if f == "complete_minus_clique":
        a = ~np.eye(n, dtype=bool)
        a[: spec.k, : spec.k] = False
        return Graph(a)
    if f == "cycle":
        return _circulant(n, (1, n - 1))
    if f == "path":
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if f == "star":
        return Graph.from_edges(n, [(0, i) for i in range(1, n)])
    if f == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return Graph.from_edges(10, outer + spokes + inner)
    if f == "cherry_blowup":
        # blocks A, B, C are cliques; A is complete to B and C; B-C empty
        k = spec.k
        lab = np.repeat([0, 1, 2], k)
        a = (lab[:, None] == lab[None, :]) | ((lab[:, None] == 0) ^ (lab[None, :] == 0))
        np.fill_diagonal(a, False)
        return Graph(a)
    if f == "planted_clique":
        rng = np.random.default_rng(spec.seed)
        upper = np.triu(rng.random((n, n)) < spec.p, 1)
        a = upper | upper.T
        members = rng.choice(n, size=spec.k, replace=False)
        a[np.ix_(members, members)] = True
        np.fill_diagonal(a, False)
        return Graph(a)
    raise GraphError(f"unknown family {f!r}")  # pragma: no cover


def family(name: str, **kw) -> Graph:
    """Shorthand: ``family("turan", n=6, r=2)``."""
    if "sizes" in kw:
        kw["sizes"] = tuple(kw["sizes"])
    if "connections" in kw:
        kw["connections"] = tuple(kw["connections"])
    return generate(GraphFamilySpec(name, **kw))


# --------------------------------------------------------------------------
# subgraphs and counters
# --------------------------------------------------------------------------

def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph induced on ``s``, relabelled by ascending original index."""
    verts = sorted(set(int(v) for v in s))
    if verts and (verts[0] < 0 or verts[-1] >= g.n):
        raise GraphError(f"vertex set not contained in 0..{g.n - 1}")
    idx = np.asarray(verts, dtype=np.int64)
    return Graph(g.adj[np.ix_(idx, idx)])


def triangle_count(g: Graph) -> int:
    rows = g.rows
    total = 0
    for u, v in g.edges():
        # u < v; count common neighbours w > v once per triangle
        total += (rows[u] & rows[v] & ~((1 << (v + 1)) - 1)).bit_count()
    return total


def cherry_count(g: Graph) -> int:
    """Number of induced paths on three vertices (induced K_{1,2})."""
    wedges = sum(d * (d - 1) // 2 for d in g.deg.tolist())
    return wedges - 3 * triangle_count(g)


def degeneracy(g: Graph) -> int:
    deg = g.deg.copy()
    alive = np.ones(g.n, dtype=bool)
    best = 0
    for _ in range(g.n):
        cand = np.where(alive, deg, np.iinfo(np.int64).max)
        v = int(np.argmin(cand))
        best = max(best, int(deg[v]))
        alive[v] = False
        deg[g.adj[v] & alive] -= 1
    return best


def density(g: Graph) -> float:
    """Edge density 2m/n^2."""
    if g.n == 0:
        raise GraphError("density undefined for the graph on zero vertices")
    return 2.0 * g.m / (g.n * g.n)


def neighborhood_edge_counts(g: Graph) -> np.ndarray:
    """e(G[N(v)]) for every vertex v."""
    rows = g.rows
    out = np.zeros(g.n, dtype=np.int64)
    for v in range(g.n):
        rv = rows[v]
        out[v] = sum((rows[u] & rv).bit_count() for u in g.neighbors(v).tolist()) // 2
    return out


# --------------------------------------------------------------------------
# cluster editing
# --------------------------------------------------------------------------

EXACT_CLUSTER_CAP = 12


@dataclass
class ClusterEditResult:
    edit_count: int
    partition: np.ndarray  # vertex -> cluster id
    mode: str  # "exact" | "pivot-heuristic"
    details: dict = field(default_factory=dict)


def partition_edit_count(g: Graph, labels) -> int:
    """Pairs whose adjacency disagrees with the union-of-cliques graph of ``labels``."""
    labels = np.asarray(labels)
    same = labels[:, None] == labels[None, :]
    np.fill_diagonal(same, False)
    return int(np.count_nonzero(same != g.adj)) // 2


def _cluster_exact(g: Graph) -> tuple[int, np.ndarray]:
    n = g.n
    adj = g.adj
    labels = np.full(n, -1, dtype=np.int64)
    best = [n * (n - 1) // 2 + 1, None]
    members: list[list[int]] = []

    # DFS over restricted growth strings with incremental cost; prunes on cost
    def rec(v: int, cost: int):
        if cost >= best[0]:
            return
        if v == n:
            best[0], best[1] = cost, labels.copy()
            return
        row = adj[v]
        nb_before = int(row[:v].sum())
        for c, mem in enumerate(members):
            inside = int(row[mem].sum())
            # missing edges inside c plus edges leaving to other clusters
            delta = (len(mem) - inside) + (nb_before - inside)
            mem.append(v)
            labels[v] = c
            rec(v + 1, cost + delta)
            mem.pop()
        members.append([v])
        labels[v] = len(members) - 1
        rec(v + 1, cost + nb_before)
        members.pop()
        labels[v] = -1

    rec(0, 0)
    return best[0], best[1]


def _pivot_once(g: Graph, rng: np.random.Generator) -> np.ndarray:
    labels = np.full(g.n, -1, dtype=np.int64)
    order = rng.permutation(g.n)
    cid = 0
    for v in order:
        if labels[v] >= 0:
            continue
        grab = g.adj[v] & (labels < 0)
        labels[grab] = cid
        labels[v] = cid
        cid += 1
    return labels


def cluster_edit(g: Graph, mode: str = "exact", seeds: int = 32, seed: int = 0) -> ClusterEditResult:
    """Edit distance to the nearest disjoint union of cliques.

    ``exact`` is capped at n <= 12; ``pivot`` returns the best of ``seeds``
    random-pivot runs, an upper bound on the exact value.
    """
    if mode == "exact":
        if g.n > EXACT_CLUSTER_CAP:
            raise GraphError(f"exact cluster editing capped at n <= {EXACT_CLUSTER_CAP}")
        if g.n == 0:
            return ClusterEditResult(0, np.zeros(0, dtype=np.int64), "exact")
        cost, labels = _cluster_exact(g)
        return ClusterEditResult(cost, labels, "exact")
    if mode == "pivot":
        if seeds < 1:
            raise GraphError("pivot mode needs seeds >= 1")
        best_cost, best_labels = None, np.zeros(g.n, dtype=np.int64)
        for i in range(seeds):
            labels = _pivot_once(g, np.random.default_rng([seed, i]))
            cost = partition_edit_count(g, labels)
            if best_cost is None or cost < best_cost:
                best_cost, best_labels = cost, labels
        return ClusterEditResult(best_cost, best_labels, "pivot-heuristic", {"seeds": seeds, "seed": seed})
    raise GraphError(f"unknown cluster_edit mode {mode!r}")


def brute_force_cherries(g: Graph) -> int:
    """Induced K_{1,2} count by scanning all vertex triples (test oracle)."""
    a = g.adj
    count = 0
    for u, v, w in combinations(range(g.n), 3):
        if int(a[u, v]) + int(a[u, w]) + int(a[v, w]) == 2:
            count += 1
    return count
