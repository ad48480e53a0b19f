"""Shared hypothesis strategies and brute-force oracles for the tests."""

import itertools
import math

import numpy as np
from hypothesis import strategies as st

from spectral_surplus.graph import Graph


@st.composite
def graphs(draw, max_n=9, min_n=1):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    pairs = itertools.combinations(range(n), 2)
    return Graph.from_edges(n, [e for e, b in zip(pairs, bits) if b])


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def bell_min_edits(g):
    best = math.inf
    for part in set_partitions(list(range(g.n))):
        lab = np.empty(g.n, dtype=int)
        for i, block in enumerate(part):
            lab[block] = i
        same = lab[:, None] == lab[None, :]
        cost = int(np.sum(np.triu(same != g.adj, 1)))
        best = min(best, cost)
    return best


def brute_force_maxcut(g):
    """Max-cut by enumerating every side vector with vertex 0 fixed."""
    n = g.n
    if n <= 1:
        return 0
    codes = np.arange(2 ** (n - 1), dtype=np.int64)
    sides = ((codes[:, None] >> np.arange(n - 1)) & 1).astype(bool)
    sides = np.hstack([np.zeros((len(codes), 1), dtype=bool), sides])
    E = np.array(g.edges(), dtype=np.int64).reshape(-1, 2)
    if len(E) == 0:
        return 0
    return int(np.max(np.sum(sides[:, E[:, 0]] != sides[:, E[:, 1]], axis=1)))
