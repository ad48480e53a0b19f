import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graphs
from spectral_surplus.graph import Graph, GraphError, family, induced_subgraph, triangle_count
from spectral_surplus.increment import (DOUBLE, EARLY_EXIT, SQRT, default_regime_cap, densest_neighborhood,
                                        increment_loop, increment_step, peel_high_degree, potential)


def clique_plus_isolated(k, extra):
    return Graph.from_edges(k + extra, [(i, j) for i in range(k) for j in range(i + 1, k)])


def test_peel_examples():
    R, rem, keep = peel_high_degree(family("complete", n=10), 20)
    assert len(R) == 0 and rem.n == 10
    R, rem, keep = peel_high_degree(family("star", n=10), 5)
    assert R.tolist() == [0] and rem.n == 9 and rem.m == 0
    R, rem, keep = peel_high_degree(family("complete", n=10), 5)
    assert R.tolist() == [0, 1, 2, 3, 4] and rem.n == 5 and rem.m == 10
    assert keep.tolist() == [5, 6, 7, 8, 9]
    with pytest.raises(ValueError):
        peel_high_degree(family("complete", n=3), 0)


def test_densest_neighborhood_examples():
    assert densest_neighborhood(family("complete", n=4)) == (0, 3)
    assert densest_neighborhood(family("cycle", n=5)) == (0, 0)
    g = Graph.from_edges(6, [(i, j) for i in range(5) for j in range(i + 1, 5)] + [(4, 5)])
    v0, e = densest_neighborhood(g)
    assert v0 < 5 and e == 6
    with pytest.raises(GraphError):
        densest_neighborhood(Graph.from_edges(0, []))


def test_potential_examples():
    assert potential(0.1, 100) == pytest.approx(0.1)
    assert potential(1, 37) == 37
    assert potential(0, 37) == 0
    with pytest.raises(ValueError):
        potential(1.5, 3)


def test_regime_cap():
    # the sqrt step gains kappa^3 p^(5/2) n against p^3 n
    kappa = 1e-2
    p = default_regime_cap(kappa)
    assert kappa**3 * p**2.5 >= p**3 * (1 - 1e-9)
    assert kappa**3 * (2 * p) ** 2.5 < (2 * p) ** 3


def test_step_complete_graph():
    # W is all of K_n, so the density does not move
    step = increment_step(family("complete", n=12))
    assert step.case == SQRT and len(step.peeled) == 0
    assert step.n1 == 12 and step.p1 == step.p0


def test_step_clique_plus_isolated():
    g = clique_plus_isolated(20, 200)
    step = increment_step(g)
    p0 = 2 * 190 / 220**2
    assert step.p0 == pytest.approx(p0)
    assert step.case == DOUBLE
    assert set(range(20)) <= set(step.output_vertices.tolist())
    assert step.n1 == math.ceil(220 / 8)
    assert step.p1 >= 2 * p0 and step.p1 >= 1e-2 * math.sqrt(p0)


def test_step_empty_raises():
    with pytest.raises(GraphError):
        increment_step(family("empty", n=5))


def test_loop_clique_plus_isolated():
    # the second step is a fixed point just short of 0.5
    tr = increment_loop(clique_plus_isolated(20, 200), target=0.5)
    assert [s.case for s in tr.steps] == [DOUBLE, SQRT]
    assert tr.reason == "step-cap" and tr.steps[-1].details["fixed_point"]
    assert set(range(20)) <= set(tr.final_vertices.tolist())
    assert tr.final_density == pytest.approx(2 * 190 / 28**2)
    tr = increment_loop(clique_plus_isolated(20, 200), target=0.45)
    assert tr.reason == "density-target" and len(tr.final_vertices) == 28


def test_loop_union_of_k4():
    tr = increment_loop(family("union_cliques", sizes=[4] * 25), target=0.7)
    assert tr.reason == "step-cap"
    assert tr.final_density == pytest.approx(0.05)
    assert len(tr.final_vertices) == 60


def test_loop_empty():
    tr = increment_loop(family("empty", n=8))
    assert tr.reason == "precondition-failed" and tr.steps[0].case == EARLY_EXIT


def test_loop_already_dense():
    tr = increment_loop(family("complete", n=6), target=0.3)
    assert tr.reason == "density-target" and tr.steps == []


def test_loop_bad_args():
    g = family("complete", n=4)
    with pytest.raises(ValueError):
        increment_loop(g, target=1.0)
    with pytest.raises(ValueError):
        increment_loop(g, step_cap=0)


def test_trace_rows():
    tr = increment_loop(clique_plus_isolated(20, 200), target=0.45)
    rows = tr.rows()
    assert [r["step"] for r in rows] == [0]
    assert set(rows[0]) == {"step", "n_i", "p_i", "case", "R", "potential"}
    assert rows[0]["potential"] == pytest.approx(potential(rows[0]["p_i"], 220))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=14), st.sampled_from([1, 2, 3, 5]))
def test_peel_properties(g, threshold):
    R, rem, keep = peel_high_degree(g, threshold)
    alive = np.ones(g.n, dtype=bool)
    for v in R:
        assert g.adj[v, alive].sum() >= threshold
        alive[v] = False
    assert keep.tolist() == np.flatnonzero(alive).tolist()
    assert rem.n == 0 or rem.deg.max() < threshold


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=14))
def test_neighborhood_identity(g):
    a = g.adj
    counts = [int(a[np.ix_(a[v], a[v])].sum()) // 2 for v in range(g.n)]
    assert 2 * sum(counts) == 6 * triangle_count(g)
    if g.n:
        v0, e = densest_neighborhood(g)
        assert e == max(counts) and v0 == counts.index(e)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=16, min_n=2))
def test_step_postconditions(g):
    if g.m == 0:
        return
    step = increment_step(g)
    assert set(step.output_vertices.tolist()) <= set(step.input_vertices.tolist())
    sub = induced_subgraph(g, step.output_vertices)
    if step.case == DOUBLE:
        assert step.n1 >= step.n0 / 8 and step.p1 >= 2 * step.p0
        assert set(step.peeled.tolist()) <= set(step.output_vertices.tolist())
    elif step.case == SQRT:
        assert step.n1 >= step.p0 * step.n0 and step.p1 >= 1e-2 * math.sqrt(step.p0)
    if step.case != EARLY_EXIT:
        assert step.p1 == pytest.approx(2 * sub.m / sub.n**2)


@settings(max_examples=40, deadline=None)
@given(st.integers(40, 120), st.floats(0.01, 0.2), st.integers(0, 10**6))
def test_potential_monotone_in_regime(n, p, seed):
    g = family("erdos_renyi", n=n, p=p, seed=seed)
    tr = increment_loop(g, target=0.3)
    assert tr.monotone_violations() == []
    # a double-density step never lowers p^3 n, whatever the density
    for s in tr.steps:
        if s.case == DOUBLE:
            assert potential(min(s.p1, 1), s.n1) >= potential(s.p0, s.n0) * (1 - 1e-9)
