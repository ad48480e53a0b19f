import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graphs
from spectral_surplus.graph import family
from spectral_surplus.probe import (ProbeVector, Subspace, clip, clip_rows, hadamard_identity_check,
                                    hadamard_span, product_vectors, sample_gaussian, sample_gaussian_batch,
                                    truncation_effect_estimate)
from spectral_surplus.spectral import decompose, threshold_profile


def test_span_k4():
    w = hadamard_span(decompose(family("complete", n=4)), 2)
    assert w.dim == 1
    assert np.allclose(np.abs(w.basis[:, 0]), 0.5)


def test_span_k2():
    w = hadamard_span(decompose(family("complete", n=2)), 0.5)
    assert w.dim == 1
    assert np.allclose(np.abs(w.basis[:, 0]), 1 / math.sqrt(2))


def test_span_k33():
    assert hadamard_span(decompose(family("turan", n=6, r=2)), 2).dim == 1


def test_span_empty_level_set():
    with pytest.raises(ValueError):
        hadamard_span(decompose(family("complete", n=4)), 5)


@pytest.mark.parametrize("g", [family("petersen"), family("union_cliques", sizes=[5, 4, 3]),
                               family("erdos_renyi", n=32, p=0.3, seed=4), family("paley", q=29)],
                         ids=["petersen", "cliques", "er32", "paley29"])
def test_span_dim_matches_gram_rank(g):
    s = decompose(g)
    for T in (0.1, 1.0, s.lambda_max / 2):
        w = hadamard_span(s, T)
        P, _ = product_vectors(s, threshold_profile(s).level_set(T))
        ev = np.linalg.eigvalsh(P.T @ P)
        rank = int(np.sum(ev > ev.max() * len(ev) * np.finfo(float).eps))
        assert w.dim == rank
        assert np.allclose(w.basis.T @ w.basis, np.eye(w.dim), atol=1e-10)
        # every product vector lies in the span
        assert np.allclose(w.project(P), P, atol=1e-8)


def test_sample_in_dim_one():
    w = hadamard_span(decompose(family("complete", n=4)), 2)
    q = sample_gaussian(w, seed=11)
    b = w.basis[:, 0]
    assert np.allclose(q.entries, (q.entries @ b) * b)


def test_sample_reproducible_by_index():
    w = Subspace(np.eye(6))
    batch = sample_gaussian_batch(w, 5, 4)
    assert np.array_equal(batch[3], sample_gaussian(w, 5, 3).entries)
    assert not np.array_equal(batch[0], batch[1])


def test_gaussian_moments():
    s = decompose(family("petersen"))
    w = hadamard_span(s, 1.0)
    Q = sample_gaussian_batch(w, 0, 10_000)
    assert np.mean(np.sum(Q * Q, axis=1)) == pytest.approx(w.dim, rel=0.05)
    probe = np.arange(10.0) - 3.0
    target = float(np.sum(w.project(probe) ** 2))
    assert np.mean((Q @ probe) ** 2) == pytest.approx(target, rel=0.05)


def test_clip_examples():
    assert np.array_equal(clip(np.zeros(3), 2.0), np.zeros(3))
    out = clip(np.array([3.0, -1.0]), 1.0)
    assert np.allclose(out, [math.sqrt(5), -1.0])
    q = np.array([1.0, -2.0, 0.5])
    beta = math.sqrt(3) * 2 / np.linalg.norm(q)
    assert np.array_equal(clip(q, beta), q)
    with pytest.raises(ValueError):
        clip(q, 0.5)


def test_clip_probe_vector():
    q = ProbeVector(np.array([3.0, -1.0]), seed=1)
    c = clip(q, 1.0)
    assert c.clipped and c.beta == 1.0 and c.seed == 1


def test_clip_not_idempotent_in_general():
    # clipping shrinks the norm and hence the clamp level
    once = clip(np.array([3.0, -1.0]), 1.0)
    twice = clip(once, 1.0)
    assert np.allclose(twice, [math.sqrt(3), -1.0])
    assert not np.allclose(once, twice)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=30), st.floats(1, 20))
def test_clip_norm_properties(vals, beta):
    q = np.array(vals)
    c = clip(q, beta)
    nq = np.linalg.norm(q)
    assert np.linalg.norm(c) <= nq + 1e-9 * (1 + nq)
    assert np.linalg.norm(q - c) <= nq + 1e-9 * (1 + nq)
    cap = beta * nq / math.sqrt(len(vals))
    assert np.all(np.abs(c) <= cap + 1e-12 * (1 + cap))
    # clamp inactive on a vector already within its own cap
    if np.all(np.abs(q) <= cap):
        assert np.array_equal(c, q)


def test_identity_k2():
    s = decompose(family("complete", n=2))
    chk = hadamard_identity_check(s, np.array([1.0, 0.0]))
    assert chk.lhs == pytest.approx(0, abs=1e-12) and chk.rhs == pytest.approx(0, abs=1e-12)
    assert chk.passed


def test_identity_zero_probe():
    chk = hadamard_identity_check(decompose(family("petersen")), np.zeros(10))
    assert chk.passed and chk.lhs == 0


def test_identity_petersen_random():
    s = decompose(family("petersen"))
    w = Subspace(np.eye(10))
    for i in range(100):
        q = sample_gaussian(w, 3, i)
        assert hadamard_identity_check(s, q).passed
        assert hadamard_identity_check(s, clip(q, 1.5)).passed


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=12), st.integers(0, 10**6))
def test_identity_property(g, seed):
    s = decompose(g)
    q = sample_gaussian(Subspace(np.eye(g.n)), seed)
    assert hadamard_identity_check(s, q).passed
    assert hadamard_identity_check(s, clip(q, 1.0)).passed


def test_truncation_unclipped():
    s = decompose(family("petersen"))
    rep = truncation_effect_estimate(s, 2.0, samples=2000, beta=math.inf)
    assert rep.passed
    for r in rep.rows:
        if r["part"] == 2:
            assert r["mean"] <= 1 + 4 * r["stderr"] + 1e-12


def test_truncation_k4():
    rep = truncation_effect_estimate(decompose(family("complete", n=4)), 2.0, samples=10_000)
    part1 = [r for r in rep.rows if r["part"] == 1]
    assert [r["pair"] for r in part1] == [[0, 0]]
    assert rep.passed


def test_truncation_union_of_k8():
    s = decompose(family("union_cliques", sizes=[8] * 8))
    assert truncation_effect_estimate(s, 4 * math.sqrt(64) / 8, samples=10_000).passed


def test_truncation_errors():
    s = decompose(family("complete", n=4))
    with pytest.raises(ValueError):
        truncation_effect_estimate(s, 2.0, samples=50)
    with pytest.raises(ValueError):
        truncation_effect_estimate(s, 3.5)
    with pytest.raises(ValueError):
        truncation_effect_estimate(s, 0.0)


def test_clip_rows_matches_clip():
    Q = np.random.default_rng(5).standard_normal((7, 12))
    out = clip_rows(Q, 1.5)
    for q, row in zip(Q, out):
        assert np.allclose(clip(q, 1.5), row)
    assert np.array_equal(clip_rows(Q, math.inf), Q)
