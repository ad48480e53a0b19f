import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_surplus.graph import Graph, family, triangle_count
from spectral_surplus.spectral import (SpectrumError, check_invariants, decompose, embedding_vectors, energy,
                                       flatness_check, residual_gram_mass, threshold_profile,
                                       triangle_count_spectral)

from helpers import graphs


def fft_spectrum(g):
    # symmetric circulant: eigenvalues are the DFT of the first row
    return np.sort(np.fft.fft(g.adj[0].astype(float)).real)[::-1]


def test_k4():
    s = decompose(family("complete", n=4))
    assert np.allclose(s.lambdas, [3, -1, -1, -1])


def test_k33():
    s = decompose(family("complete_bipartite", a=3, b=3))
    assert np.allclose(s.lambdas, [3, 0, 0, 0, 0, -3], atol=1e-12)


def test_c8_closed_form():
    s = decompose(family("cycle", n=8))
    r = math.sqrt(2)
    assert np.allclose(s.lambdas, [2, r, r, 0, 0, -r, -r, -2], atol=1e-12)


@pytest.mark.parametrize("g", [
    family("cycle", n=17), family("paley", q=29), family("circulant", n=20, connections=[1, 19, 4, 16, 10]),
    family("complete", n=9), family("circulant", n=64, connections=[1, 63, 8, 56]),
], ids=["c17", "paley29", "circ20", "k9", "circ64"])
def test_circulant_fft_oracle(g):
    assert np.max(np.abs(decompose(g).lambdas - fft_spectrum(g))) <= 1e-8


def test_empty_graph_needs_vertices():
    with pytest.raises(SpectrumError):
        decompose(Graph.empty(0))


def test_energy_examples():
    for n in (2, 5, 9):
        assert energy(decompose(family("complete", n=n))) == pytest.approx(2 * (n - 1))
    assert energy(decompose(family("empty", n=5))) == 0
    assert energy(decompose(family("turan", n=6, r=2))) == pytest.approx(6)


def test_threshold_profile_k4():
    s = decompose(family("complete", n=4))
    prof = threshold_profile(s)
    assert prof.level_set(2).tolist() == [0]
    assert prof.S(2) == pytest.approx(3)
    assert prof.S(0) == pytest.approx(energy(s) / 2)
    assert prof.count(3.5) == 0 and prof.S(3.5) == 0


def test_spectral_triangles():
    for g, t in ((family("complete", n=4), 4), (family("cycle", n=5), 0), (family("turan", n=6, r=2), 0)):
        assert triangle_count_spectral(decompose(g)) == pytest.approx(t, abs=1e-9)


def test_flatness_examples():
    s = decompose(family("complete", n=4))
    assert np.max(np.abs(s.vectors[:, 0])) == pytest.approx(0.5)
    assert flatness_check(s).passed
    s = decompose(family("turan", n=6, r=2))
    rep = flatness_check(s)
    assert rep.passed and set(rep.slack) == {0, 5}  # zero eigenvalues skipped
    assert rep.slack[0] == pytest.approx(math.sqrt(6) / 3 - 1 / math.sqrt(6))


def test_embedding_examples():
    e = embedding_vectors(decompose(family("complete", n=4)), 0.5)
    assert e.indices.tolist() == [0]
    assert np.allclose(e.H, math.sqrt(3) / 2)
    e = embedding_vectors(decompose(family("empty", n=5)), 0.5)
    assert e.H.shape == (5, 0)
    e = embedding_vectors(decompose(family("turan", n=6, r=2)), 0.4)
    assert np.allclose(e.H, 1 / math.sqrt(2))
    with pytest.raises(ValueError):
        embedding_vectors(decompose(family("complete", n=4)), 0.1)


def test_residual_gram_mass_examples():
    s = decompose(family("complete", n=4))
    assert residual_gram_mass(s, [0]) == pytest.approx(3)
    assert residual_gram_mass(s, []) == pytest.approx(12)
    assert residual_gram_mass(decompose(family("turan", n=6, r=2)), [0]) == pytest.approx(9)


def test_sign_and_tie_conventions():
    s = decompose(family("petersen"))
    for col in s.vectors.T:
        first = col[np.abs(col) > 1e-12][0]
        assert first > 0
    # repeat decomposition is bitwise stable
    t = decompose(family("petersen"))
    assert np.array_equal(s.vectors, t.vectors)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=12))
def test_identities_property(g):
    s = decompose(g)
    assert not check_invariants(s)
    assert abs(s.lambdas.sum()) <= 1e-9 * max(1, g.n)
    assert abs(np.sum(s.lambdas**2) - 2 * g.m) <= 1e-9 * max(1, g.n)
    assert round(triangle_count_spectral(s)) == triangle_count(g)
    assert flatness_check(s, tol=1e-8).passed
    if s.lambda_min < 0:
        assert energy(s) <= 2 * g.n * -s.lambda_min + 1e-9


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=12), st.floats(0, 12), st.floats(0, 12))
def test_threshold_sum_monotone(g, a, b):
    prof = threshold_profile(decompose(g))
    lo, hi = sorted((a, b))
    assert prof.S(hi) <= prof.S(lo) + 1e-12


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=12), st.floats(0.05, 0.95))
def test_residual_gram_mass_frobenius(g, gamma):
    s = decompose(g)
    if gamma * g.n < 1:
        return
    idx = threshold_profile(s).level_set(gamma * g.n)
    approx = (s.vectors[:, idx] * s.lambdas[idx]) @ s.vectors[:, idx].T
    fro = float(np.sum((approx - s.adjacency) ** 2))
    assert residual_gram_mass(s, idx) == pytest.approx(fro, abs=1e-8 * g.n)
