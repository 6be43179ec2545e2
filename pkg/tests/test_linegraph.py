import io
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeclust.errors import ParameterError
from edgeclust.hypergraph import TemporalHypergraph, normalize_times
from edgeclust.linegraph import build_line_graph, candidate_pairs, connected_components, write_csv
from edgeclust.similarity import SimilarityKind

from oracles import brute_force_candidates, brute_force_line_graph, random_hypergraph

WEIGHT_AB = 0.471404520791031682933896241403


def hg(edges, times):
    return normalize_times(TemporalHypergraph.from_lists(edges, times=times))


@pytest.fixture
def three_edges():
    return hg([["a", "b"], ["b", "c"], ["d", "e"]], [0, 10, 5])


def test_candidates_example(three_edges):
    assert list(candidate_pairs(three_edges, 30)) == [(0, 1)]
    assert list(candidate_pairs(three_edges, 5)) == []
    assert list(candidate_pairs(hg([["a"]], [0]), 100)) == []


def test_line_graph_example(backend, three_edges):
    LG = build_line_graph(three_edges, 30, "jaccard")
    assert LG.edge_dict() == {(0, 1): pytest.approx(WEIGHT_AB, abs=1e-12)}
    assert build_line_graph(three_edges, 30, "simplicial").n_edges == 0
    assert build_line_graph(three_edges, 5).n_edges == 0


def test_duplicate_edges_weight_one(backend):
    LG = build_line_graph(hg([["a", "b"], ["b", "a"]], [3, 3]), 1)
    assert LG.weights.tolist() == [1.0]


def test_components_examples(backend, three_edges):
    comp = connected_components(build_line_graph(three_edges, 30))
    assert comp.component_count == 2
    assert comp.large_component_count == 0
    assert comp.labels.tolist() == [0, 0, 1]
    chain = hg([[f"v{k}", f"v{k + 1}"] for k in range(12)], list(range(12)))
    comp = connected_components(build_line_graph(chain, 5))
    assert (comp.component_count, comp.large_component_count) == (1, 1)
    lonely = hg([[f"v{k}"] for k in range(7)], [0] * 7)
    assert connected_components(build_line_graph(lonely, 5)).component_count == 7


def test_bad_sigma(three_edges):
    for sigma in (0, -2, float("inf"), float("nan")):
        with pytest.raises(ParameterError):
            build_line_graph(three_edges, sigma)


def test_requires_normalized_times():
    H = TemporalHypergraph.from_lists([["a"]], times=["2018-01-01"])
    with pytest.raises(ValueError, match="normalize"):
        build_line_graph(H, 1)
    assert normalize_times(H).times.tolist() == [0.0]


def test_csv_dump(backend, three_edges):
    buf = io.StringIO()
    write_csv(build_line_graph(three_edges, 30), buf)
    assert buf.getvalue() == "i,j,w\n0,1,0.471404520791\n"


@pytest.mark.parametrize("kind", ["jaccard", "simplicial", "size_filtered"])
@pytest.mark.parametrize("sigma", [5.0, 20.0, 50.0])
def test_matches_brute_force(backend, kind, sigma):
    rng = np.random.default_rng(hash((kind, sigma)) % 2**32)
    sk = SimilarityKind(kind)
    for _ in range(15):
        members, times = random_hypergraph(rng, int(rng.integers(1, 41)), int(rng.integers(1, 16)))
        H = normalize_times(TemporalHypergraph.from_lists([sorted(m) for m in members], times=times))
        sets = H.member_sets()
        expect = brute_force_line_graph(sets, H.times.tolist(), sigma, sk)
        got = build_line_graph(H, sigma, sk).edge_dict()
        assert got.keys() == expect.keys()
        for k, w in expect.items():
            assert abs(got[k] - w) <= 1e-12
        assert set(candidate_pairs(H, sigma)) == brute_force_candidates(sets, H.times.tolist(), sigma)


def test_integer_times_window_is_strict(backend):
    H = hg([["a"], ["a"], ["a"]], [0, 10, 20])
    assert build_line_graph(H, 10).n_edges == 0
    assert build_line_graph(H, 10.5).edge_dict().keys() == {(0, 1), (1, 2)}


def test_output_sorted_and_worker_independent(backend):
    rng = np.random.default_rng(3)
    members, times = random_hypergraph(rng, 300, 40)
    H = normalize_times(TemporalHypergraph.from_lists([sorted(m) for m in members], times=times))
    ref = build_line_graph(H, 30, workers=1)
    keys = ref.rows.astype(np.int64) * H.n_edges + ref.cols
    assert (np.diff(keys) > 0).all()
    assert (ref.rows < ref.cols).all()
    for w in (2, 5):
        LG = build_line_graph(H, 30, workers=w)
        assert np.array_equal(LG.rows, ref.rows)
        assert np.array_equal(LG.cols, ref.cols)
        assert np.array_equal(LG.weights, ref.weights)


def test_degree_cap_warns_and_drops(backend, caplog):
    H = hg([["hub", "a"], ["hub", "b"], ["hub", "c"], ["a", "x"]], [0, 1, 2, 3])
    with caplog.at_level(logging.WARNING):
        LG = build_line_graph(H, 10, max_degree=2)
    assert "hub" in caplog.text
    assert set(LG.edge_dict()) == {(0, 3)}
    full = build_line_graph(H, 10).edge_dict()
    assert LG.edge_dict()[(0, 3)] == full[(0, 3)]


edge_lists = st.lists(st.lists(st.integers(0, 9), min_size=1, max_size=5), min_size=2, max_size=30)


@settings(max_examples=60, deadline=None)
@given(edge_lists, st.data(), st.floats(0.5, 40), st.floats(0.5, 40), st.sampled_from(["jaccard", "simplicial", "fil"]))
def test_monotone_in_sigma(edges, data, s1, s2, kind):
    times = data.draw(st.lists(st.integers(0, 60), min_size=len(edges), max_size=len(edges)))
    H = hg(edges, times)
    lo, hi = sorted((s1, s2))
    a = build_line_graph(H, lo, kind)
    b = build_line_graph(H, hi, kind)
    assert set(a.edge_dict()) <= set(b.edge_dict())
    assert connected_components(a).component_count >= connected_components(b).component_count
    # nonzero weight implies a shared vertex
    sets = H.member_sets()
    for i, j in zip(b.rows.tolist(), b.cols.tolist()):
        assert sets[i] & sets[j]
