import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeclust.errors import ParameterError
from edgeclust.similarity import (
    SimilarityKind, combined_weight, filter_coefficients, jaccard, similarity,
    similarity_from_counts, simplicial, size_filtered, time_kernel,
)

# frozen with mpmath at 30 digits
JACCARD_AB = 0.333333333333333333333333333333
WEIGHT_AB = 0.471404520791031682933896241403
FILTERED_10_13 = 0.769230769230769230769230769231


def test_jaccard_unit_value():
    assert jaccard({"x", "y"}, {"y", "z"}) == pytest.approx(JACCARD_AB, abs=1e-12)
    assert jaccard({"a", "b"}, {"c"}) == 0.0


def test_time_kernel_and_weight():
    assert time_kernel(7, 7, 30) == 1.0
    assert time_kernel(0, 15, 30) == 0.5
    assert time_kernel(0, 30, 30) == 0.0
    assert time_kernel(45, 0, 30) == 0.0
    assert combined_weight(1, 1) == 1.0
    assert combined_weight(0.7, 0) == 0.0
    assert combined_weight(1 / 3, 2 / 3) == pytest.approx(WEIGHT_AB, abs=1e-12)


@pytest.mark.parametrize("sigma", [0, -1.0, float("nan")])
def test_time_kernel_rejects_bad_sigma(sigma):
    with pytest.raises(ParameterError):
        time_kernel(0, 1, sigma)


def test_simplicial():
    assert simplicial({1, 2}, {1, 2, 3}) == 1
    assert simplicial({1, 2, 3}, {1, 2, 3}) == 1
    assert simplicial({1, 4}, {1, 2, 3}) == 0


def test_size_filter_boundary():
    a = set(range(10))
    assert size_filtered(a, set(range(13))) == pytest.approx(FILTERED_10_13, abs=1e-12)
    # 10 * 1.1 + 2 = 13 exactly, so 13 passes and 14 does not
    assert size_filtered(a, set(range(14))) == 0.0


def test_filter_coefficients_are_exact():
    assert filter_coefficients(1.1, 2.0) == (11, 20, 10)
    assert filter_coefficients(1.0, 0.0) == (1, 0, 1)
    assert filter_coefficients(1.25, 0.5) == (5, 2, 4)


def test_empty_sets_rejected():
    with pytest.raises(ValueError):
        jaccard(set(), {1})


def test_kind_aliases_and_validation():
    assert SimilarityKind("fil").name == "size_filtered"
    assert SimilarityKind("Size-Filtered").code == 2
    with pytest.raises(ParameterError):
        SimilarityKind("cosine")
    with pytest.raises(ParameterError):
        SimilarityKind("size_filtered", slack_ratio=0.9)


sets = st.frozensets(st.integers(0, 20), min_size=1, max_size=12)
KINDS = [SimilarityKind(k) for k in ("jaccard", "simplicial", "size_filtered")]


@settings(max_examples=300, deadline=None)
@given(sets, sets)
def test_similarity_properties(a, b):
    jac = jaccard(a, b)
    fil = size_filtered(a, b)
    assert 0.0 <= jac <= 1.0
    assert jac == jaccard(b, a)
    assert fil == size_filtered(b, a)
    assert simplicial(a, b) == simplicial(b, a)
    assert fil <= jac
    assert (jac == 1.0) == (a == b)
    if simplicial(a, b):
        assert jac == pytest.approx(min(len(a), len(b)) / max(len(a), len(b)), abs=1e-15)
    assert jaccard(a, a) == 1.0


@settings(max_examples=200, deadline=None)
@given(sets, sets, st.sampled_from(KINDS))
def test_counts_route_matches_sets(a, b, kind):
    got = similarity_from_counts([len(a & b)], [len(a)], [len(b)], kind)[0]
    assert got == similarity(a, b, kind)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(0.01, 500), st.floats(0.01, 500))
def test_time_kernel_properties(t1, t2, s1, s2):
    k = time_kernel(t1, t2, s1)
    assert 0.0 <= k <= 1.0
    assert k == time_kernel(t2, t1, s1)
    lo, hi = sorted((s1, s2))
    assert time_kernel(t1, t2, lo) <= time_kernel(t1, t2, hi)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_combined_weight_properties(s, t):
    w = combined_weight(s, t)
    assert 0.0 <= w <= 1.0
    assert w <= max(s, t) + 1e-15
    assert (w == 0.0) == (s * t == 0.0)
    assert w == pytest.approx(np.sqrt(s) * np.sqrt(t), abs=1e-15)
