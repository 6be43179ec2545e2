"""Structural similarities between hyperedge member sets, the time kernel, and
the combined line-graph weight.

Scalar functions take Python sets and are the reference definitions.  The
``*_from_counts`` helpers evaluate the same quantities from intersection
counts and edge sizes, vectorized over numpy arrays; the accelerated kernels
follow exactly the same floating-point operation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParameterError

JACCARD, SIMPLICIAL, SIZE_FILTERED = 0, 1, 2
_KIND_CODES = {"jaccard": JACCARD, "simplicial": SIMPLICIAL, "size_filtered": SIZE_FILTERED}


@dataclass(frozen=True)
class SimilarityKind:
    name: str = "jaccard"
    slack_ratio: float = 1.1
    slack_offset: float = 2.0

    def __post_init__(self):
        name = self.name.lower().replace("-", "_")
        if name in ("filtered", "fil"):
            name = "size_filtered"
        if name not in _KIND_CODES:
            raise ParameterError(f"unknown similarity {self.name!r}; expected one of {sorted(_KIND_CODES)}")
        object.__setattr__(self, "name", name)
        if not self.slack_ratio >= 1:
            raise ParameterError("slack_ratio must be >= 1")
        if not self.slack_offset >= 0:
            raise ParameterError("slack_offset must be >= 0")

    @property
    def code(self) -> int:
        return _KIND_CODES[self.name]

    def filter_coefficients(self) -> tuple[int, int, int]:
        """Integers ``(a, b, q)`` such that the size filter reads ``min*a + b >= max*q``."""
        return filter_coefficients(self.slack_ratio, self.slack_offset)


def filter_coefficients(slack_ratio: float, slack_offset: float) -> tuple[int, int, int]:
    # decimal reading of the parameters, so 1.1 is exactly 11/10
    r = Fraction(repr(float(slack_ratio)))
    o = Fraction(repr(float(slack_offset)))
    q = r.denominator * o.denominator // math.gcd(r.denominator, o.denominator)
    return int(r * q), int(o * q), int(q)


def _check_nonempty(a, b):
    if not a or not b:
        raise ValueError("member sets must be non-empty")


def jaccard(a: set, b: set) -> float:
    _check_nonempty(a, b)
    inter = len(a & b)
    return inter / (len(a) + len(b) - inter)


def simplicial(a: set, b: set) -> int:
    _check_nonempty(a, b)
    return int(a <= b or b <= a)


def size_filtered(a: set, b: set, slack_ratio: float = 1.1, slack_offset: float = 2.0) -> float:
    _check_nonempty(a, b)
    ra, ro, q = filter_coefficients(slack_ratio, slack_offset)
    lo, hi = min(len(a), len(b)), max(len(a), len(b))
    if lo * ra + ro >= hi * q:
        return jaccard(a, b)
    return 0.0


def time_kernel(ti: float, tj: float, sigma: float) -> float:
    if not sigma > 0:
        raise ParameterError("sigma must be positive")
    return max(1.0 - abs(ti - tj) / sigma, 0.0)


def combined_weight(s: float, t: float) -> float:
    return math.sqrt(s * t)


def similarity(a: set, b: set, kind: SimilarityKind) -> float:
    if kind.code == JACCARD:
        return jaccard(a, b)
    if kind.code == SIMPLICIAL:
        return float(simplicial(a, b))
    return size_filtered(a, b, kind.slack_ratio, kind.slack_offset)


def similarity_from_counts(inter, size_i, size_j, kind: SimilarityKind) -> np.ndarray:
    inter = np.asarray(inter, dtype=np.int64)
    size_i = np.asarray(size_i, dtype=np.int64)
    size_j = np.asarray(size_j, dtype=np.int64)
    lo = np.minimum(size_i, size_j)
    if kind.code == SIMPLICIAL:
        return (inter == lo).astype(np.float64)
    jac = inter / (size_i + size_j - inter)
    if kind.code == JACCARD:
        return jac
    ra, ro, q = kind.filter_coefficients()
    hi = np.maximum(size_i, size_j)
    return np.where(lo * ra + ro >= hi * q, jac, 0.0)


def weight_from_counts(inter, size_i, size_j, t_i, t_j, sigma: float, kind: SimilarityKind) -> np.ndarray:
    s = similarity_from_counts(inter, size_i, size_j, kind)
    t = np.maximum(1.0 - np.abs(np.asarray(t_i) - np.asarray(t_j)) / sigma, 0.0)
    return np.sqrt(s * t)
