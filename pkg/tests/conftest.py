from itertools import combinations

import numpy as np
import pytest

from stackcut import Interval, overlaps


@pytest.fixture
def fig1_intervals():
    """Four intervals whose overlap graph is a 4-cycle plus one chord:
    m = 5 edges, maximum 2-cut of cardinality 4 (one unavoidable conflict).
    Centers/lengths chosen by hand over small integer endpoints."""
    return [
        Interval(center=4.0, length=8.0),   # [0, 8]
        Interval(center=9.0, length=6.0),   # [6, 12]
        Interval(center=7.0, length=6.0),   # [4, 10]
        Interval(center=1.5, length=7.0),   # [-2, 5]
    ]


def naive_overlap_pairs(intervals):
    """Quadratic oracle: definitional pairwise application of overlaps."""
    return [
        (i, j)
        for (i, a), (j, b) in combinations(enumerate(intervals), 2)
        if overlaps(a, b)
    ]


def naive_cut(intervals, colors):
    """Quadratic oracle for (m, cut)."""
    pairs = naive_overlap_pairs(intervals)
    cut = sum(1 for i, j in pairs if colors[i] != colors[j])
    return len(pairs), cut


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
