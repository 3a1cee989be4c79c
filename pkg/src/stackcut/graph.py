"""Overlap graphs, pair counting, cut evaluation, and MAX k-CUT solvers.

Two intervals conflict iff they overlap: they intersect and neither
contains the other, i.e. their endpoints strictly interleave.  The graph
with one vertex per interval and one edge per overlapping pair is an
interval overlap graph (equivalently, a circle graph).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coloring import Coloring
from .model import as_arrays

__all__ = [
    "overlaps",
    "overlap_mask",
    "OverlapGraph",
    "CutStats",
    "FenwickTree",
    "build_overlap_graph",
    "count_overlapping_pairs",
    "count_crossing_pairs",
    "evaluate_cut",
    "max_kcut_exact",
    "greedy_kcut",
    "EXACT_SOLVER_MAX_VERTICES",
]


def overlaps(a, b) -> bool:
    """True iff the endpoints of a and b strictly interleave.

    Touching endpoints, containment, and identical intervals all yield
    False; the relation is symmetric and irreflexive.
    """
    return (a.lo < b.lo < a.hi < b.hi) or (b.lo < a.lo < b.hi < a.hi)


def overlap_mask(centers_a, lengths_a, centers_b, lengths_b) -> np.ndarray:
    """Element-wise overlap test for paired interval arrays."""
    ca, la = np.asarray(centers_a, float), np.asarray(lengths_a, float)
    cb, lb = np.asarray(centers_b, float), np.asarray(lengths_b, float)
    lo_a, hi_a = ca - la / 2, ca + la / 2
    lo_b, hi_b = cb - lb / 2, cb + lb / 2
    ab = (lo_a < lo_b) & (lo_b < hi_a) & (hi_a < hi_b)
    ba = (lo_b < lo_a) & (lo_a < hi_b) & (hi_b < hi_a)
    return ab | ba


@dataclass
class OverlapGraph:
    """Undirected graph as a sorted, duplicate-free edge list (i < j)."""

    num_vertices: int
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        norm = sorted({(min(i, j), max(i, j)) for i, j in self.edges})
        for i, j in norm:
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < self.num_vertices and 0 <= j < self.num_vertices):
                raise ValueError(f"edge ({i}, {j}) out of range for {self.num_vertices} vertices")
        if len(norm) != len(self.edges):
            raise ValueError("duplicate edges")
        self.edges = norm

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.num_vertices)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def to_edge_list(self) -> str:
        """Text export: first line "n m", then one "i j" line per edge."""
        lines = [f"{self.num_vertices} {self.num_edges}"]
        lines.extend(f"{i} {j}" for i, j in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "OverlapGraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty edge-list text")
        n, m = (int(tok) for tok in lines[0].split())
        edges = [tuple(int(tok) for tok in ln.split()) for ln in lines[1 : m + 1]]
        if len(edges) != m:
            raise ValueError(f"expected {m} edges, found {len(edges)}")
        return cls(num_vertices=n, edges=edges)


@dataclass(frozen=True)
class CutStats:
    """Pair counts for one coloring: m conflicting pairs, cut of them
    bichromatic, the rest same-colored conflicts."""

    m: int
    cut: int

    def __post_init__(self):
        if not (0 <= self.cut <= self.m):
            raise ValueError(f"cut must lie in [0, m], got cut={self.cut}, m={self.m}")

    @property
    def conflicts(self) -> int:
        return self.m - self.cut

    @property
    def ratio(self) -> float | None:
        """cut / m, or None for an instance without overlapping pairs."""
        return self.cut / self.m if self.m > 0 else None


def build_overlap_graph(intervals) -> OverlapGraph:
    """Exact pairwise overlap graph; quadratic, intended for n <= 10^4."""
    centers, lengths = as_arrays(intervals)
    lo = centers - lengths / 2
    hi = centers + lengths / 2
    n = lo.size
    edges: list[tuple[int, int]] = []
    # row-chunked broadcasting keeps the boolean blocks small
    chunk = max(1, min(n, 512))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        lo_r, hi_r = lo[start:stop, None], hi[start:stop, None]
        ab = (lo_r < lo) & (lo < hi_r) & (hi_r < hi)
        ba = (lo < lo_r) & (lo_r < hi) & (hi < hi_r)
        rows, cols = np.nonzero(ab | ba)
        for r, c in zip(rows.tolist(), cols.tolist()):
            i = start + r
            if i < c:
                edges.append((i, c))
    return OverlapGraph(num_vertices=n, edges=edges)


class FenwickTree:
    """Binary indexed tree over 1..size supporting point add / prefix count."""

    __slots__ = ("size", "_tree")

    def __init__(self, size: int):
        self.size = size
        self._tree = [0] * (size + 1)

    def add(self, i: int, delta: int = 1) -> None:
        tree = self._tree
        while i <= self.size:
            tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        tree = self._tree
        s = 0
        while i > 0:
            s += tree[i]
            i -= i & -i
        return s

    def range_count(self, lo: int, hi: int) -> int:
        """Count of items in [lo, hi]; empty ranges count 0."""
        if hi < lo:
            return 0
        return self.prefix(hi) - self.prefix(lo - 1)


def count_crossing_pairs(lo, hi) -> int:
    """Count index pairs whose [lo, hi] endpoints strictly interleave.

    Endpoint-sorting sweep: rank all 2n endpoints (equal values share a
    rank, which realizes the strict comparisons), scan intervals by
    (lo asc, hi desc), and for each one count previously seen hi-ranks
    strictly inside its own rank span with a Fenwick tree.  O(n log n);
    agrees exactly with the quadratic definition, ties included.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = lo.size
    if n < 2:
        return 0
    ranks = np.unique(np.concatenate([lo, hi]))
    lo_r = np.searchsorted(ranks, lo) + 1
    hi_r = np.searchsorted(ranks, hi) + 1
    order = np.lexsort((-hi_r, lo_r))
    lo_seq = lo_r[order].tolist()
    hi_seq = hi_r[order].tolist()
    tree = FenwickTree(ranks.size)
    total = 0
    for a, b in zip(lo_seq, hi_seq):
        if b > a + 1:
            total += tree.range_count(a + 1, b - 1)
        tree.add(b)
    return total


def count_overlapping_pairs(intervals) -> int:
    """Number of overlapping pairs, via the O(n log n) sweep."""
    centers, lengths = as_arrays(intervals)
    return count_crossing_pairs(centers - lengths / 2, centers + lengths / 2)


def evaluate_cut(intervals, coloring: Coloring) -> CutStats:
    """Cut statistics of a coloring: total overlapping pairs via the sweep,
    same-colored ones via the sweep restricted per color class."""
    centers, lengths = as_arrays(intervals)
    if centers.size != len(coloring):
        raise ValueError(
            f"coloring size {len(coloring)} does not match instance size {centers.size}"
        )
    lo = centers - lengths / 2
    hi = centers + lengths / 2
    m = count_crossing_pairs(lo, hi)
    conflicts = 0
    for color in range(1, coloring.k + 1):
        mask = coloring.colors == color
        if np.count_nonzero(mask) > 1:
            conflicts += count_crossing_pairs(lo[mask], hi[mask])
    return CutStats(m=m, cut=m - conflicts)


EXACT_SOLVER_MAX_VERTICES = 16


def max_kcut_exact(graph: OverlapGraph, k: int) -> tuple[int, Coloring]:
    """Exhaustive MAX k-CUT for small graphs (<= 16 vertices).

    Fixes the first vertex's color to 1 (color-permutation symmetry) and
    prunes on accumulated conflicts; returns the true maximum cut and the
    lexicographically smallest coloring attaining it.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = graph.num_vertices
    if n > EXACT_SOLVER_MAX_VERTICES:
        raise ValueError(
            f"instance too large for the exact solver: {n} vertices "
            f"(max {EXACT_SOLVER_MAX_VERTICES})"
        )
    if n == 0:
        return 0, Coloring(np.empty(0, dtype=np.int64), k)
    adj = graph.adjacency()
    prior = [[u for u in adj[v] if u < v] for v in range(n)]
    m = graph.num_edges
    best_conflicts = m + 1
    best: list[int] | None = None
    colors = [0] * n

    def search(v: int, conflicts: int) -> None:
        nonlocal best_conflicts, best
        if conflicts >= best_conflicts:
            return
        if v == n:
            best_conflicts = conflicts
            best = colors.copy()
            return
        choices = (1,) if v == 0 else range(1, k + 1)
        for c in choices:
            colors[v] = c
            added = sum(1 for u in prior[v] if colors[u] == c)
            search(v + 1, conflicts + added)
        colors[v] = 0

    search(0, 0)
    assert best is not None
    return m - best_conflicts, Coloring(np.asarray(best, dtype=np.int64), k)


def greedy_kcut(graph: OverlapGraph, k: int) -> tuple[int, Coloring]:
    """Greedy MAX k-CUT: color vertices in index order, each with the color
    minimizing same-colored edges to already-colored neighbors (ties go to
    the lowest color).  Guarantees cut >= (1 - 1/k) * m.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    n = graph.num_vertices
    adj = graph.adjacency()
    colors = np.zeros(n, dtype=np.int64)
    conflicts = 0
    for v in range(n):
        counts = [0] * k
        for u in adj[v]:
            if u < v:
                counts[colors[u] - 1] += 1
        c = min(range(k), key=lambda i: (counts[i], i))
        colors[v] = c + 1
        conflicts += counts[c]
    return graph.num_edges - conflicts, Coloring(colors, k)
