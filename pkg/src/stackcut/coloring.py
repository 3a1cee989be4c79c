"""The oblivious coloring rule and the uniform-random baseline.

The rule splits [0, 1] into (k - 1) / L consecutive cells of width
L / (k - 1), colored cyclically 1, 2, ..., k, 1, 2, ...  An interval is
colored by the single cell containing its center, so the color of an item
depends on that item alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import as_arrays, validate_assumption

__all__ = [
    "ColorRule",
    "Coloring",
    "assign_color",
    "assign_colors",
    "color_instance",
    "random_coloring",
]


@dataclass(frozen=True)
class ColorRule:
    """Parameters of the oblivious rule: color count k and max length L."""

    k: int
    L: float

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if not (0 < self.L <= 1):
            raise ValueError(f"L must lie in (0, 1], got {self.L}")

    @property
    def j_width(self) -> float:
        """Width L / (k - 1) of one cell of the partition."""
        return self.L / (self.k - 1)

    @property
    def num_j_intervals(self) -> int:
        """Number of cells (k - 1) / L; exact and a multiple of k when
        the structural assumption on (k, L) holds."""
        return round((self.k - 1) / self.L)

    @property
    def assumption_holds(self) -> bool:
        return validate_assumption(self.k, self.L)


@dataclass(frozen=True, eq=False)
class Coloring:
    """A color in {1..k} per interval, in instance order."""

    colors: np.ndarray
    k: int

    def __post_init__(self):
        colors = np.asarray(self.colors, dtype=np.int64)
        if colors.ndim != 1:
            raise ValueError("colors must be a flat sequence")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if colors.size and (colors.min() < 1 or colors.max() > self.k):
            raise ValueError(f"colors must lie in 1..{self.k}")
        object.__setattr__(self, "colors", colors)

    def __len__(self) -> int:
        return self.colors.size

    def __iter__(self):
        return iter(self.colors.tolist())

    def __getitem__(self, i) -> int:
        return int(self.colors[i])

    def class_sizes(self) -> np.ndarray:
        """Size of each color class, indexed 1..k (entry 0 unused)."""
        return np.bincount(self.colors, minlength=self.k + 1)


def assign_color(interval, rule: ColorRule) -> int:
    """Color of a single interval under the oblivious rule.

    Computes floor((k - 1) * center / L) mod k + 1; a center of exactly 1
    is clamped to the final cell and receives color k.  O(1), reads nothing
    but the one interval.
    """
    c = interval.center
    if not (0 <= c <= 1):
        raise ValueError(f"center must lie in [0, 1], got {c}")
    if c == 1.0:
        return rule.k
    return math.floor((rule.k - 1) * c / rule.L) % rule.k + 1


def assign_colors(centers: np.ndarray, rule: ColorRule) -> np.ndarray:
    """Vectorized assign_color over an array of centers.

    Bit-identical to the scalar rule (same double-precision operations).
    """
    centers = np.asarray(centers, dtype=float)
    bad = np.flatnonzero(~((centers >= 0) & (centers <= 1)))
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"center must lie in [0, 1], got {centers[i]} at index {i}")
    idx = np.floor((rule.k - 1) * centers / rule.L)
    colors = (idx % rule.k).astype(np.int64) + 1
    colors[centers == 1.0] = rule.k
    return colors


def color_instance(intervals, rule: ColorRule) -> Coloring:
    """Apply the oblivious rule element-wise, preserving instance order."""
    centers, _ = as_arrays(intervals)
    return Coloring(assign_colors(centers, rule), rule.k)


def random_coloring(size: int, k: int, rng=None) -> Coloring:
    """Baseline: each interval gets an independent uniform color in {1..k}."""
    if k < 2:
        raise ValueError(f"random coloring needs k >= 2 (no cut possible for k={k})")
    if size < 0:
        raise ValueError(f"size must be >= 0, got {size}")
    rng = np.random.default_rng(rng)
    return Coloring(rng.integers(1, k + 1, size=size), k)
