"""Domain types and random instance generators.

Two stochastic models produce instances of storage-time intervals:

* the uniform model: centers uniform on [0, 1], lengths uniform on [0, L];
* the extended model: centers uniform on [0, 1], lengths drawn from a
  bounded piecewise-constant density supported in [0, L].

Intervals are stored as (center, length); endpoints are derived and are
never clipped to [0, 1].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Interval",
    "ModelParams",
    "LengthDensity",
    "validate_assumption",
    "default_length_rule",
    "generate_scheinerman",
    "generate_extended",
    "sample_centers_lengths",
    "as_arrays",
    "from_arrays",
]


@dataclass(frozen=True)
class Interval:
    """A storage-time interval, stored as center and length.

    The endpoints ``lo`` / ``hi`` are derived; the stored center is
    authoritative, so ``(lo + hi) / 2`` recovers it.
    """

    center: float
    length: float

    def __post_init__(self):
        if not math.isfinite(self.center):
            raise ValueError(f"interval center must be finite, got {self.center}")
        if not (math.isfinite(self.length) and self.length >= 0):
            raise ValueError(f"interval length must be finite and >= 0, got {self.length}")

    @property
    def lo(self) -> float:
        return self.center - self.length / 2

    @property
    def hi(self) -> float:
        return self.center + self.length / 2


def as_arrays(intervals) -> tuple[np.ndarray, np.ndarray]:
    """Split a sequence of intervals into (centers, lengths) float arrays."""
    n = len(intervals)
    centers = np.fromiter((iv.center for iv in intervals), dtype=float, count=n)
    lengths = np.fromiter((iv.length for iv in intervals), dtype=float, count=n)
    return centers, lengths


def from_arrays(centers, lengths) -> list[Interval]:
    """Package parallel (centers, lengths) arrays as a list of intervals."""
    centers = np.asarray(centers, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    if centers.shape != lengths.shape:
        raise ValueError("centers and lengths must have the same shape")
    return [Interval(float(c), float(l)) for c, l in zip(centers, lengths)]


def validate_assumption(k: int, L: float, *, tol: float = 1e-9) -> bool:
    """Check the structural assumption tying L to the number of colors k.

    True iff 1 / ((k / (k - 1)) * L) is an integer (within absolute
    tolerance ``tol``, since L is usually a binary float).  When it holds,
    (k - 1) / L is an integer multiple of k, so [0, 1] splits into whole
    cells and the cyclic coloring closes up exactly at 1.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if L <= 0:
        raise ValueError(f"L must be positive, got {L}")
    q = (k - 1) / (k * L)
    return round(q) >= 1 and abs(q - round(q)) <= tol


@dataclass(frozen=True)
class ModelParams:
    """Instance-model parameters: size n, colors k, max length L, RNG seed."""

    n: int
    k: int
    L: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"empty instance: n must be >= 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if not (0 < self.L <= 1):
            raise ValueError(f"L must lie in (0, 1], got {self.L}")
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def assumption_holds(self) -> bool:
        """Whether (k, L) admits the exact closed-form analysis."""
        return validate_assumption(self.k, self.L)


def default_length_rule(k: int) -> float:
    """The canonical max length L = (k - 1) / (5k), valid for every k >= 2."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return (k - 1) / (5 * k)


_NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class LengthDensity:
    """Piecewise-constant probability density for interval lengths on [0, L].

    ``bin_edges`` are strictly increasing with first edge 0 and last edge L;
    ``bin_heights`` are the density values per bin.  Any bounded continuous
    density on [0, L] can be approximated to arbitrary accuracy by such a
    step density, and its sup (the bound B of the extended model) is just
    the max bin height.
    """

    bin_edges: tuple[float, ...]
    bin_heights: tuple[float, ...]

    def __post_init__(self):
        edges = tuple(float(e) for e in self.bin_edges)
        heights = tuple(float(h) for h in self.bin_heights)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "bin_heights", heights)
        if len(edges) < 2 or len(heights) != len(edges) - 1:
            raise ValueError("need N+1 bin edges for N bin heights, N >= 1")
        if edges[0] != 0:
            raise ValueError(f"first bin edge must be 0, got {edges[0]}")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("bin edges must be strictly increasing")
        if any(h < 0 for h in heights):
            raise ValueError("bin heights must be non-negative")
        total = sum(h * (b - a) for h, a, b in zip(heights, edges, edges[1:]))
        if abs(total - 1) > _NORMALIZATION_TOL:
            raise ValueError(f"density must integrate to 1, got {total}")

    @property
    def bound(self) -> float:
        """Supremum of the density (max bin height)."""
        return max(self.bin_heights)

    @property
    def max_length(self) -> float:
        """Right end of the support, the max length L."""
        return self.bin_edges[-1]

    def bin_masses(self) -> np.ndarray:
        edges = np.asarray(self.bin_edges)
        return np.asarray(self.bin_heights) * np.diff(edges)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Draw lengths by inverse-CDF sampling (one uniform per draw)."""
        masses = self.bin_masses()
        cum = np.cumsum(masses)
        cum /= cum[-1]
        u = rng.random(size)
        idx = np.searchsorted(cum, u, side="right")
        edges = np.asarray(self.bin_edges)
        prev = np.concatenate([[0.0], cum[:-1]])
        frac = (u - prev[idx]) / masses[idx]
        return edges[idx] + frac * (edges[idx + 1] - edges[idx])

    @classmethod
    def uniform(cls, L: float) -> "LengthDensity":
        """The uniform density on [0, L] (recovers the basic model)."""
        if not (0 < L <= 1):
            raise ValueError(f"L must lie in (0, 1], got {L}")
        return cls(bin_edges=(0.0, L), bin_heights=(1.0 / L,))

    def to_dict(self) -> dict:
        return {"bin_edges": list(self.bin_edges), "bin_heights": list(self.bin_heights)}

    @classmethod
    def from_dict(cls, data: dict) -> "LengthDensity":
        try:
            edges = data["bin_edges"]
            heights = data["bin_heights"]
        except (KeyError, TypeError) as exc:
            raise ValueError("density must define 'bin_edges' and 'bin_heights'") from exc
        return cls(bin_edges=tuple(edges), bin_heights=tuple(heights))

    @classmethod
    def from_json(cls, path) -> "LengthDensity":
        """Load a density from a JSON file with bin_edges / bin_heights."""
        with open(path) as fh:
            data = json.load(fh)
        return cls.from_dict(data)


def _resolve_rng(params: ModelParams, rng) -> np.random.Generator:
    if rng is None:
        return np.random.default_rng(params.seed)
    return np.random.default_rng(rng)


def sample_centers_lengths(
    params: ModelParams,
    density: LengthDensity | None = None,
    rng=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Array-level sampler shared by both generators.

    Draw order is fixed (all centers, then all lengths) so results are
    reproducible from the seed alone.
    """
    rng = _resolve_rng(params, rng)
    centers = rng.random(params.n)
    if density is None:
        lengths = rng.random(params.n) * params.L
    else:
        if density.max_length > params.L * (1 + 1e-12):
            raise ValueError(
                f"density support [0, {density.max_length}] exceeds max length L={params.L}"
            )
        lengths = density.sample(params.n, rng)
    return centers, lengths


def generate_scheinerman(params: ModelParams, rng=None) -> list[Interval]:
    """Draw n intervals: centers uniform on [0, 1], lengths uniform on [0, L].

    All 2n draws are independent; output is deterministic given the seed.
    """
    centers, lengths = sample_centers_lengths(params, rng=rng)
    return from_arrays(centers, lengths)


def generate_extended(params: ModelParams, density: LengthDensity, rng=None) -> list[Interval]:
    """Draw n intervals with lengths from a piecewise-constant density."""
    centers, lengths = sample_centers_lengths(params, density=density, rng=rng)
    return from_arrays(centers, lengths)
