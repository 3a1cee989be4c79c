"""Closed-form conflict probabilities and Monte Carlo estimators.

Events for a random pair of intervals: OV (the pair overlaps), SC (the
oblivious rule gives both the same color), SI (both centers fall in the
same cell of the rule's partition), C=d (center distance is d).

The closed forms below are evaluated exactly as their printed algebraic
shape, so any observed discrepancy is attributable to the formula rather
than to rearrangement error:

* conditional overlap at scaled center distance x = d / L:
  4x - 6x^2 on [0, 1/2], (1/2)(2 - 2x)^2 on (1/2, 1], 0 beyond;
* Pr(SI | SC) = (k / (k - 1)) L;
* Pr(OV | SC) = k L (4 / (3 (k-1)^2) - 1 / (k-1)^3);
* Pr(OV)      = (2/3) L - (1/4) L^2;
* Pr(SC | OV) = 12 / (8 - 3L) * (4 / (3 (k-1)^2) - 1 / (k-1)^3);
* expected cut ratio = 1 - Pr(SC | OV), versus 1 - 1/k for the random
  baseline.

All Monte Carlo estimators are deterministic given (seed, workers): work
is split into fixed-size blocks seeded independently of the worker count,
and integer counts are merged by summation, so results are in fact
bit-identical across worker counts as well.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .coloring import ColorRule, assign_colors
from .graph import count_crossing_pairs, overlap_mask
from .model import LengthDensity, ModelParams, validate_assumption

__all__ = [
    "p_ov_given_center",
    "distance_density",
    "p_si_given_sc",
    "p_ov_given_sc",
    "p_ov",
    "p_sc_given_ov",
    "expected_cut_ratio",
    "extended_upper_bound_p_ov_given_sc",
    "EstimatorResult",
    "PairProbabilityEstimates",
    "estimate_pair_probabilities",
    "verify_lemma1_pointwise",
    "UndefinedConditionalError",
    "RESULT_CSV_HEADER",
    "result_csv_row",
]


# ---------------------------------------------------------------------------
# closed forms


def p_ov_given_center(x: float) -> float:
    """Overlap probability for two uniform-length intervals whose centers
    are x * L apart (x is the distance in units of the max length L).

    Piecewise: 4x - 6x^2 for x <= 1/2, (1/2)(2 - 2x)^2 for 1/2 < x <= 1,
    and 0 beyond; continuous at both breakpoints, maximal at x = 1/3.
    """
    if not (x >= 0):
        raise ValueError(f"center distance must be >= 0, got {x}")
    if x <= 0.5:
        return 4 * x - 6 * x * x
    if x <= 1:
        return 0.5 * (2 - 2 * x) ** 2
    return 0.0


def distance_density(x: float, a: float) -> float:
    """Density (2 / a^2)(a - x) of the distance between two uniform points
    on [0, a], for 0 <= x <= a."""
    if a <= 0:
        raise ValueError(f"interval width must be positive, got {a}")
    if not (0 <= x <= a):
        raise ValueError(f"distance must lie in [0, {a}], got {x}")
    return (2 / (a * a)) * (a - x)


def _require_closed_form_domain(k: int, L: float) -> None:
    if k != int(k) or k < 3:
        raise ValueError(f"closed forms require integer k >= 3, got {k}")
    if not validate_assumption(int(k), L):
        raise ValueError(f"(k={k}, L={L}) violates the structural assumption on L")


def p_si_given_sc(k: int, L: float) -> float:
    """Probability that two same-colored intervals share a partition cell:
    (k / (k - 1)) * L."""
    _require_closed_form_domain(k, L)
    return k / (k - 1) * L


def p_ov_given_sc(k: int, L: float) -> float:
    """Conflict risk of the oblivious rule, Pr(OV | SC) =
    k L (4 / (3 (k-1)^2) - 1 / (k-1)^3); of order 1/k^2."""
    _require_closed_form_domain(k, L)
    return k * L * (4 / (3 * (k - 1) ** 2) - 1 / (k - 1) ** 3)


def p_ov(L: float) -> float:
    """Unconditional overlap probability (2/3) L - (1/4) L^2."""
    if not (0 < L <= 1):
        raise ValueError(f"L must lie in (0, 1], got {L}")
    return (2 / 3) * L - (1 / 4) * L * L


def p_sc_given_ov(k: int, L: float) -> float:
    """Risk that an overlapping pair is same-colored:
    12 / (8 - 3L) * (4 / (3 (k-1)^2) - 1 / (k-1)^3).

    Bayes-consistent with p_ov_given_sc * (1/k) / p_ov, since the
    structural assumption makes Pr(SC) = 1/k exactly.
    """
    _require_closed_form_domain(k, L)
    return 12 / (8 - 3 * L) * (4 / (3 * (k - 1) ** 2) - 1 / (k - 1) ** 3)


def expected_cut_ratio(k: int, L: float) -> float:
    """E(|cut|) / E(m) of the oblivious rule: 1 - p_sc_given_ov(k, L).

    Always beats the random baseline's 1 - 1/k on the valid (k, L) range.
    """
    return 1 - p_sc_given_ov(k, L)


def extended_upper_bound_p_ov_given_sc(k: int, L: float, B: float) -> float:
    """Upper bound L^2 B^2 * k L (4 / (3 (k-1)^2) - 1 / (k-1)^3) on the
    conflict risk when lengths follow any density bounded by B on [0, L].

    B = 1/L (the uniform density) recovers p_ov_given_sc exactly.
    """
    if B * L < 1 - 1e-12:
        raise ValueError(f"B must be >= 1/L (any density on [0, L] has sup >= 1/L), got B={B}")
    return L * L * B * B * p_ov_given_sc(k, L)


# ---------------------------------------------------------------------------
# Monte Carlo estimators


class UndefinedConditionalError(ValueError):
    """A conditional estimate was requested but its conditioning event
    never occurred (zero denominator)."""


@dataclass(frozen=True)
class EstimatorResult:
    """One estimated probability with its binomial standard error.

    ``conditioning`` is the denominator of the count ratio (the number of
    times the conditioning event occurred; equals ``trials`` for
    unconditional estimates) and is what the standard error is based on.
    """

    estimate: float
    trials: int
    successes: int
    conditioning: int
    standard_error: float
    reference: float | None = None

    def __post_init__(self):
        if not (0 <= self.estimate <= 1):
            raise ValueError(f"estimate must lie in [0, 1], got {self.estimate}")

    @property
    def relative_difference(self) -> float | None:
        """Signed (estimate - reference) / reference, or None without a
        reference."""
        if self.reference is None:
            return None
        return (self.estimate - self.reference) / self.reference

    def with_reference(self, reference: float) -> "EstimatorResult":
        return replace(self, reference=reference)

    def within(self, sigmas: float = 3.0) -> bool:
        """Pass/fail flag: estimate within ``sigmas`` standard errors of
        the reference."""
        if self.reference is None:
            raise ValueError("no reference value attached")
        return abs(self.estimate - self.reference) <= sigmas * self.standard_error


def _ratio_result(successes: int, conditioning: int, trials: int, what: str) -> EstimatorResult:
    if conditioning == 0:
        raise UndefinedConditionalError(
            f"undefined conditional {what}: conditioning event never occurred"
        )
    p = successes / conditioning
    se = math.sqrt(p * (1 - p) / conditioning)
    return EstimatorResult(
        estimate=p,
        trials=trials,
        successes=successes,
        conditioning=conditioning,
        standard_error=se,
    )


@dataclass(frozen=True)
class PairProbabilityEstimates:
    """The five pair-event estimates from one simulation run."""

    k: int
    L: float
    mode: str
    size: int  # instance size n (all-pairs) or number of pair trials
    seed: int
    workers: int
    ov: EstimatorResult
    sc: EstimatorResult
    sc_and_ov: EstimatorResult
    sc_given_ov: EstimatorResult
    ov_given_sc: EstimatorResult

    def as_dict(self) -> dict:
        out = {
            "k": self.k,
            "L": self.L,
            "mode": self.mode,
            "size": self.size,
            "seed": self.seed,
            "workers": self.workers,
        }
        for name in ("ov", "sc", "sc_and_ov", "sc_given_ov", "ov_given_sc"):
            r: EstimatorResult = getattr(self, name)
            out[name] = {
                "estimate": r.estimate,
                "successes": r.successes,
                "conditioning": r.conditioning,
                "standard_error": r.standard_error,
            }
        return out


_MODES = ("all-pairs", "independent-pairs")
_BLOCK_SIZE = 1 << 18


def _seed_of(rng, params: ModelParams) -> int:
    if rng is None:
        return params.seed
    if isinstance(rng, (int, np.integer)):
        return int(rng)
    raise TypeError(
        "rng must be None or an integer seed: block seeding needs a seed, "
        f"not {type(rng).__name__}"
    )


def _block_rng(seed: int, block: int) -> np.random.Generator:
    # per-block derivation: block streams are independent of worker count
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))


def _pair_block(
    size: int,
    block_seed: tuple[int, int],
    params: ModelParams,
    rule: ColorRule | None,
    density: LengthDensity | None,
) -> tuple[int, int, int, int]:
    """Draw ``size`` i.i.d. interval pairs; return counts
    (pairs, overlapping, same-colored, both)."""
    rng = _block_rng(*block_seed)
    c1 = rng.random(size)
    l1 = rng.random(size) * params.L if density is None else density.sample(size, rng)
    c2 = rng.random(size)
    l2 = rng.random(size) * params.L if density is None else density.sample(size, rng)
    ov = overlap_mask(c1, l1, c2, l2)
    if rule is not None:
        sc = assign_colors(c1, rule) == assign_colors(c2, rule)
    else:
        sc = rng.integers(1, params.k + 1, size) == rng.integers(1, params.k + 1, size)
    both = ov & sc
    return size, int(ov.sum()), int(sc.sum()), int(both.sum())


def _independent_pairs_counts(
    params: ModelParams,
    rule: ColorRule | None,
    density: LengthDensity | None,
    trials: int,
    workers: int,
    seed: int,
) -> tuple[int, int, int, int]:
    sizes = [_BLOCK_SIZE] * (trials // _BLOCK_SIZE)
    if trials % _BLOCK_SIZE:
        sizes.append(trials % _BLOCK_SIZE)
    jobs = [(size, (seed, block), params, rule, density) for block, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _pair_block(*job), jobs))
    else:
        results = [_pair_block(*job) for job in jobs]
    totals = tuple(sum(col) for col in zip(*results))
    return totals  # type: ignore[return-value]


def _all_pairs_counts(
    params: ModelParams,
    rule: ColorRule | None,
    density: LengthDensity | None,
    workers: int,
    seed: int,
) -> tuple[int, int, int, int]:
    """Exact pair counts over one generated instance of n intervals."""
    rng = np.random.default_rng(seed)
    centers = rng.random(params.n)
    lengths = rng.random(params.n) * params.L if density is None else density.sample(params.n, rng)
    if rule is not None:
        colors = assign_colors(centers, rule)
    else:
        colors = rng.integers(1, params.k + 1, params.n)
    lo = centers - lengths / 2
    hi = centers + lengths / 2
    m = count_crossing_pairs(lo, hi)
    class_sizes = np.bincount(colors, minlength=params.k + 1)
    sc_pairs = int((class_sizes * (class_sizes - 1) // 2).sum())
    masks = [colors == color for color in range(1, params.k + 1)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_class = list(pool.map(lambda mk: count_crossing_pairs(lo[mk], hi[mk]), masks))
    else:
        per_class = [count_crossing_pairs(lo[mk], hi[mk]) for mk in masks]
    mono = int(sum(per_class))
    total = params.n * (params.n - 1) // 2
    return total, m, sc_pairs, mono


def estimate_pair_probabilities(
    params: ModelParams,
    rule: ColorRule | None,
    *,
    density: LengthDensity | None = None,
    mode: str = "all-pairs",
    trials: int | None = None,
    workers: int = 1,
    rng=None,
) -> PairProbabilityEstimates:
    """Estimate {P(OV), P(SC), P(SC and OV), P(SC|OV), P(OV|SC)} by simulation.

    mode="all-pairs" draws one instance of params.n intervals and counts
    every pair with the O(n log n) sweep; mode="independent-pairs" draws
    ``trials`` i.i.d. pairs.  ``rule=None`` replaces the oblivious rule
    with the uniform-random color baseline.  Conditional estimates whose
    conditioning event never occurred raise UndefinedConditionalError.

    ``rng`` may be an integer seed overriding params.seed; results are
    bit-identical for a fixed seed regardless of ``workers``.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if rule is not None and rule.k != params.k:
        raise ValueError(f"rule.k={rule.k} does not match params.k={params.k}")
    seed = _seed_of(rng, params)
    if mode == "all-pairs":
        if trials is not None:
            raise ValueError("trials applies to independent-pairs mode only")
        size = params.n
        total, n_ov, n_sc, n_both = _all_pairs_counts(params, rule, density, workers, seed)
    else:
        if trials is None or trials < 1:
            raise ValueError("independent-pairs mode needs trials >= 1")
        size = trials
        total, n_ov, n_sc, n_both = _independent_pairs_counts(
            params, rule, density, trials, workers, seed
        )
    return PairProbabilityEstimates(
        k=params.k,
        L=params.L,
        mode=mode,
        size=size,
        seed=seed,
        workers=workers,
        ov=_ratio_result(n_ov, total, total, "P(OV)"),
        sc=_ratio_result(n_sc, total, total, "P(SC)"),
        sc_and_ov=_ratio_result(n_both, total, total, "P(SC and OV)"),
        sc_given_ov=_ratio_result(n_both, n_ov, total, "P(SC | OV)"),
        ov_given_sc=_ratio_result(n_both, n_sc, total, "P(OV | SC)"),
    )


def verify_lemma1_pointwise(
    xs,
    L: float,
    trials: int,
    rng=None,
) -> list[EstimatorResult]:
    """Monte Carlo check of the conditional overlap curve at fixed scaled
    center distances.

    For each x, draws ``trials`` pairs of lengths uniform on [0, L], holds
    the center distance at x * L, and compares the empirical overlap
    frequency against p_ov_given_center(x) (attached as the reference; use
    ``result.within(3)`` for the pass flag).
    """
    if not (0 < L <= 1):
        raise ValueError(f"L must lie in (0, 1], got {L}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    seed = 0 if rng is None else int(rng)
    results = []
    for i, x in enumerate(xs):
        if not (x >= 0):
            raise ValueError(f"center distance must be >= 0, got {x}")
        gen = _block_rng(seed, i)
        l1 = gen.random(trials) * L
        l2 = gen.random(trials) * L
        d = np.full(trials, x * L)
        ov = overlap_mask(np.zeros(trials), l1, d, l2)
        res = _ratio_result(int(ov.sum()), trials, trials, f"P(OV | C={x}L)")
        results.append(res.with_reference(p_ov_given_center(x)))
    return results


# ---------------------------------------------------------------------------
# CSV export

RESULT_CSV_HEADER = (
    "k",
    "L",
    "mode",
    "n_or_trials",
    "seed",
    "estimate",
    "reference",
    "relative_difference",
    "stderr",
)


def result_csv_row(k, L, mode: str, n_or_trials: int, seed, result: EstimatorResult) -> list:
    """One exportable CSV row for an estimate (reference columns blank when
    no reference is attached)."""
    rel = result.relative_difference
    return [
        "" if k is None else k,
        "" if L is None else repr(float(L)),
        mode,
        n_or_trials,
        "" if seed is None else seed,
        repr(result.estimate),
        "" if result.reference is None else repr(result.reference),
        "" if rel is None else repr(rel),
        repr(result.standard_error),
    ]
