"""Seeded multinomial sampling of measurement outcomes.

All randomness flows through numpy's PCG64 generator. Seeding rule: an
explicit unsigned 64-bit seed makes every draw reproducible bit-for-bit
across platforms; with no seed the generator is initialized from OS
entropy. Returned counts are ordered by descending count, ties broken
lexicographically by key, so equal inputs serialize identically.
"""

from __future__ import annotations

import numpy as np

from .errors import BadDistribution

PROB_SUM_TOL = 1e-9


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def order_counts(counts: dict[str, int]) -> dict[str, int]:
    """Canonical ordering: descending count, then lexicographic key."""
    return dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))


def sample_counts(
    probabilities: dict[str, float],
    shots: int,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> dict[str, int]:
    """Draw `shots` outcomes from a distribution over bitstring keys."""
    if not probabilities:
        raise BadDistribution("empty distribution")
    keys = list(probabilities)
    pvals = np.array([probabilities[k] for k in keys], dtype=np.float64)
    if np.any(pvals < 0.0):
        raise BadDistribution("negative probability")
    total = float(pvals.sum())
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise BadDistribution(f"probabilities sum to {total}, expected 1")
    pvals /= total
    if rng is None:
        rng = make_rng(seed)
    draws = rng.multinomial(shots, pvals)
    return order_counts(
        {k: int(c) for k, c in zip(keys, draws) if c > 0}
    )
