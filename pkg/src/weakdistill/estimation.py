"""Probability-estimation baseline and the importance-sampling estimator.

The baseline estimates the full quasi-probability vector from signed
samples, clips negatives, renormalizes, and samples from the result. It is
the comparison point for the rejection-sampling framework.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import DiscreteDistribution, Outcome, Rng, sample
from .quasiprob import QuasiDecomposition, draw_signed_counts


@dataclass(frozen=True)
class EmpiricalSignedEstimate:
    """Signed empirical estimate gamma * (N+_x - N-_x) / N and its cleanup.

    ``raw`` is the unbiased signed estimate of p_x; its entries sum to
    gamma * (N+ - N-)/N in [-gamma, gamma], so it is stored as a plain
    array rather than a normalized quasi-distribution.
    """

    raw: np.ndarray
    clipped_normalized: DiscreteDistribution
    n_samples: int


def _clip_normalize(raw: np.ndarray, n_bits: int) -> DiscreteDistribution:
    clipped = np.clip(raw, 0.0, None)
    mass = clipped.sum()
    if mass <= 0:
        # All-negative estimate; only reachable at tiny sample sizes.
        return DiscreteDistribution.uniform(n_bits)
    return DiscreteDistribution(clipped / mass, n_bits)


def estimate_distribution(
    d: QuasiDecomposition, n: int, rng: Rng
) -> EmpiricalSignedEstimate:
    """Estimate the target distribution from n signed draws.

    n = 0 is allowed for the harness's zero-budget grid point and yields
    the uniform fallback.
    """
    counts_plus, counts_minus = draw_signed_counts(d, n, rng)
    if n == 0:
        raw = np.zeros(1 << d.n_bits)
    else:
        raw = d.gamma() * (counts_plus - counts_minus) / n
    raw.flags.writeable = False
    return EmpiricalSignedEstimate(raw, _clip_normalize(raw, d.n_bits), n)


def sample_from_estimate(e: EmpiricalSignedEstimate, rng: Rng) -> Outcome:
    return sample(e.clipped_normalized, rng)


def estimate_expectation(
    d: QuasiDecomposition, observable: np.ndarray, n: int, rng: Rng
) -> float:
    """Importance-sampling estimate of sum_x p_x * obs_x.

    The observable is diagonal, one value per outcome, bounded in
    [-1/2, 1/2]. Each draw contributes gamma * sign * obs[x]; the sample
    mean is unbiased.
    """
    observable = np.asarray(observable, dtype=float)
    if observable.size != 1 << d.n_bits:
        raise ValueError("observable length does not match decomposition")
    if np.any(np.abs(observable) > 0.5 + 1e-12):
        raise ValueError("observable entries must lie in [-1/2, 1/2]")
    if n < 1:
        raise ValueError("n must be positive")
    counts_plus, counts_minus = draw_signed_counts(d, n, rng)
    signed_total = float(observable @ (counts_plus - counts_minus))
    return d.gamma() * signed_total / n


def hoeffding_budget(gamma: float, epsilon: float, delta: float) -> int:
    """Samples guaranteeing |estimate - truth| <= epsilon w.p. >= 1 - delta.

    Each summand lies in [-gamma/2, gamma/2], so Hoeffding gives
    n >= gamma**2 * ln(2/delta) / (2 * epsilon**2).
    """
    if epsilon <= 0 or not 0 < delta < 1:
        raise ValueError("need epsilon > 0 and delta in (0, 1)")
    return max(1, math.ceil(gamma**2 * math.log(2.0 / delta) / (2.0 * epsilon**2)))
