"""Discrete probability primitives over computational-basis outcomes.

Distributions are dense vectors of length 2**n_bits. Everything here is
immutable after construction and safe to share across threads; random
state lives only in :class:`Rng` instances, one per trial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Normalization drift absorbed silently by renormalization.
NORMALIZATION_TOL = 1e-9
# Drift beyond this is treated as a logic error, not float noise.
NORMALIZATION_FAIL = 1e-6


@dataclass(frozen=True)
class Outcome:
    """A computational-basis measurement label on ``n_bits`` qubits."""

    index: int
    n_bits: int

    def __post_init__(self):
        if self.n_bits < 0:
            raise ValueError("n_bits must be nonnegative")
        if not 0 <= self.index < (1 << self.n_bits):
            raise ValueError(
                f"outcome index {self.index} out of range for {self.n_bits} bits"
            )


class Rng:
    """Reproducible random stream keyed by (seed, stream).

    Identical (seed, stream) pairs replay the same draw sequence on any
    platform. Distinct streams are statistically independent, so parallel
    trials can each own one without coordination.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        self.generator = np.random.default_rng(
            np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        )

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream})"


def _check_length(size: int) -> int:
    n_bits = size.bit_length() - 1
    if size <= 0 or (1 << n_bits) != size:
        raise ValueError(f"vector length {size} is not a power of two")
    return n_bits


class DiscreteDistribution:
    """Probability vector over the 2**n_bits basis outcomes.

    Entries must be nonnegative and sum to 1; drift up to
    ``NORMALIZATION_FAIL`` is renormalized away, anything larger raises.
    """

    def __init__(self, probs, n_bits: int | None = None):
        probs = np.asarray(probs, dtype=float).copy()
        if probs.ndim != 1:
            raise ValueError("probs must be one-dimensional")
        inferred = _check_length(probs.size)
        if n_bits is None:
            n_bits = inferred
        elif n_bits != inferred:
            raise ValueError(f"n_bits={n_bits} inconsistent with length {probs.size}")
        if np.any(probs < -NORMALIZATION_TOL):
            raise ValueError("negative probability entry")
        np.clip(probs, 0.0, None, out=probs)
        total = probs.sum()
        if abs(total - 1.0) > NORMALIZATION_FAIL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        probs /= total
        probs.flags.writeable = False
        self.probs = probs
        self.n_bits = n_bits

    @property
    def size(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, n_bits: int) -> "DiscreteDistribution":
        size = 1 << n_bits
        return cls(np.full(size, 1.0 / size), n_bits)

    @classmethod
    def point_mass(cls, index: int, n_bits: int) -> "DiscreteDistribution":
        probs = np.zeros(1 << n_bits)
        probs[index] = 1.0
        return cls(probs, n_bits)

    def __repr__(self):
        return f"DiscreteDistribution(n_bits={self.n_bits})"


class SignedDistribution:
    """Quasi-probability vector: entries may be negative but sum to 1."""

    def __init__(self, values, n_bits: int | None = None):
        values = np.asarray(values, dtype=float).copy()
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        inferred = _check_length(values.size)
        if n_bits is None:
            n_bits = inferred
        elif n_bits != inferred:
            raise ValueError(f"n_bits={n_bits} inconsistent with length {values.size}")
        total = values.sum()
        if abs(total - 1.0) > NORMALIZATION_FAIL:
            raise ValueError(f"quasi-probabilities sum to {total}, not 1")
        values.flags.writeable = False
        self.values = values
        self.n_bits = n_bits

    @property
    def size(self) -> int:
        return self.values.size

    def is_physical(self, tol: float = NORMALIZATION_TOL) -> bool:
        return bool(np.all(self.values >= -tol))

    def to_distribution(self, tol: float = NORMALIZATION_TOL) -> DiscreteDistribution:
        """Convert to a proper distribution, clamping float-noise negatives."""
        if not self.is_physical(tol):
            raise ValueError("signed distribution has genuinely negative entries")
        return DiscreteDistribution(np.clip(self.values, 0.0, None), self.n_bits)

    def __repr__(self):
        return f"SignedDistribution(n_bits={self.n_bits})"


def tvd(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Total variation distance (1/2) * sum_x |p_x - q_x|."""
    if p.n_bits != q.n_bits:
        raise ValueError("dimension mismatch")
    return 0.5 * float(np.abs(p.probs - q.probs).sum())


def renyi_entropy(p: DiscreteDistribution, alpha: float) -> float:
    """Order-alpha Renyi entropy in bits: (1/(1-alpha)) * log2 sum_x p_x**alpha."""
    if alpha <= 0 or alpha == 1:
        raise ValueError("alpha must be positive and != 1")
    mask = p.probs > 0
    total = float(np.sum(p.probs[mask] ** alpha))
    return math.log2(total) / (1.0 - alpha)


def sample(p: DiscreteDistribution, rng: Rng) -> Outcome:
    """Draw one outcome x with probability p_x."""
    cdf = np.cumsum(p.probs)
    index = int(np.searchsorted(cdf, rng.generator.random(), side="right"))
    return Outcome(min(index, p.size - 1), p.n_bits)


def sample_counts(p: DiscreteDistribution, n: int, rng: Rng) -> np.ndarray:
    """Histogram of n i.i.d. draws from p (vectorized helper)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return np.zeros(p.size, dtype=np.int64)
    return rng.generator.multinomial(n, p.probs).astype(np.int64)
