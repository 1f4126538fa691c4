"""Two-term quasi-probability decompositions rho = c+ sigma+ - c- sigma-.

A decomposition carries exact measurement distributions for both states,
so downstream code can evaluate the mixture q_x, the signed target p_x,
and draw signed samples. Decompositions with many terms (tensor factors,
injection sign patterns) are folded back into exactly two terms by
grouping coefficients by sign.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import (
    NORMALIZATION_TOL,
    DiscreteDistribution,
    Outcome,
    Rng,
    SignedDistribution,
    sample,
    sample_counts,
)

MAX_COMBINED_BITS = 12


@dataclass(frozen=True)
class SignedSample:
    """One draw from a decomposition: the outcome plus the branch sign."""

    outcome: Outcome
    sign: int

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")


class QuasiDecomposition:
    """rho = c_plus * sigma_plus - c_minus * sigma_minus with c+ - c- = 1.

    When c_minus == 0 the decomposition is free; sigma_minus is kept as a
    dummy uniform distribution so all code paths stay uniform (it is never
    selected by the sampling coin).
    """

    def __init__(
        self,
        c_plus: float,
        c_minus: float,
        sigma_plus: DiscreteDistribution,
        sigma_minus: DiscreteDistribution,
    ):
        if c_plus < 0 or c_minus < 0:
            raise ValueError("coefficients must be nonnegative")
        if abs((c_plus - c_minus) - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"c_plus - c_minus = {c_plus - c_minus}, expected 1")
        if sigma_plus.n_bits != sigma_minus.n_bits:
            raise ValueError("sigma_plus and sigma_minus dimension mismatch")
        self.c_plus = float(c_plus)
        self.c_minus = float(c_minus)
        self.sigma_plus = sigma_plus
        self.sigma_minus = sigma_minus

    @property
    def n_bits(self) -> int:
        return self.sigma_plus.n_bits

    def gamma(self) -> float:
        return self.c_plus + self.c_minus

    @classmethod
    def free(cls, sigma: DiscreteDistribution) -> "QuasiDecomposition":
        """Decomposition of a directly preparable state (c_minus = 0)."""
        return cls(1.0, 0.0, sigma, DiscreteDistribution.uniform(sigma.n_bits))

    def to_dict(self) -> dict:
        return {
            "n_bits": self.n_bits,
            "c_plus": self.c_plus,
            "c_minus": self.c_minus,
            "sigma_plus": self.sigma_plus.probs.tolist(),
            "sigma_minus": self.sigma_minus.probs.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuasiDecomposition":
        n_bits = int(data["n_bits"])
        return cls(
            float(data["c_plus"]),
            float(data["c_minus"]),
            DiscreteDistribution(data["sigma_plus"], n_bits),
            DiscreteDistribution(data["sigma_minus"], n_bits),
        )

    def __repr__(self):
        return (
            f"QuasiDecomposition(n_bits={self.n_bits}, "
            f"c_plus={self.c_plus:.6g}, c_minus={self.c_minus:.6g})"
        )


def mixture(d: QuasiDecomposition) -> DiscreteDistribution:
    """The physically samplable mixture q_x = (c+ p+_x + c- p-_x) / gamma."""
    gamma = d.gamma()
    probs = (d.c_plus * d.sigma_plus.probs + d.c_minus * d.sigma_minus.probs) / gamma
    return DiscreteDistribution(probs, d.n_bits)


def target(d: QuasiDecomposition) -> SignedDistribution:
    """The represented quasi-distribution p_x = c+ p+_x - c- p-_x."""
    values = d.c_plus * d.sigma_plus.probs - d.c_minus * d.sigma_minus.probs
    return SignedDistribution(values, d.n_bits)


def draw_signed(d: QuasiDecomposition, rng: Rng) -> SignedSample:
    """Flip the gamma-biased coin, then measure the selected state."""
    heads = rng.generator.random() < d.c_plus / d.gamma()
    if heads:
        return SignedSample(sample(d.sigma_plus, rng), +1)
    return SignedSample(sample(d.sigma_minus, rng), -1)


def draw_signed_counts(
    d: QuasiDecomposition, n: int, rng: Rng
) -> tuple[np.ndarray, np.ndarray]:
    """Per-outcome counts (N+_x, N-_x) of n signed draws, vectorized.

    Equivalent in distribution to n independent draw_signed calls; both the
    acceptance-ratio estimator and the probability estimator consume these
    counts, so one call serves a paired comparison under one seed.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    n_minus = int(rng.generator.binomial(n, d.c_minus / d.gamma())) if n > 0 else 0
    counts_plus = sample_counts(d.sigma_plus, n - n_minus, rng)
    counts_minus = sample_counts(d.sigma_minus, n_minus, rng)
    return counts_plus, counts_minus


def combine_signed_terms(
    terms: list[tuple[float, DiscreteDistribution]],
) -> QuasiDecomposition:
    """Fold a signed mixture sum_i a_i tau_i (sum a_i = 1) into two terms.

    Positive-coefficient terms are grouped into sigma_plus and negative ones
    into sigma_minus, each renormalized; convexity makes both groups valid
    states, and the coefficient sums satisfy c+ - c- = 1 automatically.
    """
    if not terms:
        raise ValueError("no terms to combine")
    n_bits = terms[0][1].n_bits
    size = 1 << n_bits
    pos = np.zeros(size)
    neg = np.zeros(size)
    c_plus = 0.0
    c_minus = 0.0
    for coeff, dist in terms:
        if dist.n_bits != n_bits:
            raise ValueError("term dimension mismatch")
        if coeff > 0:
            c_plus += coeff
            pos += coeff * dist.probs
        elif coeff < 0:
            c_minus += -coeff
            neg += -coeff * dist.probs
    if c_plus <= 0:
        raise ValueError("combined decomposition has no positive weight")
    sigma_plus = DiscreteDistribution(pos / c_plus, n_bits)
    if c_minus > 0:
        sigma_minus = DiscreteDistribution(neg / c_minus, n_bits)
    else:
        c_minus = 0.0
        sigma_minus = DiscreteDistribution.uniform(n_bits)
    return QuasiDecomposition(c_plus, c_minus, sigma_plus, sigma_minus)


def combine_factors(factors: list[QuasiDecomposition]) -> QuasiDecomposition:
    """Tensor per-block decompositions into one two-term decomposition.

    Factor 0 occupies the most significant bits. Expands the 2**k sign
    patterns of prod_i (c+_i sigma+_i - c-_i sigma-_i) and regroups by sign,
    giving c+ = (Gamma + 1) / 2 and c- = (Gamma - 1) / 2 with
    Gamma = prod_i gamma_i.
    """
    if not factors:
        raise ValueError("no factors to combine")
    if len(factors) == 1:
        return factors[0]
    total_bits = sum(f.n_bits for f in factors)
    if total_bits > MAX_COMBINED_BITS:
        raise ValueError(f"combined dimension 2**{total_bits} exceeds desk scale")
    terms: list[tuple[float, np.ndarray]] = [(1.0, np.ones(1))]
    for factor in factors:
        expanded = []
        for coeff, vec in terms:
            expanded.append((coeff * factor.c_plus, np.kron(vec, factor.sigma_plus.probs)))
            if factor.c_minus > 0:
                expanded.append(
                    (-coeff * factor.c_minus, np.kron(vec, factor.sigma_minus.probs))
                )
        terms = expanded
    wrapped = [(coeff, DiscreteDistribution(vec, total_bits)) for coeff, vec in terms]
    return combine_signed_terms(wrapped)
