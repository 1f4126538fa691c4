"""Shared test helpers: random physical decompositions and count tables."""
import numpy as np

from weakdistill import DiscreteDistribution, QuasiDecomposition


def random_physical_decomposition(gen: np.random.Generator, n_bits: int) -> QuasiDecomposition:
    """Random two-term decomposition whose target is a valid distribution.

    Built backwards: pick the target p and sigma_minus at random, pick
    c_minus, then sigma_plus = (p + c_minus * sigma_minus) / (1 + c_minus)
    is automatically a distribution and the target is exactly p.
    """
    size = 1 << n_bits
    p = gen.dirichlet(np.ones(size))
    sigma_minus = gen.dirichlet(np.ones(size))
    c_minus = float(gen.uniform(0.05, 2.0))
    c_plus = 1.0 + c_minus
    sigma_plus = (p + c_minus * sigma_minus) / c_plus
    return QuasiDecomposition(
        c_plus,
        c_minus,
        DiscreteDistribution(sigma_plus, n_bits),
        DiscreteDistribution(sigma_minus, n_bits),
    )


def random_count_table(gen: np.random.Generator, size: int, max_total: int = 50):
    """Random nonnegative (counts_plus, counts_minus) vectors, zeros allowed."""
    counts_plus = gen.integers(0, max_total, size=size)
    counts_minus = gen.integers(0, max_total, size=size)
    # Force some outcomes to be entirely unvisited.
    unvisited = gen.random(size) < 0.3
    counts_plus[unvisited] = 0
    counts_minus[unvisited] = 0
    return counts_plus.astype(np.int64), counts_minus.astype(np.int64)
