"""Tests for two-term quasi-probability decompositions."""
import numpy as np
import pytest

from weakdistill import (
    DiscreteDistribution,
    QuasiDecomposition,
    Rng,
    combine_factors,
    combine_signed_terms,
    draw_signed,
    draw_signed_counts,
    mixture,
    target,
)
from conftest import random_physical_decomposition


def simple_decomposition() -> QuasiDecomposition:
    """c+ = 1.5, c- = 0.5; q = [0.625, 0.375], p = [0.25, 0.75], gamma = 2."""
    return QuasiDecomposition(
        1.5,
        0.5,
        DiscreteDistribution([0.5, 0.5]),
        DiscreteDistribution([1.0, 0.0]),
    )


class TestQuasiDecomposition:
    def test_coefficient_constraint(self):
        with pytest.raises(ValueError):
            QuasiDecomposition(
                1.5, 0.4, DiscreteDistribution.uniform(1), DiscreteDistribution.uniform(1)
            )

    def test_negative_coefficients_rejected(self):
        with pytest.raises(ValueError):
            QuasiDecomposition(
                0.5, -0.5, DiscreteDistribution.uniform(1), DiscreteDistribution.uniform(1)
            )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            QuasiDecomposition(
                1.0, 0.0, DiscreteDistribution.uniform(1), DiscreteDistribution.uniform(2)
            )

    def test_gamma(self):
        assert simple_decomposition().gamma() == pytest.approx(2.0, abs=1e-15)

    def test_free(self):
        sigma = DiscreteDistribution([0.3, 0.7])
        d = QuasiDecomposition.free(sigma)
        assert d.c_minus == 0.0
        assert d.gamma() == 1.0
        np.testing.assert_allclose(target(d).values, sigma.probs)
        np.testing.assert_allclose(mixture(d).probs, sigma.probs)

    def test_dict_roundtrip(self):
        d = simple_decomposition()
        d2 = QuasiDecomposition.from_dict(d.to_dict())
        assert d2.c_plus == d.c_plus and d2.c_minus == d.c_minus
        np.testing.assert_array_equal(d2.sigma_plus.probs, d.sigma_plus.probs)
        np.testing.assert_array_equal(d2.sigma_minus.probs, d.sigma_minus.probs)


class TestMixtureAndTarget:
    def test_hand_values(self):
        d = simple_decomposition()
        np.testing.assert_allclose(mixture(d).probs, [0.625, 0.375], atol=1e-15)
        np.testing.assert_allclose(target(d).values, [0.25, 0.75], atol=1e-15)

    def test_identity_gamma_q_minus_p(self):
        # gamma * q_x - p_x = 2 c- p-_x for random physical decompositions.
        gen = np.random.default_rng(11)
        for _ in range(25):
            d = random_physical_decomposition(gen, 3)
            lhs = d.gamma() * mixture(d).probs - target(d).values
            np.testing.assert_allclose(lhs, 2 * d.c_minus * d.sigma_minus.probs, atol=1e-12)


class TestSignedSampling:
    def test_sign_frequencies(self):
        d = simple_decomposition()
        rng = Rng(7)
        n = 100_000
        plus = sum(draw_signed(d, rng).sign == 1 for _ in range(n))
        assert plus / n == pytest.approx(d.c_plus / d.gamma(), abs=0.01)

    def test_counts_total_and_means(self):
        d = simple_decomposition()
        n = 200_000
        counts_plus, counts_minus = draw_signed_counts(d, n, Rng(13))
        assert counts_plus.sum() + counts_minus.sum() == n
        expected_plus = (d.c_plus / d.gamma()) * d.sigma_plus.probs
        expected_minus = (d.c_minus / d.gamma()) * d.sigma_minus.probs
        np.testing.assert_allclose(counts_plus / n, expected_plus, atol=0.01)
        np.testing.assert_allclose(counts_minus / n, expected_minus, atol=0.01)

    def test_zero_draws(self):
        d = simple_decomposition()
        counts_plus, counts_minus = draw_signed_counts(d, 0, Rng(1))
        assert counts_plus.sum() == 0 and counts_minus.sum() == 0


class TestCombineSignedTerms:
    def test_hand_example(self):
        # 1.2 * [1,0] - 0.5 * [0,1] + 0.3 * [0.5,0.5]
        terms = [
            (1.2, DiscreteDistribution([1.0, 0.0])),
            (-0.5, DiscreteDistribution([0.0, 1.0])),
            (0.3, DiscreteDistribution([0.5, 0.5])),
        ]
        d = combine_signed_terms(terms)
        assert d.c_plus == pytest.approx(1.5, abs=1e-15)
        assert d.c_minus == pytest.approx(0.5, abs=1e-15)
        np.testing.assert_allclose(d.sigma_plus.probs, [1.35 / 1.5, 0.15 / 1.5], atol=1e-15)
        np.testing.assert_allclose(d.sigma_minus.probs, [0.0, 1.0], atol=1e-15)

    def test_target_preserved(self):
        gen = np.random.default_rng(3)
        vecs = [gen.dirichlet(np.ones(4)) for _ in range(5)]
        coeffs = np.array([0.8, -0.4, 0.9, -0.5, 0.2])
        terms = [(float(c), DiscreteDistribution(v)) for c, v in zip(coeffs, vecs)]
        d = combine_signed_terms(terms)
        expected = sum(c * v for c, v in zip(coeffs, vecs))
        np.testing.assert_allclose(target(d).values, expected, atol=1e-12)

    def test_all_positive_gives_free(self):
        terms = [(0.6, DiscreteDistribution([1.0, 0.0])), (0.4, DiscreteDistribution([0.0, 1.0]))]
        d = combine_signed_terms(terms)
        assert d.c_minus == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            combine_signed_terms([])


class TestCombineFactors:
    def test_single_factor_identity(self):
        d = simple_decomposition()
        assert combine_factors([d]) is d

    def test_two_factor_hand_check(self):
        a = simple_decomposition()  # gamma 2
        b = QuasiDecomposition.free(DiscreteDistribution([0.25, 0.75]))  # gamma 1
        combined = combine_factors([a, b])
        big_gamma = a.gamma() * b.gamma()
        assert combined.gamma() == pytest.approx(big_gamma, abs=1e-12)
        assert combined.c_minus == pytest.approx((big_gamma - 1) / 2, abs=1e-12)
        # Factor 0 is the most significant bit: target = kron(target_a, target_b).
        expected = np.kron(target(a).values, target(b).values)
        np.testing.assert_allclose(target(combined).values, expected, atol=1e-12)

    def test_gamma_is_product(self):
        gen = np.random.default_rng(17)
        factors = [random_physical_decomposition(gen, 2) for _ in range(3)]
        combined = combine_factors(factors)
        product = np.prod([f.gamma() for f in factors])
        assert combined.gamma() == pytest.approx(product, rel=1e-12)
        expected = target(factors[0]).values
        for f in factors[1:]:
            expected = np.kron(expected, target(f).values)
        np.testing.assert_allclose(target(combined).values, expected, atol=1e-12)

    def test_dimension_cap(self):
        gen = np.random.default_rng(19)
        factors = [random_physical_decomposition(gen, 4) for _ in range(4)]
        with pytest.raises(ValueError):
            combine_factors(factors)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            combine_factors([])
