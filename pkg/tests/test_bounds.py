"""Tests for the closed-form sample-cost bounds and the split optimizer."""
import math

import numpy as np
import pytest

from weakdistill import (
    BoundInputs,
    DiscreteDistribution,
    QuasiDecomposition,
    bound_alternative,
    bound_estimation,
    bound_rejection,
    bound_report,
    optimize_split,
    s_quantity,
)
from weakdistill.bounds import V_CONSTANT, _rejection_first_term
from weakdistill.quantum import scenario_isotropic
from conftest import random_physical_decomposition

# Frozen reference values for the isotropic scenario (n_pairs=5, p=0.01)
# at epsilon = delta = 0.1, cross-checked against an independent
# high-precision evaluation of the closed forms.
ISO_H_HALF_Q = 6.634236478218323
ISO_H_HALF_P_MINUS = 9.999989156510438
ISO_H_HALF_P_PLUS = 6.252252507907746
ISO_S = 5.304291356456582
ISO_BOUND_EST = 5747.502146159514
ISO_BOUND_V1 = 6788.532180625024
ISO_BOUND_V2 = 12338.27714813472
ISO_BOUND_V3 = 81653.237769179
ISO_BOUND_ALT = 45150.30065510853


def iso_inputs(epsilon=0.1, delta=0.1) -> BoundInputs:
    return BoundInputs.from_decomposition(scenario_isotropic(5, 0.01), epsilon, delta)


def free_inputs(epsilon=0.1, delta=0.1) -> BoundInputs:
    return BoundInputs(
        gamma=1.0,
        c_minus=0.0,
        epsilon=epsilon,
        delta=delta,
        h_half_q=2.0,
        h_half_p_minus=0.0,
        h_half_p_plus=2.0,
        s_quantity=0.0,
    )


class TestBoundInputs:
    def test_gamma_consistency_enforced(self):
        with pytest.raises(ValueError):
            BoundInputs(
                gamma=2.0, c_minus=0.3, epsilon=0.1, delta=0.1,
                h_half_q=1.0, h_half_p_minus=1.0, h_half_p_plus=1.0, s_quantity=0.0,
            )

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            free_inputs(epsilon=-0.1)
        with pytest.raises(ValueError):
            free_inputs(delta=1.5)

    def test_from_decomposition_frozen_values(self):
        inputs = iso_inputs()
        assert inputs.gamma == pytest.approx(101.0 / 99.0, abs=1e-12)
        assert inputs.h_half_q == pytest.approx(ISO_H_HALF_Q, rel=1e-12)
        assert inputs.h_half_p_minus == pytest.approx(ISO_H_HALF_P_MINUS, rel=1e-12)
        assert inputs.h_half_p_plus == pytest.approx(ISO_H_HALF_P_PLUS, rel=1e-12)
        assert inputs.s_quantity == pytest.approx(ISO_S, rel=1e-12)


class TestSQuantity:
    def test_hand_value(self):
        # c+=1.5, c-=0.5, p+=[0.5,0.5], p-=[1,0]:
        # only x=0 contributes sqrt(0.375/1.25) -> S = 0.3 exactly.
        d = QuasiDecomposition(
            1.5, 0.5, DiscreteDistribution([0.5, 0.5]), DiscreteDistribution([1.0, 0.0])
        )
        assert s_quantity(d) == pytest.approx(0.3, abs=1e-14)

    def test_free_state_is_zero(self):
        d = QuasiDecomposition.free(DiscreteDistribution([0.25, 0.75]))
        assert s_quantity(d) == 0.0


class TestBoundEstimation:
    def test_frozen_regression(self):
        inputs = free_inputs()
        expected = 25.0 * (2.0 + math.sqrt(8.0 * math.log(20.0))) ** 2
        assert bound_estimation(inputs) == pytest.approx(expected, rel=1e-6)

    def test_isotropic_frozen(self):
        assert bound_estimation(iso_inputs()) == pytest.approx(ISO_BOUND_EST, rel=1e-9)


class TestOptimizeSplit:
    def test_constraint_satisfied(self):
        delta = 0.1
        d1, d2 = optimize_split(lambda x: (x - 0.03) ** 2, delta)
        assert (1 - d1) * (1 - d2) == pytest.approx(1 - delta, abs=1e-9)
        assert d1 == pytest.approx(0.03, abs=1e-6)

    def test_monotone_objective_uses_grid(self):
        d1, _ = optimize_split(lambda x: -x, 0.2)
        assert d1 == pytest.approx(0.2, rel=1e-3)

    def test_invalid_delta(self):
        with pytest.raises(ValueError):
            optimize_split(lambda x: x, 1.5)


class TestBoundRejection:
    def test_isotropic_frozen_values(self):
        inputs = iso_inputs()
        assert bound_rejection(inputs, 1).value == pytest.approx(ISO_BOUND_V1, rel=1e-9)
        assert bound_rejection(inputs, 2).value == pytest.approx(ISO_BOUND_V2, rel=1e-9)
        assert bound_rejection(inputs, 3).value == pytest.approx(ISO_BOUND_V3, rel=1e-9)

    def test_split_is_feasible(self):
        b = bound_rejection(iso_inputs(), 2)
        assert 0 < b.delta1 < 0.1 and 0 < b.delta2 < 0.1
        assert (1 - b.delta1) * (1 - b.delta2) == pytest.approx(0.9, abs=1e-9)
        assert b.retry_m >= 1

    def test_invalid_variant(self):
        with pytest.raises(ValueError):
            _rejection_first_term(iso_inputs(), 4, 0.05)

    def test_free_state_total_at_most_two(self):
        # c- = 0: variant-2 first term vanishes and M = 1, so the total
        # cost collapses to 1 (at most 2 before ceiling conventions).
        b = bound_rejection(free_inputs(), 2)
        assert b.value <= 2.0
        assert b.retry_m == 1

    def test_variant_ordering_at_fixed_split(self):
        gen = np.random.default_rng(101)
        for _ in range(100):
            d = random_physical_decomposition(gen, 3)
            inputs = BoundInputs.from_decomposition(
                d, float(gen.uniform(0.02, 0.5)), float(gen.uniform(0.01, 0.5))
            )
            delta1 = inputs.delta * float(gen.uniform(0.1, 0.9))
            v1 = _rejection_first_term(inputs, 1, delta1)
            v2 = _rejection_first_term(inputs, 2, delta1)
            v3 = _rejection_first_term(inputs, 3, delta1)
            assert v1 <= v2 * (1 + 1e-12)
            assert v2 <= v3 * (1 + 1e-12)

    def test_minimized_ordering(self):
        gen = np.random.default_rng(103)
        for _ in range(25):
            d = random_physical_decomposition(gen, 3)
            inputs = BoundInputs.from_decomposition(d, 0.1, 0.1)
            values = [bound_rejection(inputs, v).value for v in (1, 2, 3)]
            assert values[0] <= values[1] * (1 + 1e-12)
            assert values[1] <= values[2] * (1 + 1e-12)


class TestBoundAlternative:
    def test_v_constant(self):
        assert V_CONSTANT == pytest.approx(1.0 - math.exp(-0.5), abs=1e-15)
        assert V_CONSTANT > 0

    def test_isotropic_frozen(self):
        assert bound_alternative(iso_inputs()).value == pytest.approx(
            ISO_BOUND_ALT, rel=1e-9
        )

    def test_beats_equal_split_evaluation(self):
        # The minimized bound can only improve on the fixed equal split
        # delta1 = delta2 = 1 - sqrt(1 - delta).
        inputs = free_inputs()
        d1 = 1.0 - math.sqrt(0.9)
        equal_split = (
            2.0 * ((1.1 / 0.1) ** 2)
            * (2.0 + math.sqrt((2.0 / V_CONSTANT) * math.log(1.0 / d1))) ** 2
        )
        b = bound_alternative(inputs)
        assert b.value <= equal_split + 1.0 + 1e-9

    def test_crossover_regimes(self):
        # Small c-: the variant-2 bound wins; tiny delta: the alternative's
        # logarithmic failure scaling wins.
        small_c = BoundInputs(
            gamma=1.0002, c_minus=1e-4, epsilon=0.1, delta=0.1,
            h_half_q=3.0, h_half_p_minus=3.0, h_half_p_plus=3.0,
            s_quantity=1e-4 * 2**3 * 0.5,
        )
        assert bound_rejection(small_c, 2).value < bound_alternative(small_c).value
        tiny_delta = BoundInputs(
            gamma=2.0, c_minus=0.5, epsilon=0.1, delta=1e-12,
            h_half_q=3.0, h_half_p_minus=3.0, h_half_p_plus=3.0,
            s_quantity=0.5 * 2**3 * 0.5,
        )
        assert bound_alternative(tiny_delta).value < bound_rejection(tiny_delta, 2).value


class TestMonotonicityGrid:
    def test_non_increasing_in_epsilon_non_decreasing_in_gamma(self):
        epsilons = np.linspace(0.02, 1.0, 20)
        c_minuses = np.linspace(0.0, 2.0, 20)
        for c_minus in c_minuses:
            values_est, values_v2, values_alt = [], [], []
            for eps in epsilons:
                inputs = BoundInputs(
                    gamma=1 + 2 * c_minus, c_minus=float(c_minus),
                    epsilon=float(eps), delta=0.1,
                    h_half_q=3.0, h_half_p_minus=3.0, h_half_p_plus=3.0,
                    s_quantity=float(c_minus) * 2**3 * 0.5,
                )
                values_est.append(bound_estimation(inputs))
                values_v2.append(bound_rejection(inputs, 2).value)
                values_alt.append(bound_alternative(inputs).value)
            for seq in (values_est, values_v2, values_alt):
                diffs = np.diff(seq)
                assert np.all(diffs <= 1e-9)
        # Non-decreasing in gamma at fixed epsilon.
        for eps in (0.05, 0.2):
            values = []
            for c_minus in c_minuses:
                inputs = BoundInputs(
                    gamma=1 + 2 * c_minus, c_minus=float(c_minus),
                    epsilon=float(eps), delta=0.1,
                    h_half_q=3.0, h_half_p_minus=3.0, h_half_p_plus=3.0,
                    s_quantity=float(c_minus) * 2**3 * 0.5,
                )
                values.append(bound_estimation(inputs))
            assert np.all(np.diff(values) >= -1e-9)


class TestBoundReport:
    def test_report_structure(self):
        d = scenario_isotropic(2, 0.01)
        report = bound_report(d, 0.1, 0.1)
        data = report.to_dict()
        assert set(data) == {"estimation_bound", "rejection_bounds", "alt_bound", "retry_m"}
        assert set(data["rejection_bounds"]) == {"1", "2", "3"}
        assert data["retry_m"] == report.rejection_bounds[2].retry_m
        for entry in data["rejection_bounds"].values():
            assert entry["value"] > 0
