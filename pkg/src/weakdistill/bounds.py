"""Closed-form sample-cost bounds and the failure-probability split optimizer.

All concentration-style formulas use natural logarithms; Renyi-entropy
terms enter as 2**(H/2) and are base-independent as written. Bound values
are returned as reals; callers apply ceilings only when quoting sample
counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import NORMALIZATION_TOL, renyi_entropy
from .quasiprob import QuasiDecomposition, mixture
from .rejection import retry_budget

# The tail-lowering constant of the alternative (Chernoff-style) bound.
# The proof computes v = 1 - e**(-1/2) = 0.393...
V_CONSTANT = 1.0 - math.exp(-0.5)


@dataclass(frozen=True)
class BoundInputs:
    """Everything the closed-form bounds consume, precomputed once."""

    gamma: float
    c_minus: float
    epsilon: float
    delta: float
    h_half_q: float
    h_half_p_minus: float
    h_half_p_plus: float
    s_quantity: float

    def __post_init__(self):
        if abs(self.gamma - (1.0 + 2.0 * self.c_minus)) > NORMALIZATION_TOL:
            raise ValueError("gamma must equal 1 + 2 * c_minus")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")

    @property
    def c_plus(self) -> float:
        return 1.0 + self.c_minus

    @classmethod
    def from_decomposition(
        cls, d: QuasiDecomposition, epsilon: float, delta: float
    ) -> "BoundInputs":
        return cls(
            gamma=d.gamma(),
            c_minus=d.c_minus,
            epsilon=epsilon,
            delta=delta,
            h_half_q=renyi_entropy(mixture(d), 0.5),
            h_half_p_minus=renyi_entropy(d.sigma_minus, 0.5),
            h_half_p_plus=renyi_entropy(d.sigma_plus, 0.5),
            s_quantity=s_quantity(d),
        )


def s_quantity(d: QuasiDecomposition) -> float:
    """S = (sum_x sqrt(c+ c- p+_x p-_x / (c+ p+_x + c- p-_x)))**2."""
    num = d.c_plus * d.c_minus * d.sigma_plus.probs * d.sigma_minus.probs
    den = d.c_plus * d.sigma_plus.probs + d.c_minus * d.sigma_minus.probs
    terms = np.zeros_like(den)
    support = den > 0
    terms[support] = np.sqrt(num[support] / den[support])
    return float(math.fsum(terms) ** 2)


def bound_estimation(inputs: BoundInputs) -> float:
    """Probability-estimation cost: (g^2/4e^2)(2^(H/2) + sqrt(8 ln(2/d)))^2."""
    entropy_term = 2.0 ** (0.5 * inputs.h_half_q)
    tail_term = math.sqrt(8.0 * math.log(2.0 / inputs.delta))
    return (inputs.gamma**2 / (4.0 * inputs.epsilon**2)) * (
        entropy_term + tail_term
    ) ** 2


def optimize_split(objective, delta: float) -> tuple[float, float]:
    """Minimize objective(delta1) subject to (1-d1)(1-d2) = 1-delta.

    Golden-section search on a bracketed interior minimum (relative
    tolerance 1e-6); falls back to a 10**4-point grid scan when no interior
    bracket exists (monotone or noisy objectives).
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    lo = delta * 1e-9
    hi = delta * (1.0 - 1e-9)

    def delta2_of(delta1: float) -> float:
        return (delta - delta1) / (1.0 - delta1)

    # Coarse scan to bracket a minimum.
    coarse = np.linspace(lo, hi, 129)
    values = [objective(x) for x in coarse]
    best = int(np.argmin(values))
    bracketed = 0 < best < len(coarse) - 1

    if bracketed:
        a, b = coarse[best - 1], coarse[best + 1]
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        c = b - invphi * (b - a)
        dpt = a + invphi * (b - a)
        fc, fd = objective(c), objective(dpt)
        while (b - a) > 1e-6 * max(abs(b), 1e-30):
            if fc < fd:
                b, dpt, fd = dpt, c, fc
                c = b - invphi * (b - a)
                fc = objective(c)
            else:
                a, c, fc = c, dpt, fd
                dpt = a + invphi * (b - a)
                fd = objective(dpt)
        delta1 = 0.5 * (a + b)
    else:
        grid = np.linspace(lo, hi, 10_000)
        delta1 = float(grid[int(np.argmin([objective(x) for x in grid]))])

    return float(delta1), float(delta2_of(delta1))


@dataclass(frozen=True)
class SplitBound:
    """A minimized bound value together with its optimal failure split."""

    value: float
    delta1: float
    delta2: float
    retry_m: int


def _rejection_first_term(inputs: BoundInputs, variant: int, delta1: float) -> float:
    prefactor = ((1.0 + inputs.epsilon) / inputs.epsilon) ** 2
    if variant == 1:
        coeff = 8.0 * inputs.gamma
        if inputs.s_quantity == 0.0 and inputs.c_minus == 0.0:
            return 0.0
        inner = math.sqrt(inputs.s_quantity) + math.sqrt(inputs.c_minus / delta1)
    elif variant == 2:
        coeff = 8.0 * inputs.c_minus * inputs.gamma
        if coeff == 0.0:
            return 0.0
        inner = 2.0 ** (0.5 * inputs.h_half_p_minus) + delta1 ** (-0.5)
    elif variant == 3:
        coeff = 8.0 * inputs.c_plus * inputs.gamma
        inner = 2.0 ** (0.5 * inputs.h_half_p_plus) + math.sqrt(
            inputs.c_minus / (inputs.c_plus * delta1)
        )
    else:
        raise ValueError("variant must be 1, 2, or 3")
    return coeff * prefactor * inner**2


def _minimize_over_retries(inputs: BoundInputs, first_term) -> SplitBound:
    """Exact split minimization for first terms monotone decreasing in delta1.

    The total cost is first_term(delta1) + M(delta2), and M is an integer
    staircase, so for every candidate M = m the optimum sits at the
    smallest delta2 keeping the retry budget at m; enumerating m is exact
    where a smooth 1-D search can straddle a step.
    """
    arg = (1.0 + inputs.epsilon) * inputs.gamma / (
        (1.0 + inputs.epsilon) * inputs.c_minus + inputs.epsilon * inputs.gamma
    )
    if arg <= 1.0:
        raise ValueError("acceptance-probability bound is vacuous for these inputs")
    best: SplitBound | None = None
    m = 1
    stall = 0
    while True:
        delta2 = min(arg**-m, inputs.delta * (1.0 - 1e-12))
        delta1 = (inputs.delta - delta2) / (1.0 - delta2)
        if delta1 <= 0:
            m += 1
            continue
        value = first_term(delta1) + m
        if best is None or value < best.value:
            best = SplitBound(value, delta1, delta2, m)
            stall = 0
        else:
            stall += 1
        m += 1
        # First-term gains decay geometrically in m; stop once adding
        # retries has not paid off for a while or can no longer win.
        if best is not None and (m > best.value or stall > 64):
            return best


def bound_rejection(inputs: BoundInputs, variant: int) -> SplitBound:
    """Rejection-sampling cost bound, minimized over the delta1/delta2 split.

    Variant 1 uses the exact quantity S, variant 2 the sigma_minus entropy,
    variant 3 the sigma_plus entropy; they are ordered 1 <= 2 <= 3 at any
    fixed split.
    """
    return _minimize_over_retries(
        inputs, lambda delta1: _rejection_first_term(inputs, variant, delta1)
    )


def bound_alternative(inputs: BoundInputs) -> SplitBound:
    """Chernoff-style bound with logarithmic failure-probability scaling."""
    prefactor = 2.0 * inputs.gamma**2 * ((1.0 + inputs.epsilon) / inputs.epsilon) ** 2
    entropy_term = 2.0 ** (0.5 * inputs.h_half_q)

    def first_term(delta1: float) -> float:
        inner = entropy_term + math.sqrt((2.0 / V_CONSTANT) * math.log(1.0 / delta1))
        return prefactor * inner**2

    return _minimize_over_retries(inputs, first_term)


@dataclass(frozen=True)
class BoundReport:
    """Every implemented sample-cost bound evaluated for one scenario."""

    estimation_bound: float
    rejection_bounds: dict[int, SplitBound]
    alt_bound: SplitBound
    retry_m: int

    def to_dict(self) -> dict:
        return {
            "estimation_bound": self.estimation_bound,
            "rejection_bounds": {
                str(k): {
                    "value": b.value,
                    "delta1": b.delta1,
                    "delta2": b.delta2,
                    "retry_m": b.retry_m,
                }
                for k, b in self.rejection_bounds.items()
            },
            "alt_bound": {
                "value": self.alt_bound.value,
                "delta1": self.alt_bound.delta1,
                "delta2": self.alt_bound.delta2,
                "retry_m": self.alt_bound.retry_m,
            },
            "retry_m": self.retry_m,
        }


def bound_report(d: QuasiDecomposition, epsilon: float, delta: float) -> BoundReport:
    inputs = BoundInputs.from_decomposition(d, epsilon, delta)
    rejection_bounds = {v: bound_rejection(inputs, v) for v in (1, 2, 3)}
    alt = bound_alternative(inputs)
    return BoundReport(
        estimation_bound=bound_estimation(inputs),
        rejection_bounds=rejection_bounds,
        alt_bound=alt,
        retry_m=rejection_bounds[2].retry_m,
    )


def tightest_rejection_bound(inputs: BoundInputs) -> float:
    """Pointwise minimum over all rejection-side bound formulas."""
    values = [bound_rejection(inputs, v).value for v in (1, 2, 3)]
    values.append(bound_alternative(inputs).value)
    return min(values)
