"""Weak distillation via rejection sampling with estimated acceptance ratios.

The pipeline: draw signed samples from the decomposition, tabulate per-
outcome counts, derive clipped acceptance ratios R_x, then run rejection
sampling against the mixture q_x. The exact conditional output law of the
resulting imperfect sampler is available in closed form, which is what the
experiment harness uses for analytic TVD evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import DiscreteDistribution, Outcome, Rng
from .quasiprob import QuasiDecomposition, draw_signed_counts, mixture, target

# Target entries in [-TARGET_CLAMP_TOL, 0) are float noise from tensor
# expansion and are clamped to zero; anything lower is unphysical.
TARGET_CLAMP_TOL = 1e-9


class RejectionFailure(RuntimeError):
    """No sample accepted within the attempt budget."""

    def __init__(self, attempts: int):
        super().__init__(f"no sample accepted in {attempts} attempts")
        self.attempts = attempts


def _ratios_from_counts(counts_plus: np.ndarray, counts_minus: np.ndarray):
    """Raw ratios (N+ - N-)/(N+ + N-), with the empty-count convention 1."""
    totals = counts_plus + counts_minus
    raw = np.ones(totals.shape, dtype=float)
    visited = totals > 0
    raw[visited] = (counts_plus[visited] - counts_minus[visited]) / totals[visited]
    return raw


@dataclass(frozen=True)
class AcceptanceTable:
    """Signed-sample counts and the derived clipped acceptance ratios."""

    counts_plus: np.ndarray
    counts_minus: np.ndarray
    ratios: np.ndarray
    n_samples_used: int

    @classmethod
    def from_counts(
        cls, counts_plus: np.ndarray, counts_minus: np.ndarray
    ) -> "AcceptanceTable":
        counts_plus = np.asarray(counts_plus, dtype=np.int64)
        counts_minus = np.asarray(counts_minus, dtype=np.int64)
        if counts_plus.shape != counts_minus.shape:
            raise ValueError("count vectors must have equal length")
        if np.any(counts_plus < 0) or np.any(counts_minus < 0):
            raise ValueError("counts must be nonnegative")
        ratios = np.clip(_ratios_from_counts(counts_plus, counts_minus), 0.0, 1.0)
        ratios.flags.writeable = False
        n_used = int(counts_plus.sum() + counts_minus.sum())
        return cls(counts_plus, counts_minus, ratios, n_used)

    def to_dict(self) -> dict:
        return {
            "counts_plus": self.counts_plus.tolist(),
            "counts_minus": self.counts_minus.tolist(),
            "ratios": self.ratios.tolist(),
            "n_samples_used": self.n_samples_used,
        }


@dataclass(frozen=True)
class RatioError:
    """Deviation of estimated ratios from p_x/(K q_x); diagnostic only.

    eps uses the clipped ratios R_x, eps_prime the unclipped raw values;
    clipping never increases the error, so |eps| <= |eps_prime| entrywise.
    """

    eps: np.ndarray
    eps_prime: np.ndarray


def estimate_ratios(d: QuasiDecomposition, n: int, rng: Rng) -> AcceptanceTable:
    """Tabulate n signed draws and derive acceptance ratios."""
    counts_plus, counts_minus = draw_signed_counts(d, n, rng)
    return AcceptanceTable.from_counts(counts_plus, counts_minus)


def _physical_target(d: QuasiDecomposition) -> np.ndarray:
    values = target(d).values
    if np.any(values < -TARGET_CLAMP_TOL):
        raise ValueError("decomposition target has negative entries (unphysical)")
    return np.clip(values, 0.0, None)


def ideal_ratios(d: QuasiDecomposition) -> np.ndarray:
    """Exact acceptance ratios p_x / (gamma q_x), 0 where q_x = 0."""
    p = _physical_target(d)
    q = mixture(d).probs
    ratios = np.zeros_like(p)
    support = q > 0
    ratios[support] = p[support] / (d.gamma() * q[support])
    return np.clip(ratios, 0.0, 1.0)


def compute_ratio_errors(d: QuasiDecomposition, table: AcceptanceTable) -> RatioError:
    ideal = ideal_ratios(d)
    raw = _ratios_from_counts(table.counts_plus, table.counts_minus)
    return RatioError(eps=ideal - table.ratios, eps_prime=ideal - raw)


@dataclass(frozen=True)
class WeakSampler:
    """A decomposition plus an acceptance table, ready for rejection runs."""

    decomposition: QuasiDecomposition
    table: AcceptanceTable
    k_constant: float = field(default=float("nan"))

    def __post_init__(self):
        if self.table.ratios.size != 1 << self.decomposition.n_bits:
            raise ValueError("table size does not match decomposition")
        # K is fixed to gamma, never the true sup p/q.
        object.__setattr__(self, "k_constant", self.decomposition.gamma())

    @classmethod
    def from_estimation(
        cls, d: QuasiDecomposition, n: int, rng: Rng
    ) -> "WeakSampler":
        return cls(d, estimate_ratios(d, n, rng))

    @classmethod
    def with_ideal_ratios(cls, d: QuasiDecomposition) -> "WeakSampler":
        size = 1 << d.n_bits
        zeros = np.zeros(size, dtype=np.int64)
        table = AcceptanceTable(zeros, zeros, ideal_ratios(d), 0)
        return cls(d, table)


@dataclass(frozen=True)
class RejectionResult:
    outcome: Outcome
    attempts: int


def run_rejection(s: WeakSampler, max_attempts: int, rng: Rng) -> RejectionResult:
    """Draw from the mixture until a sample is accepted with probability R_x."""
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    q = mixture(s.decomposition)
    cdf = np.cumsum(q.probs)
    gen = rng.generator
    for attempt in range(1, max_attempts + 1):
        x = int(np.searchsorted(cdf, gen.random(), side="right"))
        x = min(x, q.size - 1)
        if gen.random() < s.table.ratios[x]:
            return RejectionResult(Outcome(x, q.n_bits), attempt)
    raise RejectionFailure(max_attempts)


def output_distribution_from_ratios(
    d: QuasiDecomposition, ratios: np.ndarray
) -> DiscreteDistribution:
    """Exact law of the accepted sample: R_x q_x / sum_y R_y q_y."""
    q = mixture(d).probs
    weighted = np.asarray(ratios, dtype=float) * q
    mass = weighted.sum()
    if mass <= 1e-12:
        raise ValueError("total acceptance mass is degenerate")
    return DiscreteDistribution(weighted / mass, d.n_bits)


def output_distribution(s: WeakSampler) -> DiscreteDistribution:
    return output_distribution_from_ratios(s.decomposition, s.table.ratios)


def tvd_error_bound(d: QuasiDecomposition, table: AcceptanceTable) -> float:
    """Upper bound T/(1-T) on tvd(p, output) with T = sum_x |p_x - gamma R_x q_x|.

    Returns math.inf when T >= 1, where the bound is vacuous (TVD <= 1
    always holds).
    """
    p = _physical_target(d)
    q = mixture(d).probs
    t = float(np.abs(p - d.gamma() * table.ratios * q).sum())
    if t >= 1.0:
        return math.inf
    return t / (1.0 - t)


def retry_budget(gamma: float, c_minus: float, epsilon: float, delta2: float) -> int:
    """Attempts M guaranteeing acceptance with probability >= 1 - delta2.

    M = ceil( ln(1/delta2) / ln((1+eps)*gamma / ((1+eps)*c- + eps*gamma)) ),
    floored at 1 since at least one attempt is always needed.
    """
    if gamma < 1 or c_minus < 0:
        raise ValueError("need gamma >= 1 and c_minus >= 0")
    if not 0 < delta2 < 1:
        raise ValueError("delta2 must lie in (0, 1)")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    arg = (1.0 + epsilon) * gamma / ((1.0 + epsilon) * c_minus + epsilon * gamma)
    if arg <= 1.0:
        raise ValueError("acceptance-probability bound is vacuous for these inputs")
    m = math.ceil(math.log(1.0 / delta2) / math.log(arg))
    return max(1, m)
