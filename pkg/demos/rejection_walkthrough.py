"""Step through the weak-distillation pipeline on a tiny decomposition:
estimate acceptance ratios from signed samples, inspect the exact output
law of the resulting sampler, check it against the computable error bound,
and finally draw actual samples by rejection.
"""
import numpy as np

from weakdistill import (
    DiscreteDistribution,
    QuasiDecomposition,
    Rng,
    WeakSampler,
    estimate_ratios,
    ideal_ratios,
    mixture,
    output_distribution,
    retry_budget,
    run_rejection,
    target,
    tvd,
    tvd_error_bound,
)


def main():
    d = QuasiDecomposition(
        1.5,
        0.5,
        DiscreteDistribution([0.40, 0.35, 0.15, 0.10]),
        DiscreteDistribution([0.40, 0.25, 0.05, 0.30]),
    )
    p = target(d).to_distribution()
    q = mixture(d)
    print(f"gamma = {d.gamma():.3f}")
    print(f"target  p = {np.round(p.probs, 4)}")
    print(f"mixture q = {np.round(q.probs, 4)}")
    print(f"ideal acceptance ratios = {np.round(ideal_ratios(d), 4)}")

    rng = Rng(seed=2, stream=1)
    for n in (10, 100, 10_000):
        table = estimate_ratios(d, n, rng)
        sampler = WeakSampler(d, table)
        out = output_distribution(sampler)
        print(
            f"\nn = {n:>6}: ratios = {np.round(table.ratios, 3)}"
            f"\n  output-law tvd from target = {tvd(p, out):.4f}"
            f"\n  computable error bound     = {tvd_error_bound(d, table):.4f}"
        )

    # Draw real samples with a retry budget chosen for eps = 0.1, delta2 = 0.05.
    budget = retry_budget(d.gamma(), d.c_minus, 0.1, 0.05)
    print(f"\nretry budget M = {budget} (eps = 0.1, delta2 = 0.05)")
    sampler = WeakSampler(d, estimate_ratios(d, 10_000, Rng(2, stream=2)))
    draw_rng = Rng(2, stream=3)
    results = [run_rejection(sampler, budget * 50, draw_rng) for _ in range(20_000)]
    counts = np.bincount([r.outcome.index for r in results], minlength=4)
    attempts = np.mean([r.attempts for r in results])
    print(f"empirical frequencies = {np.round(counts / counts.sum(), 4)}")
    print(f"mean attempts per accepted sample = {attempts:.2f} (K = gamma = {d.gamma():.2f})")


if __name__ == "__main__":
    main()
