"""Run the full TVD sweep for all three benchmark scenarios and print a
side-by-side comparison of the rejection sampler and the estimation
baseline at every sample budget.

Writes the same CSV artifacts as `weakdistill run` into ./sweep_output/.
"""
from pathlib import Path

from weakdistill.harness import ExperimentConfig, run_experiment, write_experiment

SCENARIOS = {
    "depolarizing": {"n": 4, "p": 0.005},
    "isotropic": {"n_pairs": 5, "p": 0.01},
    "iqp": {"n": 5, "t_count": 5, "p": 0.1},
}

SEED = 7


def main():
    out_dir = Path("sweep_output")
    for name, params in SCENARIOS.items():
        cfg = ExperimentConfig.from_dict(
            {"scenario": {"name": name, "params": params, "seed": SEED}}
        )
        curve = run_experiment(cfg)
        write_experiment(cfg, curve, out_dir / name)

        means = {(method, n): m for _, method, n, m in curve.aggregates}
        print(f"\n=== {name} (seed {SEED}, {cfg.trials} trials) ===")
        print(f"{'N':>8}  {'rejection':>10}  {'estimation':>10}")
        for n in cfg.sample_grid:
            rej = means[("rejection", n)]
            est = means[("estimation", n)]
            marker = "  <-- rejection wins" if rej < est else ""
            print(f"{n:>8}  {rej:>10.4f}  {est:>10.4f}{marker}")
    print(f"\nCSV artifacts written under {out_dir}/")


if __name__ == "__main__":
    main()
