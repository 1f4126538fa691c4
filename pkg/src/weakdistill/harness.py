"""Experiment runner: sweep sample budgets, average TVD over seeded trials,
evaluate bound curves, and emit deterministic CSV/JSON artifacts.

Stream layout: stream 0 of the config seed builds the scenario; trial t
(1-based) uses stream t, so trials are independent and reproducible in any
execution order.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .bounds import BoundInputs, bound_estimation, bound_report, tightest_rejection_bound
from .distributions import DiscreteDistribution, Rng, tvd
from .estimation import estimate_distribution
from .quasiprob import QuasiDecomposition, draw_signed_counts, mixture, target
from .rejection import AcceptanceTable, output_distribution_from_ratios
from . import quantum

RAW_HEADER = "scenario,method,n_samples,trial,seed,tvd"
AGG_HEADER = "scenario,method,n_samples,mean_tvd"
BOUNDS_HEADER = "scenario,method,n_samples,implied_epsilon"

METHODS = ("rejection", "estimation")


class ConfigError(ValueError):
    """Malformed experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    scenario_name: str
    scenario_params: dict
    seed: int
    methods: tuple[str, ...] = METHODS
    sample_grid: tuple[int, ...] = (0, 10, 100, 1_000, 10_000, 100_000)
    trials: int = 20
    delta: float = 0.1
    output: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if any(m not in METHODS for m in self.methods):
            raise ConfigError(f"methods must be a subset of {METHODS}")
        grid = tuple(int(n) for n in self.sample_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])) or any(n < 0 for n in grid):
            raise ConfigError("sample_grid must be strictly increasing and nonnegative")
        if not 0 < self.delta < 1:
            raise ConfigError("delta must lie in (0, 1)")
        object.__setattr__(self, "sample_grid", grid)
        object.__setattr__(self, "methods", tuple(self.methods))

    @classmethod
    def from_dict(cls, data: dict, **overrides) -> "ExperimentConfig":
        try:
            scenario = data["scenario"]
            kwargs = dict(
                scenario_name=scenario["name"],
                scenario_params=dict(scenario.get("params", {})),
                seed=int(scenario.get("seed", 0)),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"missing scenario section: {exc}") from exc
        for key in ("methods", "sample_grid", "trials", "delta", "output", "threads"):
            if key in data:
                kwargs[key] = data[key]
        for key, value in overrides.items():
            if value is not None:
                kwargs[key] = value
        if "methods" in kwargs:
            kwargs["methods"] = tuple(kwargs["methods"])
        if "sample_grid" in kwargs:
            kwargs["sample_grid"] = tuple(kwargs["sample_grid"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "ExperimentConfig":
        try:
            data = yaml.safe_load(Path(path).read_text())
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be a mapping")
        return cls.from_dict(data, **overrides)


def build_scenario(name: str, params: dict, seed: int) -> QuasiDecomposition:
    """Construct the named scenario's decomposition with stream 0 of seed."""
    rng = Rng(seed, stream=0)
    if name == "depolarizing":
        return quantum.scenario_depolarizing(
            int(params.get("n", 4)), float(params.get("p", 0.005)), rng
        )
    if name == "isotropic":
        return quantum.scenario_isotropic(
            int(params.get("n_pairs", 5)), float(params.get("p", 0.01))
        )
    if name == "iqp":
        return quantum.scenario_iqp(
            int(params.get("n", 5)),
            int(params.get("t_count", 5)),
            float(params.get("p", 0.1)),
            rng,
        )
    raise ConfigError(f"unknown scenario {name!r}")


@dataclass(frozen=True)
class TvdRow:
    scenario: str
    method: str
    n_samples: int
    trial: int
    seed: int
    tvd: float


@dataclass(frozen=True)
class TvdCurve:
    rows: tuple[TvdRow, ...]
    aggregates: tuple[tuple[str, str, int, float], ...]


def _run_trial(args) -> list[TvdRow]:
    decomposition_dict, scenario_name, seed, trial, grid, methods = args
    d = QuasiDecomposition.from_dict(decomposition_dict)
    p_exact = target(d).to_distribution()
    rng = Rng(seed, stream=trial)
    rows = []
    for n in grid:
        # One signed-count draw per budget feeds both methods (paired seeds).
        counts_plus, counts_minus = draw_signed_counts(d, n, rng)
        if "rejection" in methods:
            table = AcceptanceTable.from_counts(counts_plus, counts_minus)
            p_tilde = output_distribution_from_ratios(d, table.ratios)
            rows.append(
                TvdRow(scenario_name, "rejection", n, trial, seed, tvd(p_exact, p_tilde))
            )
        if "estimation" in methods:
            gamma = d.gamma()
            if n == 0:
                raw = np.zeros(p_exact.size)
            else:
                raw = gamma * (counts_plus - counts_minus) / n
            clipped = np.clip(raw, 0.0, None)
            mass = clipped.sum()
            if mass <= 0:
                estimate = DiscreteDistribution.uniform(d.n_bits)
            else:
                estimate = DiscreteDistribution(clipped / mass, d.n_bits)
            rows.append(
                TvdRow(scenario_name, "estimation", n, trial, seed, tvd(p_exact, estimate))
            )
    return rows


def run_experiment(cfg: ExperimentConfig) -> TvdCurve:
    d = build_scenario(cfg.scenario_name, cfg.scenario_params, cfg.seed)
    tasks = [
        (d.to_dict(), cfg.scenario_name, cfg.seed, trial, cfg.sample_grid, cfg.methods)
        for trial in range(1, cfg.trials + 1)
    ]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            per_trial = list(pool.map(_run_trial, tasks))
    else:
        per_trial = [_run_trial(t) for t in tasks]
    rows = [row for trial_rows in per_trial for row in trial_rows]
    rows.sort(key=lambda r: (r.scenario, r.method, r.n_samples, r.trial))

    aggregates = []
    for method in cfg.methods:
        for n in cfg.sample_grid:
            values = [r.tvd for r in rows if r.method == method and r.n_samples == n]
            aggregates.append(
                (cfg.scenario_name, method, n, float(np.mean(values)))
            )
    aggregates.sort(key=lambda a: (a[0], a[1], a[2]))
    return TvdCurve(tuple(rows), tuple(aggregates))


def _invert_bound(evaluate, budget: int) -> float:
    """Smallest epsilon achievable with `budget` samples, clamped to 1."""
    lo, hi = 1e-6, 1.0
    if evaluate(hi) > budget:
        return 1.0
    if evaluate(lo) <= budget:
        return lo
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if evaluate(mid) <= budget:
            hi = mid
        else:
            lo = mid
    return hi


def bound_curves(cfg: ExperimentConfig) -> list[tuple[str, str, int, float]]:
    """Per-budget implied epsilon for the tightest bound of each method."""
    d = build_scenario(cfg.scenario_name, cfg.scenario_params, cfg.seed)

    def rejection_eval(epsilon: float) -> float:
        inputs = BoundInputs.from_decomposition(d, epsilon, cfg.delta)
        return tightest_rejection_bound(inputs)

    def estimation_eval(epsilon: float) -> float:
        inputs = BoundInputs.from_decomposition(d, epsilon, cfg.delta)
        return bound_estimation(inputs)

    rows = []
    for method, evaluate in (("rejection", rejection_eval), ("estimation", estimation_eval)):
        if method not in cfg.methods:
            continue
        for n in cfg.sample_grid:
            rows.append((cfg.scenario_name, method, n, _invert_bound(evaluate, n)))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return rows


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def curves_to_csv(curve: TvdCurve) -> tuple[str, str]:
    raw_lines = [RAW_HEADER]
    for r in curve.rows:
        raw_lines.append(
            f"{r.scenario},{r.method},{r.n_samples},{r.trial},{r.seed},{_fmt(r.tvd)}"
        )
    agg_lines = [AGG_HEADER]
    for scenario, method, n, mean_tvd in curve.aggregates:
        agg_lines.append(f"{scenario},{method},{n},{_fmt(mean_tvd)}")
    return "\n".join(raw_lines) + "\n", "\n".join(agg_lines) + "\n"


def bounds_to_csv(rows: list[tuple[str, str, int, float]]) -> str:
    lines = [BOUNDS_HEADER]
    for scenario, method, n, eps in rows:
        lines.append(f"{scenario},{method},{n},{_fmt(eps)}")
    return "\n".join(lines) + "\n"


def write_experiment(cfg: ExperimentConfig, curve: TvdCurve, prefix: str | Path):
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    raw_csv, agg_csv = curves_to_csv(curve)
    raw_path = prefix.with_name(prefix.name + "_curves.csv")
    agg_path = prefix.with_name(prefix.name + "_aggregate.csv")
    raw_path.write_text(raw_csv)
    agg_path.write_text(agg_csv)
    return raw_path, agg_path


def write_bounds(
    cfg: ExperimentConfig,
    rows: list[tuple[str, str, int, float]],
    prefix: str | Path,
    epsilon_for_report: float = 0.1,
):
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_name(prefix.name + "_bounds.csv")
    csv_path.write_text(bounds_to_csv(rows))
    d = build_scenario(cfg.scenario_name, cfg.scenario_params, cfg.seed)
    report = bound_report(d, epsilon_for_report, cfg.delta)
    json_path = prefix.with_name(prefix.name + "_bound_report.json")
    json_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return csv_path, json_path


def export_scenario(name: str, params: dict, seed: int) -> dict:
    """Replayable scenario record: generator, parameters, seed, decomposition."""
    d = build_scenario(name, params, seed)
    return {
        "generator": name,
        "params": params,
        "seed": seed,
        "decomposition": d.to_dict(),
    }
