"""Render TVD-sweep figures from the experiment CSV artifacts.

Inputs are the aggregate curves CSV (scenario,method,n_samples,mean_tvd)
and the bounds CSV (scenario,method,n_samples,implied_epsilon). Rendering
performs no numerical work beyond clamping bound values at 1; every
plotted number comes straight from the files.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

CURVE_COLUMNS = ("scenario", "method", "n_samples", "mean_tvd")
BOUND_COLUMNS = ("scenario", "method", "n_samples", "implied_epsilon")

METHOD_LABELS = {"rejection": "Rejection TVD", "estimation": "Estimation TVD"}
METHOD_COLORS = {"rejection": "tab:blue", "estimation": "tab:orange"}

PANEL_LETTERS = ("a", "b", "c")


class PlotInputError(ValueError):
    """Malformed or empty CSV input."""


@dataclass(frozen=True)
class PanelSpec:
    """One panel: a scenario name plus its curve and bound rows."""

    scenario: str
    curves: dict[str, list[tuple[int, float]]]
    bounds: dict[str, list[tuple[int, float]]]


def read_table(path: str | Path, columns: tuple[str, ...]) -> list[dict]:
    """Parse a CSV file, validating the expected columns exist."""
    try:
        with open(path, newline="") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames
            rows = list(reader)
    except OSError as exc:
        raise PlotInputError(f"cannot read {path}: {exc}") from exc
    if header is None:
        raise PlotInputError(f"{path} is empty")
    missing = [c for c in columns if c not in header]
    if missing:
        raise PlotInputError(f"{path} is missing columns {missing}")
    if not rows:
        raise PlotInputError(f"{path} has no data rows")
    return rows


def _series_by_scenario(rows: list[dict], value_column: str):
    table: dict[str, dict[str, list[tuple[int, float]]]] = {}
    for row in rows:
        try:
            n = int(row["n_samples"])
            value = float(row[value_column])
        except (TypeError, ValueError) as exc:
            raise PlotInputError(f"unparsable row {row}") from exc
        series = table.setdefault(row["scenario"], {}).setdefault(row["method"], [])
        series.append((n, value))
    for methods in table.values():
        for series in methods.values():
            series.sort()
    return table


def build_panels(
    curve_rows: list[dict], bound_rows: list[dict], panels: list[str] | None = None
) -> list[PanelSpec]:
    """Pair scenarios with their series; letters a,b,c select panels in order."""
    curves = _series_by_scenario(curve_rows, "mean_tvd")
    bounds = _series_by_scenario(bound_rows, "implied_epsilon")
    scenarios = sorted(curves)
    if panels is not None:
        selected = []
        for letter in panels:
            if letter not in PANEL_LETTERS:
                raise PlotInputError(f"unknown panel {letter!r}, expected a, b, or c")
            index = PANEL_LETTERS.index(letter)
            if index >= len(scenarios):
                raise PlotInputError(
                    f"panel {letter!r} requested but only {len(scenarios)} scenario(s) present"
                )
            selected.append(scenarios[index])
        scenarios = selected
    return [
        PanelSpec(name, curves[name], bounds.get(name, {})) for name in scenarios
    ]


def render(panel_specs: list[PanelSpec], out_path: str | Path) -> Path:
    """Draw one figure with one panel per spec and save it."""
    if not panel_specs:
        raise PlotInputError("no panels to render")
    fig, axes = plt.subplots(
        1, len(panel_specs), figsize=(4.5 * len(panel_specs), 3.6), squeeze=False
    )
    for ax, spec in zip(axes[0], panel_specs):
        for method, series in sorted(spec.curves.items()):
            xs = [n for n, _ in series]
            ys = [v for _, v in series]
            ax.plot(
                xs, ys,
                linestyle="-",
                color=METHOD_COLORS.get(method),
                label=METHOD_LABELS.get(method, method),
            )
        for method, series in sorted(spec.bounds.items()):
            xs = [n for n, _ in series]
            ys = [min(v, 1.0) for _, v in series]  # TVD never exceeds 1
            ax.plot(
                xs, ys,
                linestyle=":",
                color=METHOD_COLORS.get(method),
                label=f"{METHOD_LABELS.get(method, method)} bound",
            )
        # symlog keeps the N = 0 grid point visible on a log-style axis.
        ax.set_xscale("symlog", linthresh=1)
        ax.set_xlabel("sample count")
        ax.set_ylabel("total variation distance")
        ax.set_title(spec.scenario)
        ax.legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
