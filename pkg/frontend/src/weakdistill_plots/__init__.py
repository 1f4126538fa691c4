"""Figure rendering for TVD sweeps and sample-cost bound curves."""

from .render import PanelSpec, PlotInputError, build_panels, read_table, render

__all__ = ["PanelSpec", "PlotInputError", "build_panels", "read_table", "render"]
__version__ = "0.1.0"
