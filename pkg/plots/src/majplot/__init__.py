"""Figure rendering for the propagation CSV outputs."""

from .schema import SchemaError, read_fig1_csv, read_fig2_csv
from .render import PlotSpec, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "render", "SchemaError", "read_fig1_csv", "read_fig2_csv"]
