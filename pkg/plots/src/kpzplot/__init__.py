"""Diagnostic figures for kpzlab experiment CSVs.

Pure rendering: every number shown (including fitted slopes) is read from
the CSV; the renderer never recomputes statistics.
"""

__version__ = "0.1.0"

from .render import PlotSpec, SchemaError, render

__all__ = ["PlotSpec", "SchemaError", "render", "__version__"]
