"""Publication-style figures from lzcqed CSV output."""

from .renderer import CsvTable, FigureSpec, RenderError, build_figure, load_csv, render

__version__ = "0.1.0"

__all__ = ["CsvTable", "FigureSpec", "RenderError", "build_figure",
           "load_csv", "render", "__version__"]
