"""Figure rendering for prethermal simulation CSV output."""

from .figures import Curve, FigureSpec, build_figure_spec, render

__all__ = ["Curve", "FigureSpec", "build_figure_spec", "render"]

__version__ = "0.1.0"
