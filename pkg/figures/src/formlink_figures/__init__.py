"""Batch figure renderer for formlink CSV outputs.

Strict separation of concerns: this package computes no physics. Every
plotted value comes verbatim from a CSV column, optionally rescaled by the
unit factors declared in the figure specification.
"""

from formlink_figures.spec import FigureSpec, SpecError
from formlink_figures.render import render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "SpecError", "render"]
