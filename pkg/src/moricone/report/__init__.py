"""Report rendering (text, JSON, SVG, ASCII) and the command-line interface."""

from .render import RenderSpec, render, report_from_dict, report_to_dict

__all__ = ["RenderSpec", "render", "report_from_dict", "report_to_dict"]
