"""Render convergence-study CSV files into the standard figures."""

from .reader import SchemaError, read_records
from .render import PlotSpec, group_stats, render

__version__ = "0.1.0"
