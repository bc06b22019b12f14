"""Figures and tables for sdea benchmark CSVs."""

from .plots import plot_fig1, plot_fig2
from .tables import table1

__version__ = "0.1.0"
