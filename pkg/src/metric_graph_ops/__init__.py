"""Metric Graph Ops - discrete, continuous and averaging operators on finite networks."""

__version__ = "0.1.0"
