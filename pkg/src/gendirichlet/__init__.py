"""Numerical toolkit for general Dirichlet series."""
__version__ = "0.1.0"
