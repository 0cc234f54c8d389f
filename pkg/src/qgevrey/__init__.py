"""Solvers and asymptotic diagnostics for a coupled q-difference / Borel-plane convolution system."""

__version__ = "0.1.0"
