"""Numerical verification of the orthospectrum dilogarithm identity for surfaces with geodesic boundary."""

from . import dilog, hypgeom, kernels, orthospec, quadvol
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["dilog", "hypgeom", "kernels", "orthospec", "quadvol", "BACKEND", "__version__"]
