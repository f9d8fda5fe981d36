"""Generative design of gear trains evolved with novelty search."""
from gearevo.kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
