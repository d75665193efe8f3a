"""Stress-energy tensor of a finite-size Unruh-DeWitt detector.

The detector is a bound mode of a real scalar field trapped by a complex
field whose profile is held in place by a perfect fluid. The subpackages
build each sector, assemble the conserved total tensor, and evaluate the
detector's excitation probability.
"""
from udw.profiles import ModelParams, Ground, Excited, Mixture

__version__ = "0.1.0"

__all__ = ["ModelParams", "Ground", "Excited", "Mixture", "__version__"]
