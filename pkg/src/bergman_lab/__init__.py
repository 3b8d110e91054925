"""Numerical toolkit for Bergman spaces on the unit disk.

Norms, kernels, lattices, Carleson-measure statistics, Volterra-type and
weighted composition-differentiation operators, and a Neumann-series solver
for linear differential equations with analytic coefficients.
"""

__version__ = "0.1.0"
