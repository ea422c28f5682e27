"""Numerical laboratory for Lagrangian vs Eulerian analyticity-radius behavior
of the incompressible Euler equations: a pseudo-spectral 2D solver, Gevrey-norm
and radius estimators, closed-form benchmark flows, an anisotropic-analyticity
counterexample profile, and the majorant recursion for certified persistence
times.
"""

__version__ = "0.1.0"
