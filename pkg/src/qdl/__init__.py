"""Numerics for analytic and harmonic maps in the family F(alpha).

Members are parameterized by ``f'(z) = prod (1 - zeta_k z)^(-alpha t_k)``.
The package builds members from finite Blaschke products, certifies
membership and subordination on grids, estimates (pre-)Schwarzian and Bloch
norms, and traces image boundaries for bounded-turning diagnostics.
"""

from .blaschke import BlaschkeProduct, BoundaryRootSet, boundary_decomposition, boundary_roots, weights
from .derivatives import NormEstimate, pre_schwarzian_norm, schwarzian_norm
from .family import Atom, DiscreteMeasure, FAlphaFunction, GridSpec, IdentityMap, from_blaschke, from_measure
from .geometry import BoundaryCurve, bounded_turning_constant, quasidisk_diagnostic, trace_boundary
from .harmonic import Dilatation, HarmonicMap

__version__ = "0.1.0"
