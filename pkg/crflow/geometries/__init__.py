"""
crflow - Geometry Classes
Radial asymptotically flat and homogeneous 3-dimensional reductions

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from .radial import (
    InnerClosure,
    OuterClosure,
    RadialGrid,
    RadialMetric,
    build_radial_grid,
    ricci_radial,
)
from .radial_pressure import solve_pressure_radial, invertibility_estimate_radial
from .homogeneous import (
    HomogeneousMetric,
    milnor_structure_constants,
    curvature_homogeneous,
    pressure_homogeneous,
    laplacian_spectrum,
)
from .operators import operator_G_and_divergence, deturck_gauge_term, invertibility_estimate
from .radial_geometry import RadialGeometry
from .homogeneous_geometry import HomogeneousGeometry

__all__ = [
    'InnerClosure', 'OuterClosure', 'RadialGrid', 'RadialMetric', 'build_radial_grid', 'ricci_radial',
    'solve_pressure_radial', 'invertibility_estimate_radial',
    'HomogeneousMetric', 'milnor_structure_constants', 'curvature_homogeneous', 'pressure_homogeneous',
    'laplacian_spectrum',
    'operator_G_and_divergence', 'deturck_gauge_term', 'invertibility_estimate',
    'RadialGeometry', 'HomogeneousGeometry',
]
