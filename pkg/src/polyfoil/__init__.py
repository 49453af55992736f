"""Perimeter and area of star-shaped polygons in length coordinates.

Polygons are flat tuples ``(t_1, x_1, ..., x_{n-2}, t_{n-1})`` of rays from
the last vertex and outer sides.  The package computes perimeter and area
with exact gradients, tests and builds cyclic polygons, traces the families
of polygons sharing both perimeter and area, and maximizes area under
perimeter or side-length constraints.
"""

__version__ = "0.1.0"

from .calculus import (
    PsiValue,
    RankReport,
    area,
    classify_rank,
    finite_diff_gradient,
    grad_area,
    grad_perimeter,
    perimeter,
    psi,
)
from .errors import ConditioningError, ConvergenceError, DomainError, PolyfoilError, ValidationError
from .foliation import LeafTrace, TrianglePoint, isosceles_equal_pair, phi, phi_gradient, plaque_sample, trace_leaf
from .inscribable import (
    CyclicSolution,
    gamma,
    gamma_jacobian,
    is_inscribable,
    regular_polygon,
    solve_cyclic,
    theta,
)
from .optimize import (
    PerimeterSlice,
    SideFixedConfig,
    grad_area_L,
    lift,
    maximize_area_fixed_perimeter,
    maximize_area_fixed_sides,
)
from .polygon_space import (
    StarPolygon,
    TriangleTriple,
    VertexChain,
    apex_angle,
    from_vertices,
    heron_area,
    in_omega,
    in_v,
    to_vertices,
)
