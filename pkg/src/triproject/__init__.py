"""Optimal 2D triangle projection under prescribed area and orientation.

Closed-form projectors for free, one-fixed and two-fixed vertex patterns,
a position-based-dynamics mesh editor built on them, and a benchmark
comparing the closed-form projector against the linearised constraint step.
"""

from .pbd import Mesh, RelaxTrace, convergence_metric, make_mesh, relax_lin, relax_opt
from .poly import solve_cubic, solve_depressed_quartic
from .project_fixed import (
    FixedPattern,
    canonicalize,
    ottpao_one_fixed,
    project_two_fixed,
    solve_case1_one_fixed,
    solve_case2_one_fixed,
)
from .project_free import (
    CaseICandidate,
    CaseISolutionSet,
    CaseIISolution,
    ProjectionOutcome,
    generate_case2,
    optimal_rotation,
    otppa,
    ottpao,
    solve_case1,
    solve_case2,
)
from .trigeom import (
    ProjectionSpec,
    Triangle,
    area,
    as_triangle,
    centroid,
    displacement_cost,
    fixed_edge_length_sq,
    fixed_vertex_spread,
    signed_area,
    sum_squared_deviation,
)

__version__ = "0.1.0"

__all__ = [
    "CaseICandidate",
    "CaseISolutionSet",
    "CaseIISolution",
    "FixedPattern",
    "Mesh",
    "ProjectionOutcome",
    "ProjectionSpec",
    "RelaxTrace",
    "Triangle",
    "area",
    "as_triangle",
    "canonicalize",
    "centroid",
    "convergence_metric",
    "displacement_cost",
    "fixed_edge_length_sq",
    "fixed_vertex_spread",
    "generate_case2",
    "make_mesh",
    "optimal_rotation",
    "otppa",
    "ottpao",
    "ottpao_one_fixed",
    "project_two_fixed",
    "relax_lin",
    "relax_opt",
    "signed_area",
    "solve_case1",
    "solve_case1_one_fixed",
    "solve_case2",
    "solve_case2_one_fixed",
    "solve_cubic",
    "solve_depressed_quartic",
    "sum_squared_deviation",
]
