"""Curved n-body dynamics on constant-curvature surfaces.

Cotangent-potential equations of motion on the sphere (kappa > 0) and
the hyperbolic upper sheet (kappa < 0), a constraint-projecting RK4
integrator with conserved-quantity diagnostics, the kernel-matrix
criteria for polygonal homographic orbits, and the equatorial
fixed-point and relative-equilibrium constructions.
"""

from .dynamics import (
    Body,
    ConservedQuantities,
    ReducedState,
    SystemState,
    Trajectory,
    acceleration,
    angular_momentum,
    force_function,
    force_gradient,
    hamiltonian,
    integrate,
    make_state,
    reduced_rhs,
    step,
)
from .equilibria import (
    CoefficientSet,
    EquatorTriangle,
    FixedPointSolution,
    IsoscelesResult,
    det_A,
    equator_coefficients,
    isosceles_accelerations,
    isosceles_classify,
    make_relative_equilibrium,
    solve_fixed_point_masses,
)
from .errors import (
    AntipodalSingularity,
    CLIInputError,
    CollisionSingularity,
    CriterionViolation,
    CurvedNBodyError,
    EquatorSingularity,
    InfeasibleTriangle,
    InvalidCurvature,
    InvalidPolygon,
    NumericalBlowup,
    ResidualTooLarge,
    SingularityError,
    SingularMatrix,
)
from .geometry import (
    Curvature,
    SurfacePoint,
    cross,
    inner,
    on_surface,
    pair_cosine,
    renormalize,
    signum,
    tangent_project,
)
from .homographic import (
    CriterionReport,
    KernelPair,
    MassSolution,
    PolygonConfig,
    SignReport,
    build_matrices,
    check_criterion,
    delta_gamma,
    embed,
    kernels,
    polygon_state,
    ring_positions,
    ring_state,
    solve_masses,
    triangle_sign_test,
)

__version__ = "0.1.0"

__all__ = [
    "AntipodalSingularity",
    "Body",
    "CLIInputError",
    "CoefficientSet",
    "CollisionSingularity",
    "ConservedQuantities",
    "CriterionReport",
    "CriterionViolation",
    "Curvature",
    "CurvedNBodyError",
    "EquatorSingularity",
    "EquatorTriangle",
    "FixedPointSolution",
    "InfeasibleTriangle",
    "InvalidCurvature",
    "InvalidPolygon",
    "IsoscelesResult",
    "KernelPair",
    "MassSolution",
    "NumericalBlowup",
    "PolygonConfig",
    "ReducedState",
    "ResidualTooLarge",
    "SignReport",
    "SingularMatrix",
    "SingularityError",
    "SurfacePoint",
    "SystemState",
    "Trajectory",
    "acceleration",
    "angular_momentum",
    "build_matrices",
    "check_criterion",
    "cross",
    "delta_gamma",
    "det_A",
    "embed",
    "equator_coefficients",
    "force_function",
    "force_gradient",
    "hamiltonian",
    "inner",
    "integrate",
    "isosceles_accelerations",
    "isosceles_classify",
    "kernels",
    "make_relative_equilibrium",
    "make_state",
    "on_surface",
    "pair_cosine",
    "polygon_state",
    "reduced_rhs",
    "renormalize",
    "ring_positions",
    "ring_state",
    "signum",
    "solve_fixed_point_masses",
    "solve_masses",
    "step",
    "tangent_project",
    "triangle_sign_test",
]
