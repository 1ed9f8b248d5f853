"""Verification toolkit for the lattice Schwarzian KdV equation."""

from .consistency import CubeData, CubeReport, cac_check
from .errors import (
    CoreEmpty,
    ConstraintViolated,
    DegenerateParameters,
    InconsistentFit,
    LSKdVError,
    MixedKindError,
    NotProportional,
    PoleError,
    SingularCorner,
    UnknownName,
    ZeroDenominator,
    ZeroResidual,
)
from .flows import (
    commuting_flow_residual,
    integrate_flow,
    invariance_drift,
    limit_order,
    semi_discrete_integrate,
)
from .hierarchy import (
    CATALOG_NAMES,
    catalog_get,
    combine_with_swap,
    master_bracket_constant,
    miura_a,
    miura_intertwine_residual,
    swap_nm,
    volterra_rhs,
)
from .lattice import (
    U,
    X,
    LatticeWindow,
    QuadParams,
    eval_quad,
    evolve_quadrant,
    gauge_from_u,
    gauge_to_u,
    solve_corner,
)
from .lax import compat_residual, lax_L, lax_M, potentials, scalar_recursion_residual
from .numerics import Dual
from .symmetry import (
    bracket,
    mobius_apply,
    on_shell_residual,
    point_symmetry_basis,
    prolong_residual,
    structure_constants,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES",
    "ConstraintViolated",
    "CoreEmpty",
    "CubeData",
    "CubeReport",
    "DegenerateParameters",
    "Dual",
    "InconsistentFit",
    "LSKdVError",
    "LatticeWindow",
    "MixedKindError",
    "NotProportional",
    "PoleError",
    "QuadParams",
    "SingularCorner",
    "U",
    "UnknownName",
    "X",
    "ZeroDenominator",
    "ZeroResidual",
    "bracket",
    "cac_check",
    "catalog_get",
    "combine_with_swap",
    "commuting_flow_residual",
    "compat_residual",
    "eval_quad",
    "evolve_quadrant",
    "gauge_from_u",
    "gauge_to_u",
    "integrate_flow",
    "invariance_drift",
    "lax_L",
    "lax_M",
    "limit_order",
    "master_bracket_constant",
    "miura_a",
    "miura_intertwine_residual",
    "mobius_apply",
    "on_shell_residual",
    "point_symmetry_basis",
    "potentials",
    "prolong_residual",
    "scalar_recursion_residual",
    "semi_discrete_integrate",
    "solve_corner",
    "structure_constants",
    "swap_nm",
    "volterra_rhs",
]
