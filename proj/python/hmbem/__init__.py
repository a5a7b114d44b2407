"""H-matrix accelerated Galerkin BEM for the Laplace single layer on the unit cube."""

from ._hmbem import (
    BreakdownError,
    CubeHMatrix,
    DimensionError,
    DomainError,
    QuadratureConfig,
    QuadratureError,
    ResourceError,
    aca,
    assemble_cube,
    block_tasks,
    cg_solve,
    cluster_tree,
    cube_mesh,
    eval_points,
    fitted_rate,
    galerkin_matrix,
    lpt_assign,
    morton_code,
    rhs,
    solve_cube,
)

__all__ = [
    "BreakdownError",
    "CubeHMatrix",
    "DimensionError",
    "DomainError",
    "QuadratureConfig",
    "QuadratureError",
    "ResourceError",
    "aca",
    "assemble_cube",
    "block_tasks",
    "cg_solve",
    "cluster_tree",
    "cube_mesh",
    "eval_points",
    "fitted_rate",
    "galerkin_matrix",
    "lpt_assign",
    "morton_code",
    "rhs",
    "solve_cube",
]
