from ._core import (
    Problem,
    ProblemConfig,
    SolveReport,
    TriangleMesh,
    build_problem,
    generate_cube,
    generate_plate,
    generate_sphere,
    load_mesh,
    save_mesh,
)

__all__ = [
    "Problem",
    "ProblemConfig",
    "SolveReport",
    "TriangleMesh",
    "build_problem",
    "generate_cube",
    "generate_plate",
    "generate_sphere",
    "load_mesh",
    "save_mesh",
]
