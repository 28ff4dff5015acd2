from .options import SolverOptions
from .outcome import SolveOutcome, Status
from .simplex import solve_lp
from .branchbound import solve_milp
from .backends import (
    Backend,
    available_backends,
    get_backend,
    register_backend,
    solve,
)

__all__ = [
    "SolverOptions",
    "SolveOutcome",
    "Status",
    "solve_lp",
    "solve_milp",
    "Backend",
    "available_backends",
    "get_backend",
    "register_backend",
    "solve",
]
