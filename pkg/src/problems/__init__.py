from .bundle import ProblemBundle, build_problem
from .scalar import scalar_exact, scalar_problem
from .diffusion import diffusion_long_time_limit, diffusion_problem
from .cahn_hilliard import (
    cahn_hilliard_problem, cahn_hilliard_steady, cahn_hilliard_unbounded_steady, steady_residual,
    write_steady_csv,
)
from .splitting import linear_splitting
