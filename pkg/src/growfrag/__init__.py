"""Principal eigenpairs of growth-fragmentation equations and their parameter dependence."""
__version__ = "0.1.0"

from .coefficients import (KernelModel, PowerLaw, ProblemSpec, RationalPower, Tabulated,
                           eval_kernel_density, eval_rate, validate_assumptions)
from .eigensolver import (EigenSolution, IterationConfig, dense_oracle_eigenpair, normalize,
                          residual_norm, solve_principal, step_semi_implicit)
from .grid import Grid, adapt_truncation, build_discrete_problem, build_grid
from .kernels import BACKEND
from .rescale import (DilationPlan, build_rescaled_problem, dilation_exponent,
                      limit_profile_problem, make_plan, recover_eigenvalue, solve_rescaled)
