"""Post-quantum (p,q)-calculus, (p,q)-Gamma/Beta functions and (p,q)-Bernstein-Durrmeyer operators."""

from .calculus import (
    ConvergenceError,
    IntegrationPolicy,
    pq_derivative,
    pq_integral,
    pq_integral_between,
)
from .core import (
    DomainError,
    PFactored,
    PqParams,
    SignedLogValue,
    log_pq_binomial,
    log_pq_factorial,
    log_pq_number,
    pq_binomial,
    pq_factorial,
    pq_number,
    pq_power_basis,
)
from .experiments import (
    ConfigError,
    ConvergenceReport,
    ExperimentConfig,
    ExperimentError,
    Grid,
    run_convergence,
    run_limit_comparison,
)
from .functions import (
    EvaluationError,
    FunctionSpec,
    ParseError,
    RegistryError,
    monomial,
    parse_function,
)
from .identities import run_identity_suite
from .moments import (
    MomentTable,
    central_moments,
    delta_n_squared,
    durrmeyer_moments,
    empirical_modulus,
    empirical_second_modulus,
    king_delta,
    king_moments,
    limit_moments,
    phi_squared,
    second_moment_bound,
    step_weighted_modulus,
    weighted_second_modulus,
)
from .operators import (
    OperatorKind,
    bernstein_apply,
    bernstein_basis,
    durrmeyer_apply,
    king_apply,
)
from .special import BetaMode, pq_beta, pq_beta_commutative, pq_beta_integral, pq_gamma

__version__ = "0.1.0"
