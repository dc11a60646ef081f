"""(p,q)-Gamma and the two (p,q)-Beta functions at integer arguments."""

from __future__ import annotations

import enum

from .calculus import DEFAULT_POLICY, IntegrationPolicy, pq_integral
from .core import DomainError, PFactored, PqParams, factorial_factored

__all__ = [
    "BetaMode",
    "pq_gamma",
    "gamma_factored",
    "beta_factored",
    "pq_beta",
    "pq_beta_closed",
    "pq_beta_commutative",
    "pq_beta_integral",
    "beta_integrand",
    "log_beta",
]


class BetaMode(enum.Enum):
    STANDARD = "standard"
    COMMUTATIVE = "commutative"


def _check_positive(**args: int) -> None:
    for name, value in args.items():
        if value < 1 or int(value) != value:
            raise DomainError(f"{name} must be a positive integer, got {value!r}")


def _half(numerator: int) -> int:
    if numerator % 2:
        raise ArithmeticError(f"p-exponent numerator {numerator} is odd")
    return numerator // 2


def gamma_factored(n: int, params: PqParams) -> PFactored:
    _check_positive(n=n)
    return factorial_factored(n - 1, params)


def pq_gamma(n: int, params: PqParams) -> float:
    """``Gamma_{p,q}(n) = [n-1]_{p,q}!``, integer arguments only."""
    return gamma_factored(n, params).to_real(params)


def _gamma_ratio(m: int, n: int, params: PqParams) -> PFactored:
    return gamma_factored(m, params) * gamma_factored(n, params) / gamma_factored(m + n, params)


def beta_factored(
    m: int, n: int, params: PqParams, mode: BetaMode = BetaMode.STANDARD
) -> PFactored:
    _check_positive(m=m, n=n)
    if mode is BetaMode.COMMUTATIVE:
        # evaluate in a fixed argument order so B~(m,n) and B~(n,m) agree bit for bit
        m, n = sorted((m, n))
        exponent = _half(2 * m * n + m * m + n * n - 3 * m - 3 * n + 2)
    else:
        exponent = _half((n - 1) * (2 * m + n - 2))
    return _gamma_ratio(m, n, params).times_p(exponent)


def pq_beta_closed(m: int, n: int, params: PqParams) -> float:
    """``p**((n-1)(2m+n-2)/2) Gamma(m) Gamma(n) / Gamma(m+n)``."""
    return beta_factored(m, n, params).to_real(params)


def pq_beta_commutative(m: int, n: int, params: PqParams) -> float:
    """The rescaled Beta ``p**(m(m-1)/2) B(m,n)``, symmetric in ``(m, n)``."""
    return beta_factored(m, n, params, BetaMode.COMMUTATIVE).to_real(params)


def pq_beta(m: int, n: int, params: PqParams, mode: BetaMode = BetaMode.STANDARD) -> float:
    return beta_factored(m, n, params, mode).to_real(params)


def beta_integrand(m: int, n: int, params: PqParams, mode: BetaMode = BetaMode.STANDARD):
    """``x -> x**(m-1) (1 (-) qx)^(n-1)``, times ``p**(m(m-1)/2)`` in commutative mode."""
    _check_positive(m=m, n=n)
    p, q = params.p, params.q
    p_pows = [p**j for j in range(n - 1)]
    q_pows = [q ** (j + 1) for j in range(n - 1)]
    scale = p ** (m * (m - 1) // 2) if mode is BetaMode.COMMUTATIVE else 1.0

    def integrand(x: float) -> float:
        value = scale * x ** (m - 1)
        for pj, qj in zip(p_pows, q_pows):
            value *= pj - qj * x
        return value

    return integrand


def pq_beta_integral(
    m: int,
    n: int,
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
    mode: BetaMode = BetaMode.STANDARD,
) -> float:
    """The Beta integral summed as a (p,q)-series; independent of the Gamma form."""
    return pq_integral(beta_integrand(m, n, params, mode), 1.0, params, policy)


def log_beta(m: int, n: int, params: PqParams, mode: BetaMode = BetaMode.STANDARD) -> float:
    return beta_factored(m, n, params, mode).log_magnitude(params)

