"""The (p,q)-derivative and the series form of the (p,q)-integral."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import DomainError, PqParams

__all__ = [
    "ConvergenceError",
    "IntegrationPolicy",
    "pq_derivative",
    "pq_integral",
    "pq_integral_between",
]

RealFunction = Callable[[float], float]


class ConvergenceError(ArithmeticError):
    """The integral series did not settle within ``max_terms`` terms."""

    def __init__(self, message: str, partial_sum: float, terms: int):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms = terms


@dataclass(frozen=True)
class IntegrationPolicy:
    rel_tol: float = 1e-12
    max_terms: int = 20000

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol <= 1e-3:
            raise DomainError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol!r}")
        if self.max_terms < 16:
            raise DomainError(f"max_terms must be at least 16, got {self.max_terms!r}")


DEFAULT_POLICY = IntegrationPolicy()

# consecutive small terms required before the series is declared converged
_SETTLE_RUN = 3


def pq_derivative(f: RealFunction, x: float, params: PqParams) -> float:
    """``(f(px) - f(qx)) / ((p - q) x)``; undefined at ``x = 0``."""
    if x == 0:
        raise DomainError("the (p,q)-derivative is not defined at x = 0")
    p, q = params.p, params.q
    return (f(p * x) - f(q * x)) / ((p - q) * x)


def _check_domain(f: RealFunction, upper: float) -> None:
    domain = getattr(f, "domain", None)
    if domain is None:
        return
    lo, hi = domain
    if lo > 0.0 or hi < upper:
        from .functions import EvaluationError

        raise EvaluationError(
            f"integration nodes span [0, {upper!r}] but the function is only "
            f"defined on [{lo!r}, {hi!r}]"
        )


def pq_integral(
    f: RealFunction,
    a: float,
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
) -> float:
    """``(p-q) a sum_k q**k/p**(k+1) f(q**k a / p**(k+1))``.

    The first node is ``a/p``, which exceeds ``a`` whenever ``p < 1``;
    functions carrying a ``domain`` attribute are checked against
    ``[0, a/p]`` up front.  Summation stops once three consecutive terms
    are within ``rel_tol`` of the running sum.

    Raises:
        DomainError: if ``a <= 0``.
        ConvergenceError: if ``max_terms`` is reached first.
    """
    if not a > 0:
        raise DomainError(f"upper limit must be positive, got {a!r}")
    p = params.p
    r = params.ratio
    _check_domain(f, a / p)

    # a q^k / p^(k+1) is both the node and its weight, so each term is node * f(node)
    node = a / p
    total = 0.0
    small_run = 0
    for k in range(policy.max_terms):
        term = node * f(node)
        total += term
        if abs(term) <= policy.rel_tol * abs(total):
            small_run += 1
            if small_run >= _SETTLE_RUN:
                return _finish(total, params)
        else:
            small_run = 0
        node *= r
    raise ConvergenceError(
        f"(p,q)-integral did not converge in {policy.max_terms} terms",
        partial_sum=_finish(total, params),
        terms=policy.max_terms,
    )


def _finish(total: float, params: PqParams) -> float:
    return (params.p - params.q) * total


def pq_integral_between(
    f: RealFunction,
    a: float,
    b: float,
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
) -> float:
    """``int_a^b`` taken as ``int_0^b - int_0^a`` (``a`` may be 0)."""
    upper = pq_integral(f, b, params, policy) if b != 0 else 0.0
    lower = pq_integral(f, a, params, policy) if a != 0 else 0.0
    return upper - lower
