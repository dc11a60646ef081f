"""(p,q)-Bernstein, (p,q)-Bernstein-Durrmeyer and King-modified operators.

The Durrmeyer weights ``[n+1] p**(-(n-k+1)(n+k)/2) b_{n,k}(1,x)`` multiply
a huge power of ``p`` into a tiny basis value.  Every weight is therefore
assembled as a :class:`~pqdurrmeyer.core.PFactored`, where the powers of
``p`` add as integers, and only the final product is exponentiated.

A Durrmeyer evaluation splits into an ``x``-independent part (one inner
integral per ``k``, cached in a :class:`DurrmeyerPlan`) and the basis sum
at ``x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .calculus import DEFAULT_POLICY, IntegrationPolicy, pq_integral
from .core import (
    DomainError,
    PFactored,
    PqParams,
    SignedLogValue,
    binomial_factored,
    normalized_sums,
    number_factored,
    power_basis_factored,
)
from .functions import EvaluationError, FunctionSpec
from .special import beta_factored

__all__ = [
    "OperatorKind",
    "bernstein_basis",
    "bernstein_basis_all",
    "bernstein_nodes",
    "durrmeyer_kernel",
    "bernstein_apply",
    "durrmeyer_apply",
    "durrmeyer_values",
    "king_argument",
    "king_interval_end",
    "king_positivity_end",
    "king_apply",
    "king_values",
    "operator_values",
    "DurrmeyerPlan",
    "durrmeyer_plan",
]


class OperatorKind(enum.Enum):
    BERNSTEIN = "bernstein"
    DURRMEYER = "durrmeyer"
    KING_DURRMEYER = "king_durrmeyer"


def _check_index(n: int, k: int) -> None:
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if not 0 <= k <= n:
        raise DomainError(f"basis index k={k!r} outside [0, {n}]")


def _basis_factored(n: int, k: int, x: float, params: PqParams) -> PFactored:
    prefactor = binomial_factored(n, k, params).times_p(((k * (k - 1)) - n * (n - 1)) // 2)
    x_pow = PFactored(1, 0, 0.0) if k == 0 else _power(x, k)
    return prefactor * x_pow * power_basis_factored(1.0, x, n - k, params)


def _power(x: float, k: int) -> PFactored:
    if x == 0.0:
        return PFactored.zero()
    sign = -1 if (x < 0 and k % 2) else 1
    return PFactored(sign, 0, k * math.log(abs(x)))


def bernstein_basis(n: int, k: int, x: float, params: PqParams) -> SignedLogValue:
    """``[n k] p**((k(k-1) - n(n-1))/2) x**k (1 (-) x)^(n-k)``, sign-tracked."""
    _check_index(n, k)
    return _basis_factored(n, k, x, params).to_signed_log(params)


def bernstein_basis_all(n: int, x: float, params: PqParams) -> list[PFactored]:
    """All ``b_{n,k}(1,x)`` for ``k = 0..n`` in O(n) operations.

    The power basis ``(1 (-) x)^m`` is built as a running product, so the
    whole row costs one pass instead of one product per ``k``.
    """
    _check_index(n, 0)
    r = params.ratio
    # tails[m] = (sign, log|prod_{j<m} (1 - r^j x)|), None once a factor vanishes
    tails: list = [(1, 0.0)]
    sign, log_acc = 1, 0.0
    r_pow = 1.0
    for _ in range(n):
        factor = 1.0 - r_pow * x
        if factor == 0.0 or tails[-1] is None:
            tails.append(None)
        else:
            if factor < 0.0:
                sign = -sign
            log_acc += math.log(abs(factor))
            tails.append((sign, log_acc))
        r_pow *= r

    row = []
    for k in range(n + 1):
        tail = tails[n - k]
        if tail is None:
            row.append(PFactored.zero())
            continue
        m = n - k
        power = PFactored(tail[0], m * (m - 1) // 2, tail[1])
        prefactor = binomial_factored(n, k, params).times_p(((k * (k - 1)) - n * (n - 1)) // 2)
        x_pow = PFactored(1, 0, 0.0) if k == 0 else _power(x, k)
        row.append(prefactor * x_pow * power)
    return row


def bernstein_nodes(n: int, params: PqParams) -> list[float]:
    """Sample points ``p**(n-k) [k] / [n]``, which reduce to ``S_k / S_n``."""
    if n < 1:
        raise DomainError("n must be positive")
    sums = normalized_sums(n, params)
    s_n = sums[n]
    return [sums[k] / s_n for k in range(n + 1)]


def durrmeyer_kernel(n: int, k: int, t: float, params: PqParams) -> float:
    """``[n k] t**k (1 (-) qt)^(n-k)``; no p-power prefactor."""
    _check_index(n, k)
    if t < 0:
        raise DomainError(f"kernel argument must be nonnegative, got {t!r}")
    t_pow = PFactored(1, 0, 0.0) if k == 0 else _power(t, k)
    value = binomial_factored(n, k, params) * t_pow
    return (value * power_basis_factored(1.0, params.q * t, n - k, params)).to_real(params)


def bernstein_apply(f: FunctionSpec, n: int, x: float, params: PqParams) -> float:
    """``sum_k b_{n,k}(1,x) f(p**(n-k) [k] / [n])``."""
    nodes = bernstein_nodes(n, params)
    values = [f(node) for node in nodes]
    total = 0.0
    for weight, value in zip(bernstein_basis_all(n, x, params), values):
        total += weight.to_real(params) * value
    return total


@dataclass(frozen=True)
class DurrmeyerPlan:
    """The ``x``-independent half of a Durrmeyer evaluation.

    ``terms[k-1]`` lists ``(coefficient, factor)`` pairs whose sum, each
    multiplied by ``b_{n,k}(1,x)``, is the ``k``-th summand; the factor
    already carries ``[n+1] p**(-(n-k+1)(n+k)/2)`` and the inner integral.
    """

    n: int
    params: PqParams
    f_at_zero: float
    terms: tuple[tuple[tuple[float, PFactored], ...], ...]
    backend: str

    def evaluate(self, x: float) -> float:
        basis = bernstein_basis_all(self.n, x, self.params)
        total = 0.0
        for k in range(1, self.n + 1):
            b = basis[k]
            if b.sign == 0:
                continue
            for coefficient, factor in self.terms[k - 1]:
                total += coefficient * (b * factor).to_real(self.params)
        return total + basis[0].to_real(self.params) * self.f_at_zero


def _outer_factor(n: int, k: int, params: PqParams) -> PFactored:
    # [n+1] p^{-(n-k+1)(n+k)/2}; one of n-k+1 and n+k is even
    return number_factored(n + 1, params).times_p(-((n - k + 1) * (n + k)) // 2)


def _beta_terms(coefficients: Sequence[float], n: int, params: PqParams):
    terms = []
    for k in range(1, n + 1):
        outer = _outer_factor(n, k, params) * binomial_factored(n, k - 1, params)
        row = []
        for j, c in enumerate(coefficients):
            if c == 0.0:
                continue
            # int_0^1 t^(k-1+j) (1 (-) qt)^(n-k+1) d_{p,q}t = B(k+j, n-k+2)
            row.append((c, outer * beta_factored(k + j, n - k + 2, params)))
        terms.append(tuple(row))
    return tuple(terms)


def _kernel_integrand(n: int, k: int, f: FunctionSpec, params: PqParams):
    """Integrand ``b_{n,k}(t) f(t)`` divided by its constant power of ``p``.

    Returns ``(p_exponent, integrand)`` with
    ``b_{n,k}(t) = p**p_exponent * C t**k prod_j (1 - r**j q t)``.
    """
    binom = binomial_factored(n, k, params)
    m = n - k
    p_exponent = binom.p_exp + m * (m - 1) // 2
    scale = math.exp(binom.log_rest)
    r, q = params.ratio, params.q
    shifts = [q * r**j for j in range(m)]

    def integrand(t: float) -> float:
        value = scale * t**k
        for s in shifts:
            value *= 1.0 - s * t
        if value == 0.0:
            return 0.0
        return value * f(t)

    return p_exponent, integrand


def _series_terms(f: FunctionSpec, n: int, params: PqParams, policy: IntegrationPolicy):
    upper = 1.0 / params.p
    if not f.covers(0.0, upper):
        raise EvaluationError(
            f"Durrmeyer integrals sample f on [0, {upper!r}] but f is defined on "
            f"[{f.domain[0]!r}, {f.domain[1]!r}]"
        )
    terms = []
    for k in range(1, n + 1):
        p_exponent, integrand = _kernel_integrand(n, k - 1, f, params)
        integral = pq_integral(integrand, 1.0, params, policy)
        factor = _outer_factor(n, k, params) * PFactored.from_real(integral, p_exponent)
        terms.append(((1.0, factor),))
    return tuple(terms)


@lru_cache(maxsize=128)
def durrmeyer_plan(
    f: FunctionSpec,
    n: int,
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
    backend: str = "auto",
) -> DurrmeyerPlan:
    """Precompute the inner integrals of ``D_n^{p,q} f``.

    ``backend`` is ``"beta"`` (closed form, polynomials only), ``"series"``
    (numeric (p,q)-integral) or ``"auto"`` (beta whenever possible).
    """
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    coefficients = f.polynomial_coefficients
    if backend == "auto":
        backend = "beta" if coefficients is not None else "series"
    if backend == "beta":
        if coefficients is None:
            raise ValueError("the beta backend needs a polynomial function")
        terms = _beta_terms(coefficients, n, params)
    elif backend == "series":
        terms = _series_terms(f, n, params, policy)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return DurrmeyerPlan(n=n, params=params, f_at_zero=f(0.0), terms=terms, backend=backend)


def durrmeyer_apply(
    f: FunctionSpec,
    n: int,
    x: float,
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
    backend: str = "auto",
) -> float:
    """``D_n^{p,q}(f, x)``.

    Positivity is guaranteed for ``x`` in [0, 1]; other points are
    evaluated with sign tracking.  ``f`` must be defined on ``[0, 1/p]``
    when the series backend is used.
    """
    return durrmeyer_plan(f, n, params, policy, backend).evaluate(x)


def durrmeyer_values(
    f: FunctionSpec,
    n: int,
    xs: Iterable[float],
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
    backend: str = "auto",
) -> list[float]:
    plan = durrmeyer_plan(f, n, params, policy, backend)
    return [plan.evaluate(x) for x in xs]


def _king_ratio(n: int, params: PqParams) -> float:
    # [n+2] / (p [n]) = p S_{n+2} / S_n
    ratio = number_factored(n + 2, params) / number_factored(n, params)
    return ratio.times_p(-1).to_real(params)


def king_argument(n: int, x: float, params: PqParams) -> float:
    """``r_n(x) = [n+2] x / (p [n])``."""
    if n < 1:
        raise DomainError("n must be positive")
    return _king_ratio(n, params) * x


def king_interval_end(n: int, params: PqParams) -> float:
    """Right end ``[n+2] / (p [n])`` of the evaluation interval stated for ``D*``."""
    return _king_ratio(n, params)


def king_positivity_end(n: int, params: PqParams) -> float:
    """Largest ``x`` with ``r_n(x) <= 1``, i.e. ``p [n] / [n+2]``; weights are nonnegative up to here."""
    return 1.0 / _king_ratio(n, params)


_INTERVAL_SLACK = 1e-12


def _king_check(n: int, x: float, params: PqParams, interval: str) -> None:
    if interval == "nominal":
        end = king_interval_end(n, params)
    elif interval == "positivity":
        end = king_positivity_end(n, params)
    elif interval == "any":
        end = math.inf
    else:
        raise ValueError(f"unknown interval {interval!r}")
    if x < 0 or x > end * (1 + _INTERVAL_SLACK):
        raise DomainError(f"x={x!r} outside the King interval [0, {end!r}] ({interval})")


def king_apply(
    f: FunctionSpec,
    n: int,
    x: float,
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
    interval: str = "nominal",
    backend: str = "auto",
) -> float:
    """``D*_{n,p,q}(f, x)``: the Durrmeyer sum with basis argument ``r_n(x)``.

    ``interval`` selects the accepted range of ``x``: ``"nominal"`` is
    ``[0, [n+2]/(p[n])]``, ``"positivity"`` is ``[0, p[n]/[n+2]]`` (where
    ``r_n(x) <= 1``), ``"any"`` only requires ``x >= 0``.
    """
    _king_check(n, x, params, interval)
    return durrmeyer_plan(f, n, params, policy, backend).evaluate(king_argument(n, x, params))


def king_values(
    f: FunctionSpec,
    n: int,
    xs: Iterable[float],
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
    interval: str = "nominal",
    backend: str = "auto",
) -> list[float]:
    plan = durrmeyer_plan(f, n, params, policy, backend)
    ratio = _king_ratio(n, params)
    out = []
    for x in xs:
        _king_check(n, x, params, interval)
        out.append(plan.evaluate(ratio * x))
    return out


def operator_values(
    kind: OperatorKind,
    f: FunctionSpec,
    n: int,
    xs: Sequence[float],
    params: PqParams,
    policy: IntegrationPolicy = DEFAULT_POLICY,
) -> list[float]:
    if kind is OperatorKind.BERNSTEIN:
        return [bernstein_apply(f, n, x, params) for x in xs]
    if kind is OperatorKind.DURRMEYER:
        return durrmeyer_values(f, n, xs, params, policy)
    return king_values(f, n, xs, params, policy, interval="any")
