"""Batch checks of the (p,q)-calculus and Beta identities.

Each check compares two independently computed sides and records the
worst error.  Failures are reported, never raised.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from typing import Callable

from .calculus import pq_derivative, pq_integral
from .core import PqParams, pq_binomial, pq_number, pq_power_basis
from .functions import horner
from .special import BetaMode, beta_factored, pq_beta_closed, pq_beta_integral

__all__ = ["IdentityCheck", "run_identity_suite", "random_polynomial", "partition_sum"]

X_POINTS = tuple(i / 10 for i in range(1, 10))


@dataclass
class IdentityCheck:
    name: str
    max_error: float
    cases: int
    tol: float
    error_kind: str = "relative"
    # witness checks assert that an identity *fails*
    expected_fail: bool = False
    applicable: bool = True
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        if self.expected_fail:
            self.passed = self.max_error > self.tol
        else:
            self.passed = self.max_error <= self.tol


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def random_polynomial(rng: random.Random, max_degree: int) -> tuple[float, ...]:
    degree = rng.randint(0, max_degree)
    return tuple(rng.uniform(-1.0, 1.0) for _ in range(degree + 1))


def _poly(coefficients) -> Callable[[float], float]:
    return lambda t: horner(coefficients, t)


def partition_sum(n: int, x: float, params: PqParams) -> float:
    """Left side of the partition identity, ``sum_k [n k] p^(k(k-1)/2) x^k (1 (-) x)^(n-k)``, in plain floats."""
    p = params.p
    total = 0.0
    for k in range(n + 1):
        total += (
            pq_binomial(n, k, params)
            * p ** (k * (k - 1) // 2)
            * x**k
            * pq_power_basis(1.0, x, n - k, params).to_real()
        )
    return total


def check_beta_gamma(params: PqParams, max_index: int, tol: float) -> IdentityCheck:
    worst = 0.0
    for m in range(1, max_index + 1):
        for n in range(1, max_index + 1):
            worst = max(worst, _rel(pq_beta_integral(m, n, params), pq_beta_closed(m, n, params)))
    return IdentityCheck("beta_gamma", worst, max_index**2, tol)


def check_descent(params: PqParams, max_index: int, tol: float) -> IdentityCheck:
    p = params.p
    worst, cases = 0.0, 0
    for m in range(2, max_index + 1):
        for n in range(1, max_index + 1):
            rhs = (
                pq_number(m - 1, params)
                / (p ** (m - 1) * pq_number(n, params))
                * pq_beta_closed(m - 1, n + 1, params)
            )
            worst = max(worst, _rel(pq_beta_closed(m, n, params), rhs))
            cases += 1
    return IdentityCheck("beta_descent_recurrence", worst, cases, tol)


def check_splitting(params: PqParams, max_index: int, tol: float) -> IdentityCheck:
    p, q = params.p, params.q
    worst, cases = 0.0, 0
    for m in range(1, max_index + 1):
        for n in range(1, max_index + 1):
            rhs = p ** (n - 1) * pq_beta_closed(m, n, params) - q**n * pq_beta_closed(m + 1, n, params)
            worst = max(worst, _rel(pq_beta_closed(m, n + 1, params), rhs))
            cases += 1
    return IdentityCheck("beta_splitting_recurrence", worst, cases, tol)


def check_step(params: PqParams, max_index: int, tol: float) -> IdentityCheck:
    p, q = params.p, params.q
    worst, cases = 0.0, 0
    for m in range(1, max_index + 1):
        for n in range(1, max_index + 1):
            factor = p ** (n + m - 1) * (p**n - q**n) / (p ** (n + m) - q ** (n + m))
            rhs = factor * pq_beta_closed(m, n, params)
            worst = max(worst, _rel(pq_beta_closed(m, n + 1, params), rhs))
            cases += 1
    return IdentityCheck("beta_step_recurrence", worst, cases, tol)


def check_commutativity(params: PqParams, max_index: int, tol: float) -> IdentityCheck:
    worst, cases = 0.0, 0
    for m in range(1, max_index + 1):
        for n in range(1, max_index + 1):
            a = beta_factored(m, n, params, BetaMode.COMMUTATIVE).to_signed_log(params)
            b = beta_factored(n, m, params, BetaMode.COMMUTATIVE).to_signed_log(params)
            worst = max(worst, 0.0 if a == b else abs(a.log_magnitude - b.log_magnitude))
            cases += 1
    return IdentityCheck("tilde_beta_commutativity", worst, cases, tol, error_kind="log")


def check_noncommutativity(params: PqParams) -> IdentityCheck:
    """B(2,3) vs B(3,2) must differ.  At ``p = 1`` the two coincide, so there is no witness."""
    diff = _rel(pq_beta_closed(2, 3, params), pq_beta_closed(3, 2, params))
    check = IdentityCheck("beta_noncommutativity_witness", diff, 1, 1e-6, expected_fail=True)
    if params.p == 1.0:
        check.applicable = False
        check.passed = True
    return check


def check_partition(params: PqParams, max_index: int, tol: float) -> IdentityCheck:
    worst, cases = 0.0, 0
    for n in range(1, max_index + 1):
        target = params.p ** (n * (n - 1) // 2)
        for i in range(11):
            worst = max(worst, _rel(partition_sum(n, i / 10, params), target))
            cases += 1
    return IdentityCheck("partition_identity", worst, cases, tol)


def check_monomial_integral(params: PqParams, max_index: int, tol: float) -> IdentityCheck:
    worst = 0.0
    for m in range(1, max_index + 1):
        value = pq_integral(lambda t, m=m: t ** (m - 1), 1.0, params)
        worst = max(worst, _rel(value, 1.0 / pq_number(m, params)))
    return IdentityCheck("monomial_integral", worst, max_index, tol)


def check_product_rules(params: PqParams, tol: float, cases: int, seed: int) -> list[IdentityCheck]:
    rng = random.Random(seed)
    p, q = params.p, params.q
    worst1 = worst2 = 0.0
    for _ in range(cases):
        f = _poly(random_polynomial(rng, 5))
        g = _poly(random_polynomial(rng, 5))
        x = rng.choice(X_POINTS)
        lhs = pq_derivative(lambda t: f(t) * g(t), x, params)
        df, dg = pq_derivative(f, x, params), pq_derivative(g, x, params)
        worst1 = max(worst1, abs(lhs - (f(p * x) * dg + g(q * x) * df)))
        worst2 = max(worst2, abs(lhs - (g(p * x) * df + f(q * x) * dg)))
    return [
        IdentityCheck("product_rule_1", worst1, cases, tol, error_kind="absolute"),
        IdentityCheck("product_rule_2", worst2, cases, tol, error_kind="absolute"),
    ]


def check_power_basis_rules(
    params: PqParams, tol: float, cases: int, seed: int, max_power: int = 8
) -> list[IdentityCheck]:
    rng = random.Random(seed + 1)
    p, q = params.p, params.q
    worst1 = worst2 = 0.0

    def basis(x: float, a: float, n: int) -> float:
        return pq_power_basis(x, a, n, params).to_real()

    for _ in range(cases):
        n = rng.randint(1, max_power)
        a = rng.uniform(-1.0, 1.0)
        x = rng.choice(X_POINTS)
        bracket = pq_number(n, params)
        lhs1 = pq_derivative(lambda t: basis(t, a, n), x, params)
        worst1 = max(worst1, abs(lhs1 - bracket * basis(p * x, a, n - 1)))
        lhs2 = pq_derivative(lambda t: basis(a, t, n), x, params)
        worst2 = max(worst2, abs(lhs2 + bracket * basis(a, q * x, n - 1)))
    return [
        IdentityCheck("power_basis_derivative", worst1, cases, tol, error_kind="absolute"),
        IdentityCheck("reflected_power_basis_derivative", worst2, cases, tol, error_kind="absolute"),
    ]


def integration_by_parts_gap(f, g, b: float, params: PqParams) -> float:
    """Signed residual of the (p,q) integration-by-parts formula on ``[0, b]``."""
    p, q = params.p, params.q
    lhs = pq_integral(lambda t: f(p * t) * pq_derivative(g, t, params), b, params)
    rhs = f(b) * g(b) - f(0.0) * g(0.0) - pq_integral(
        lambda t: g(q * t) * pq_derivative(f, t, params), b, params
    )
    return lhs - rhs


def check_integration_by_parts(params: PqParams, tol: float, cases: int, seed: int) -> IdentityCheck:
    rng = random.Random(seed + 2)
    worst = 0.0
    for _ in range(cases):
        f = _poly(random_polynomial(rng, 4))
        g = _poly(random_polynomial(rng, 4))
        b = rng.choice((0.5, 1.0))
        worst = max(worst, abs(integration_by_parts_gap(f, g, b, params)))
    return IdentityCheck("integration_by_parts", worst, cases, tol, error_kind="absolute")


def run_identity_suite(
    params: PqParams, max_index: int = 8, tol: float = 1e-9, cases: int = 200, seed: int = 20160101
) -> dict:
    """Run every identity check and return a JSON-ready report."""
    if not 1 <= max_index <= 12:
        raise ValueError(f"max_index must lie in [1, 12], got {max_index!r}")
    checks = [
        check_beta_gamma(params, max_index, tol),
        check_descent(params, max_index, tol),
        check_splitting(params, max_index, tol),
        check_step(params, max_index, tol),
        check_commutativity(params, max_index, tol),
        check_noncommutativity(params),
        check_partition(params, max_index, tol),
        check_monomial_integral(params, max_index, tol),
        *check_product_rules(params, tol, cases, seed),
        *check_power_basis_rules(params, tol, cases, seed),
        check_integration_by_parts(params, tol, cases, seed),
    ]
    return {
        "params": {"p": params.p, "q": params.q},
        "max_index": max_index,
        "tol": tol,
        "seed": seed,
        "all_passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }

