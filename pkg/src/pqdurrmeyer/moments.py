"""Closed-form moments, the second-moment bound, and empirical moduli.

Moment coefficients are written in terms of ``r = q/p`` and small integer
powers of ``p`` only.  With ``[k] = p**(k-1) (1 - r**k) / (1 - r)`` the
large-``n`` powers of ``p`` cancel symbolically, e.g.

    p [n] / [n+2]  =  (1 - r**n) / (p (1 - r**(n+2)))

so nothing that underflows for ``p < 1`` is ever divided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import DomainError, PqParams, log_pq_number
from .functions import FunctionSpec

__all__ = [
    "MomentTable",
    "BoundProfile",
    "durrmeyer_moments",
    "bernstein_moments",
    "limit_moments",
    "central_moments",
    "phi_squared",
    "delta_n_squared",
    "second_moment_bound",
    "combined_second_moment",
    "combined_bound",
    "bound_profile",
    "king_moments",
    "king_central_moments",
    "king_delta",
    "empirical_modulus",
    "empirical_second_modulus",
    "weighted_second_modulus",
    "step_weighted_modulus",
    "error_profile",
    "ErrorProfileRow",
]

MIN_GRID = 64


@dataclass(frozen=True)
class MomentTable:
    """Coefficients of an operator applied to ``e_0, e_1, e_2``.

    ``op(e_0) = m0``, ``op(e_1) = m1_coeff x`` and
    ``op(e_2) = m2_x_coeff x + m2_x2_coeff x**2``.
    """

    n: int
    params: PqParams
    m0: float
    m1_coeff: float
    m2_x_coeff: float
    m2_x2_coeff: float

    def __post_init__(self) -> None:
        values = (self.m0, self.m1_coeff, self.m2_x_coeff, self.m2_x2_coeff)
        if not all(math.isfinite(v) for v in values):
            raise ArithmeticError(f"non-finite moment coefficient in {values}")

    def e0(self, x: float) -> float:
        return self.m0

    def e1(self, x: float) -> float:
        return self.m1_coeff * x

    def e2(self, x: float) -> float:
        return self.m2_x_coeff * x + self.m2_x2_coeff * x * x

    def apply_quadratic(self, coefficients: Sequence[float]) -> tuple[float, float, float]:
        """Exact ``(c0, c1, c2)`` of the operator applied to ``c0 + c1 t + c2 t**2``."""
        c = list(coefficients) + [0.0] * (3 - len(coefficients))
        if len(c) > 3 and any(c[3:]):
            raise ValueError("only polynomials of degree <= 2 are supported")
        return (
            c[0] * self.m0,
            c[1] * self.m1_coeff + c[2] * self.m2_x_coeff,
            c[2] * self.m2_x2_coeff,
        )


def _check_n(n: int) -> None:
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")


def durrmeyer_moments(n: int, params: PqParams) -> MomentTable:
    """Moments of ``D_n^{p,q}``, evaluated through ratios of ``1 - r**j``."""
    _check_n(n)
    p, r = params.p, params.ratio
    om = params.one_minus_ratio_pow
    # p[n]/[n+2]
    m1 = om(n) / (p * om(n + 2))
    # (p+q) p^{n+1} [n] / ([n+2][n+3])
    m2_x = (1.0 + r) * om(1) * om(n) / (p * p * om(n + 2) * om(n + 3))
    # ([n] - p^{n-1}) p^2 q [n] / ([n+2][n+3]), using [n] - p^{n-1} = q [n-1]
    m2_x2 = r * r * om(n - 1) * om(n) / (p * p * om(n + 2) * om(n + 3))
    return MomentTable(n, params, 1.0, m1, m2_x, m2_x2)


def bernstein_moments(n: int, params: PqParams) -> MomentTable:
    """Moments of ``B_{n,p,q}``: ``e_2 -> x**2 + p**(n-1) x (1-x) / [n]``."""
    _check_n(n)
    spread = params.one_minus_ratio_pow(1) / params.one_minus_ratio_pow(n)  # p^{n-1}/[n]
    return MomentTable(n, params, 1.0, 1.0, spread, 1.0 - spread)


def limit_moments(params: PqParams) -> MomentTable:
    """The ``n -> infinity`` limit of :func:`durrmeyer_moments` (``r**n -> 0``).

    ``n`` is reported as 0 to mark the table as a limit.
    """
    p, r = params.p, params.ratio
    return MomentTable(0, params, 1.0, 1.0 / p, (1.0 - r * r) / (p * p), r * r / (p * p))


def central_moments(n: int, x: float, params: PqParams) -> tuple[float, float]:
    """``(D_n((t-x), x), D_n((t-x)**2, x))``."""
    t = durrmeyer_moments(n, params)
    first = (t.m1_coeff - 1.0) * x
    second = t.m2_x_coeff * x + (t.m2_x2_coeff - 2.0 * t.m1_coeff + 1.0) * x * x
    return first, second


def phi_squared(x: float) -> float:
    return x * (1.0 - x)


def _inv_number(n: int, params: PqParams) -> float:
    log_value = -log_pq_number(n, params)
    return math.exp(log_value) if log_value < 709.0 else math.inf


def delta_n_squared(n: int, x: float, params: PqParams) -> float:
    """``phi(x)**2 + 1/[n+2]``."""
    _check_n(n)
    return phi_squared(x) + _inv_number(n + 2, params)


def second_moment_bound(n: int, x: float, params: PqParams) -> float:
    """``6/[n+2] * (phi(x)**2 + 1/[n+2])``; ``inf`` once ``1/[n+2]`` overflows."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    inv = _inv_number(n + 2, params)
    return 6.0 * inv * (phi_squared(x) + inv)


def combined_second_moment(n: int, x: float, params: PqParams) -> float:
    """``D_n((t-x)**2, x) + (p[n]x/[n+2] - x)**2``, the left side of the combined bound."""
    first, second = central_moments(n, x, params)
    return second + first * first


def combined_bound(n: int, x: float, params: PqParams) -> float:
    """``10/[n+2] * delta_n(x)**2``."""
    return 10.0 * _inv_number(n + 2, params) * delta_n_squared(n, x, params)


@dataclass(frozen=True)
class BoundProfile:
    n: int
    params: PqParams
    grid: tuple[float, ...]
    second_central_moment: tuple[float, ...]
    bound: tuple[float, ...]
    delta_sq: tuple[float, ...]

    def violations(self) -> list[int]:
        """Grid indices where the central moment exceeds the bound."""
        return [
            i
            for i, (m, b) in enumerate(zip(self.second_central_moment, self.bound))
            if m > b
        ]


def bound_profile(n: int, params: PqParams, grid: Sequence[float]) -> BoundProfile:
    moments = [central_moments(n, x, params)[1] for x in grid]
    bounds = [second_moment_bound(n, x, params) for x in grid]
    deltas = [delta_n_squared(n, x, params) for x in grid]
    return BoundProfile(n, params, tuple(grid), tuple(moments), tuple(bounds), tuple(deltas))


def king_moments(n: int, params: PqParams) -> MomentTable:
    """Moments of ``D*_{n,p,q}``; ``e_0`` and ``e_1`` are reproduced."""
    _check_n(n)
    p, r = params.p, params.ratio
    om = params.one_minus_ratio_pow
    # (p+q) p^n / [n+3]
    m2_x = (1.0 + r) * om(1) / (p * om(n + 3))
    # ([n] - p^{n-1}) q [n+2] / ([n][n+3])
    m2_x2 = r * r * om(n - 1) * om(n + 2) / (om(n) * om(n + 3))
    return MomentTable(n, params, 1.0, 1.0, m2_x, m2_x2)


def king_central_moments(n: int, x: float, params: PqParams) -> tuple[float, float]:
    t = king_moments(n, params)
    first = (t.m1_coeff - 1.0) * x
    second = t.e2(x) - 2.0 * x * t.e1(x) + x * x * t.m0
    return first, second


def king_delta(n: int, x: float, params: PqParams) -> float:
    """``D*((t-x)**2, x)`` from its own closed form (not via the moment table)."""
    _check_n(n)
    p, r = params.p, params.ratio
    om = params.one_minus_ratio_pow
    linear = (1.0 + r) * om(1) / (p * om(n + 3))
    # {([n]-p^{n-1}) q [n+2] - [n][n+3]} / ([n][n+3])
    quadratic = (r * r * om(n - 1) * om(n + 2) - om(n) * om(n + 3)) / (om(n) * om(n + 3))
    return linear * x + quadratic * x * x


# --- empirical moduli ----------------------------------------------------------


def _lattice_values(f: Callable[[float], float], grid_size: int) -> tuple[np.ndarray, int]:
    if grid_size < MIN_GRID:
        raise DomainError(f"grid_size must be at least {MIN_GRID}, got {grid_size!r}")
    m = grid_size - 1
    xs = np.linspace(0.0, 1.0, grid_size)
    return np.array([f(float(x)) for x in xs]), m


def empirical_modulus(f: FunctionSpec, delta: float, grid_size: int = 513) -> float:
    """Grid estimate of ``sup_{0<h<=delta} sup_x |f(x+h) - f(x)|`` on [0, 1].

    ``x`` and ``x + h`` range over the lattice ``j/(grid_size-1)``, so the
    candidate set only grows with ``delta`` and the estimate is
    nondecreasing in ``delta``.  It undershoots the true value by at most
    ``Lip(f)/(grid_size-1)``.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    values, m = _lattice_values(f, grid_size)
    steps = min(m, math.floor(delta * m * (1 + 1e-12)))
    best = 0.0
    for i in range(1, steps + 1):
        best = max(best, float(np.max(np.abs(values[i:] - values[:-i]))))
    return best


def empirical_second_modulus(
    f: FunctionSpec, delta: float, grid_size: int = 513, form: str = "standard"
) -> float:
    """Grid estimate of the second-order modulus with step bound ``delta``.

    ``form="standard"`` uses ``|f(x+2h) - 2f(x+h) + f(x)|``; ``form="literal"``
    uses the first difference ``|f(x+h) - f(x)|``, the modulus written
    literally without its second difference.  Pass ``sqrt(d)`` to get ``omega_2(f, sqrt(d))``.
    """
    if form == "literal":
        return empirical_modulus(f, delta, grid_size)
    if form != "standard":
        raise ValueError(f"unknown form {form!r}")
    if not delta > 0:
        raise DomainError("delta must be positive")
    values, m = _lattice_values(f, grid_size)
    steps = min(m // 2, math.floor(delta * m * (1 + 1e-12)))
    best = 0.0
    for i in range(1, steps + 1):
        second = values[2 * i :] - 2.0 * values[i:-i] + values[: -2 * i]
        best = max(best, float(np.max(np.abs(second))))
    return best


def _step_grid(delta: float, grid_size: int) -> np.ndarray:
    return delta * np.arange(1, grid_size + 1) / grid_size


def weighted_second_modulus(f: FunctionSpec, delta: float, grid_size: int = 257) -> float:
    """Ditzian-Totik ``omega_2^phi``: second differences with step ``h phi(x)``.

    Points where ``x +/- h phi(x)`` leaves [0, 1] are skipped.
    """
    if grid_size < MIN_GRID:
        raise DomainError(f"grid_size must be at least {MIN_GRID}, got {grid_size!r}")
    xs = np.linspace(0.0, 1.0, grid_size)
    phi = np.sqrt(xs * (1.0 - xs))
    fx = np.array([f(float(x)) for x in xs])
    best = 0.0
    for h in _step_grid(delta, grid_size):
        lo, hi = xs - h * phi, xs + h * phi
        ok = (lo >= 0.0) & (hi <= 1.0)
        for i in np.nonzero(ok)[0]:
            value = abs(f(float(hi[i])) - 2.0 * fx[i] + f(float(lo[i])))
            best = max(best, value)
    return best


def step_weighted_modulus(f: FunctionSpec, delta: float, grid_size: int = 257) -> float:
    """First-order Ditzian-Totik modulus with step weight ``psi(x) = x``."""
    if grid_size < MIN_GRID:
        raise DomainError(f"grid_size must be at least {MIN_GRID}, got {grid_size!r}")
    xs = np.linspace(0.0, 1.0, grid_size)
    fx = np.array([f(float(x)) for x in xs])
    best = 0.0
    for h in _step_grid(delta, grid_size):
        lo, hi = xs - h * xs, xs + h * xs
        ok = (lo >= 0.0) & (hi <= 1.0)
        for i in np.nonzero(ok)[0]:
            best = max(best, abs(f(float(hi[i])) - fx[i]))
    return best


@dataclass(frozen=True)
class ErrorProfileRow:
    x: float
    abs_error: float
    local_second: float
    local_first: float
    central_second: float
    moment_bound: float


def error_profile(
    f: FunctionSpec,
    n: int,
    params: PqParams,
    grid: Sequence[float],
    operator_values: Sequence[float],
    grid_size: int = 129,
) -> list[ErrorProfileRow]:
    """Side-by-side ``|D_n f - f|`` and the computable parts of the local estimate.

    ``local_second`` is ``omega_2(f, [n+2]^{-1/2} delta_n(x))`` and
    ``local_first`` is ``omega(f, 2x/[n+2])``.  The estimate's constant is
    unknown, so no inequality is asserted; the rows are for inspection.
    """
    inv = _inv_number(n + 2, params)
    rows = []
    for x, value in zip(grid, operator_values):
        step2 = math.sqrt(inv * delta_n_squared(n, x, params)) if math.isfinite(inv) else 1.0
        step1 = 2.0 * x * inv if math.isfinite(inv) else 1.0
        local_second = empirical_second_modulus(f, max(step2, 1e-12), grid_size)
        local_first = empirical_modulus(f, step1, grid_size) if step1 > 0 else 0.0
        rows.append(
            ErrorProfileRow(
                x=x,
                abs_error=abs(value - f(x)),
                local_second=local_second,
                local_first=local_first,
                central_second=central_moments(n, x, params)[1],
                moment_bound=second_moment_bound(n, x, params),
            )
        )
    return rows
