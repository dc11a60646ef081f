"""(p,q)-numbers, factorials, binomials and the (p,q)-power basis.

Every quantity here is exposed twice: a plain ``float`` accessor for
convenience and a factored form that keeps powers of ``p`` as exact
integers.  The factored form is what the operator code uses, because
factors like ``p**(-(n-k+1)*(n+k)/2)`` leave double range long before
the products they appear in do.

Writing ``r = q/p``, the (p,q)-number factors as ``[n] = p**(n-1) * S_n``
with ``S_n = 1 + r + ... + r**(n-1)``, and ``S_n`` is what gets summed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "DomainError",
    "PqParams",
    "SignedLogValue",
    "PFactored",
    "pq_number",
    "pq_factorial",
    "pq_binomial",
    "pq_power_basis",
    "log_pq_number",
    "log_pq_factorial",
    "log_pq_binomial",
    "normalized_sums",
]

MIN_GAP = 1e-6
_LN2 = math.log(2.0)


class DomainError(ValueError):
    """An argument lies outside the set on which a quantity is defined."""


@dataclass(frozen=True)
class PqParams:
    """The deformation pair with ``0 < q < p <= 1``."""

    p: float
    q: float

    def __post_init__(self) -> None:
        p, q = float(self.p), float(self.q)
        if not (0.0 < q < p <= 1.0):
            raise DomainError(f"need 0 < q < p <= 1, got p={p!r}, q={q!r}")
        if p - q < MIN_GAP:
            raise DomainError(f"p - q must be at least {MIN_GAP}, got {p - q!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def ratio(self) -> float:
        """``r = q/p``, always in (0, 1)."""
        return self.q / self.p

    @property
    def log_p(self) -> float:
        return math.log(self.p)

    @property
    def log_ratio(self) -> float:
        # p - q is exact when r >= 1/2, so log1p keeps full accuracy near r = 1
        r = self.ratio
        if r > 0.5:
            return math.log1p((self.q - self.p) / self.p)
        return math.log(r)

    def one_minus_ratio_pow(self, j: int) -> float:
        """``1 - r**j`` without cancellation."""
        return -math.expm1(j * self.log_ratio)


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign, binary exponent and log-mantissa.

    The value is ``sign * 2**exponent * exp(log_mantissa)`` with
    ``log_mantissa`` in ``[0, ln 2)``.  Keeping the power of two apart
    from the log-mantissa is what makes ``from_real``/``to_real`` round
    trip to within an ulp even for magnitudes near 1e300.
    """

    sign: int
    exponent: int = 0
    log_mantissa: float = 0.0

    @classmethod
    def zero(cls) -> SignedLogValue:
        return cls(0, 0, 0.0)

    @classmethod
    def one(cls) -> SignedLogValue:
        return cls(1, 0, 0.0)

    @classmethod
    def from_log(cls, sign: int, log_magnitude: float) -> SignedLogValue:
        if sign == 0 or log_magnitude == -math.inf:
            return cls.zero()
        if not math.isfinite(log_magnitude):
            raise OverflowError("log magnitude is not finite")
        k = math.floor(log_magnitude / _LN2)
        rest = log_magnitude - k * _LN2
        return cls._normalized(1 if sign > 0 else -1, k, rest)

    @classmethod
    def from_real(cls, value: float) -> SignedLogValue:
        if value == 0.0:
            return cls.zero()
        if not math.isfinite(value):
            raise OverflowError(f"cannot represent {value!r}")
        mant, exp2 = math.frexp(abs(value))
        # mant in [0.5, 1): shift to [1, 2) so the log-mantissa is >= 0
        return cls._normalized(1 if value > 0 else -1, exp2 - 1, math.log(2.0 * mant))

    @classmethod
    def _normalized(cls, sign: int, exponent: int, log_mantissa: float) -> SignedLogValue:
        k = math.floor(log_mantissa / _LN2)
        if k:
            exponent += k
            log_mantissa -= k * _LN2
        if log_mantissa < 0.0:
            log_mantissa = 0.0
        return cls(sign, exponent, log_mantissa)

    @property
    def log_magnitude(self) -> float:
        """Natural log of ``|value|``; ``-inf`` for zero."""
        if self.sign == 0:
            return -math.inf
        return self.exponent * _LN2 + self.log_mantissa

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.ldexp(math.exp(self.log_mantissa), self.exponent)
        except OverflowError:
            return self.sign * math.inf

    def __float__(self) -> float:
        return self.to_real()

    def __mul__(self, other: SignedLogValue) -> SignedLogValue:
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue.zero()
        return SignedLogValue._normalized(
            self.sign * other.sign,
            self.exponent + other.exponent,
            self.log_mantissa + other.log_mantissa,
        )

    def __truediv__(self, other: SignedLogValue) -> SignedLogValue:
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return SignedLogValue.zero()
        return SignedLogValue._normalized(
            self.sign * other.sign,
            self.exponent - other.exponent,
            self.log_mantissa - other.log_mantissa,
        )

    def __neg__(self) -> SignedLogValue:
        return SignedLogValue(-self.sign, self.exponent, self.log_mantissa)


@dataclass(frozen=True)
class PFactored:
    """``sign * p**p_exp * exp(log_rest)`` with an exact integer ``p_exp``.

    Products only add integers and floats, so the huge and tiny powers of
    ``p`` that appear in operator weights cancel exactly before anything
    is exponentiated.
    """

    sign: int
    p_exp: int = 0
    log_rest: float = 0.0

    @classmethod
    def zero(cls) -> PFactored:
        return cls(0, 0, 0.0)

    @classmethod
    def from_real(cls, value: float, p_exp: int = 0) -> PFactored:
        if value == 0.0:
            return cls.zero()
        return cls(1 if value > 0 else -1, p_exp, math.log(abs(value)))

    def __mul__(self, other: PFactored) -> PFactored:
        if self.sign == 0 or other.sign == 0:
            return PFactored.zero()
        return PFactored(
            self.sign * other.sign, self.p_exp + other.p_exp, self.log_rest + other.log_rest
        )

    def __truediv__(self, other: PFactored) -> PFactored:
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero PFactored")
        if self.sign == 0:
            return PFactored.zero()
        return PFactored(
            self.sign * other.sign, self.p_exp - other.p_exp, self.log_rest - other.log_rest
        )

    def times_p(self, exponent: int) -> PFactored:
        if self.sign == 0:
            return self
        return PFactored(self.sign, self.p_exp + exponent, self.log_rest)

    def log_magnitude(self, params: PqParams) -> float:
        if self.sign == 0:
            return -math.inf
        if self.p_exp == 0:
            return self.log_rest
        return self.p_exp * params.log_p + self.log_rest

    def to_signed_log(self, params: PqParams) -> SignedLogValue:
        return SignedLogValue.from_log(self.sign, self.log_magnitude(params))

    def to_real(self, params: PqParams) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude(params))
        except OverflowError:
            return self.sign * math.inf


@lru_cache(maxsize=256)
def _sums_table(r: float, n_max: int) -> tuple[float, ...]:
    sums = [0.0] * (n_max + 1)
    s = 0.0
    for k in range(1, n_max + 1):
        s = 1.0 + r * s
        sums[k] = s
    return tuple(sums)


def normalized_sums(n_max: int, params: PqParams) -> tuple[float, ...]:
    """``S_k = 1 + r + ... + r**(k-1)`` for ``k = 0..n_max`` (``S_0 = 0``).

    Built by the Horner recurrence ``S_k = 1 + r*S_{k-1}``; table sizes are
    rounded up so nearby requests share one cached table.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    size = max(64, 1 << max(0, n_max).bit_length())
    return _sums_table(params.ratio, size)


@lru_cache(maxsize=256)
def _log_factorial_table(r: float, n_max: int) -> tuple[float, ...]:
    sums = _sums_table(r, n_max)
    out = [0.0] * (n_max + 1)
    acc = 0.0
    for k in range(1, n_max + 1):
        acc += math.log(sums[k])
        out[k] = acc
    return tuple(out)


def _log_sum_factorials(n_max: int, params: PqParams) -> tuple[float, ...]:
    size = max(64, 1 << max(0, n_max).bit_length())
    return _log_factorial_table(params.ratio, size)


def _check_n(n: int, name: str = "n") -> None:
    if n < 0 or int(n) != n:
        raise DomainError(f"{name} must be a nonnegative integer, got {n!r}")


def pq_number(n: int, params: PqParams) -> float:
    """``[n]_{p,q} = p**(n-1) + p**(n-2)*q + ... + q**(n-1)``, summed by Horner."""
    _check_n(n)
    p, q = params.p, params.q
    total = 0.0
    q_pow = 1.0
    for _ in range(n):
        total = total * p + q_pow
        q_pow *= q
    return total


def number_factored(n: int, params: PqParams) -> PFactored:
    """``[n]`` as ``p**(n-1) * S_n``."""
    _check_n(n)
    if n == 0:
        return PFactored.zero()
    return PFactored(1, n - 1, math.log(normalized_sums(n, params)[n]))


def log_pq_number(n: int, params: PqParams) -> float:
    """Natural log of ``[n]``; safe when ``[n]`` itself underflows."""
    return number_factored(n, params).log_magnitude(params)


def factorial_factored(n: int, params: PqParams) -> PFactored:
    """``[n]!`` as ``p**(n(n-1)/2) * S_1 S_2 ... S_n``."""
    _check_n(n)
    return PFactored(1, n * (n - 1) // 2, _log_sum_factorials(n, params)[n])


def pq_factorial(n: int, params: PqParams) -> float:
    """``[n]! = [1][2]...[n]`` with ``[0]! = 1``."""
    _check_n(n)
    out = 1.0
    for k in range(1, n + 1):
        out *= pq_number(k, params)
    return out


def log_pq_factorial(n: int, params: PqParams) -> float:
    return factorial_factored(n, params).log_magnitude(params)


def binomial_factored(n: int, k: int, params: PqParams) -> PFactored:
    """The (p,q)-binomial coefficient; the power of p is ``p**(k(n-k))``."""
    _check_n(n)
    if not 0 <= k <= n:
        raise DomainError(f"binomial index k={k!r} outside [0, {n}]")
    table = _log_sum_factorials(n, params)
    return PFactored(1, k * (n - k), table[n] - table[k] - table[n - k])


def pq_binomial(n: int, k: int, params: PqParams) -> float:
    return binomial_factored(n, k, params).to_real(params)


def log_pq_binomial(n: int, k: int, params: PqParams) -> float:
    return binomial_factored(n, k, params).log_magnitude(params)


def power_basis_factored(x: float, a: float, n: int, params: PqParams) -> PFactored:
    """``(x (-) a)^n = prod_j (p**j x - q**j a)`` written as
    ``p**(n(n-1)/2) * prod_j (x - r**j a)``.

    With ``x == 0`` the factors are ``-q**j a``; those are handled through
    ``q**j = p**j r**j`` in log form so they never underflow to a false zero.
    """
    _check_n(n)
    if n == 0:
        return PFactored(1, 0, 0.0)
    sign = 1
    log_rest = 0.0
    if x == 0.0:
        if a == 0.0:
            return PFactored.zero()
        sign = (-1 if a > 0 else 1) ** n
        log_rest = n * math.log(abs(a)) + (n * (n - 1) // 2) * params.log_ratio
        return PFactored(sign, n * (n - 1) // 2, log_rest)
    r = params.ratio
    r_pow = 1.0
    for _ in range(n):
        factor = x - r_pow * a
        if factor == 0.0:
            return PFactored.zero()
        if factor < 0.0:
            sign = -sign
        log_rest += math.log(abs(factor))
        r_pow *= r
    return PFactored(sign, n * (n - 1) // 2, log_rest)


def pq_power_basis(x: float, a: float, n: int, params: PqParams) -> SignedLogValue:
    """Sign-tracked ``(x (-) a)^n_{p,q} = (x-a)(px-qa)...(p**(n-1) x - q**(n-1) a)``."""
    return power_basis_factored(x, a, n, params).to_signed_log(params)
