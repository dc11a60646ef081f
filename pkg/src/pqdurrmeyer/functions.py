"""Target functions for the operators and the small ``poly:``/``builtin:`` DSL."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

__all__ = [
    "EvaluationError",
    "ParseError",
    "RegistryError",
    "FunctionSpec",
    "BUILTINS",
    "monomial",
    "parse_function",
    "horner",
]

POLY_DOMAIN = (0.0, 2.0)


class EvaluationError(ValueError):
    """A function was asked for a value outside its declared domain."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RegistryError(KeyError):
    pass


def horner(coefficients: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coefficients):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class _Builtin:
    func: Callable[[float], float]
    domain: tuple[float, float]
    # set when the builtin is itself a polynomial, enabling closed-form integrals
    coefficients: Optional[tuple[float, ...]] = None
    description: str = ""


def _sinmix(x: float) -> float:
    return (x + 1.0) ** 2 * math.sin(10.0 * math.pi * x / 3.0)


BUILTINS: dict[str, _Builtin] = {
    "quad": _Builtin(
        func=lambda x: horner((5.0, -4.0, 9.0), x),
        domain=(0.0, 4.0),
        coefficients=(5.0, -4.0, 9.0),
        description="9x^2 - 4x + 5",
    ),
    "sinmix": _Builtin(
        func=_sinmix,
        domain=(0.0, 4.0),
        description="(x+1)^2 sin(10 pi x / 3)",
    ),
}


@dataclass(frozen=True)
class FunctionSpec:
    """Either a polynomial (ascending coefficients) or a named builtin.

    Instances are callable and refuse to evaluate outside ``domain``.
    """

    coefficients: Optional[tuple[float, ...]] = None
    builtin: Optional[str] = None
    domain: tuple[float, float] = POLY_DOMAIN

    def __post_init__(self) -> None:
        if (self.coefficients is None) == (self.builtin is None):
            raise ValueError("give exactly one of coefficients or builtin")
        if self.builtin is not None and self.builtin not in BUILTINS:
            raise RegistryError(f"unknown builtin {self.builtin!r}; known: {sorted(BUILTINS)}")
        if self.coefficients is not None:
            if len(self.coefficients) == 0:
                raise ValueError("a polynomial needs at least one coefficient")
            object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError(f"empty domain {self.domain!r}")
        object.__setattr__(self, "domain", (float(lo), float(hi)))

    @classmethod
    def polynomial(cls, coefficients: Sequence[float], domain=POLY_DOMAIN) -> FunctionSpec:
        return cls(coefficients=tuple(coefficients), domain=tuple(domain))

    @classmethod
    def from_builtin(cls, name: str) -> FunctionSpec:
        if name not in BUILTINS:
            raise RegistryError(f"unknown builtin {name!r}; known: {sorted(BUILTINS)}")
        return cls(builtin=name, domain=BUILTINS[name].domain)

    @property
    def polynomial_coefficients(self) -> Optional[tuple[float, ...]]:
        """Ascending coefficients when the function is a polynomial, else None."""
        if self.coefficients is not None:
            return self.coefficients
        return BUILTINS[self.builtin].coefficients

    @property
    def is_polynomial(self) -> bool:
        return self.polynomial_coefficients is not None

    def covers(self, lo: float, hi: float) -> bool:
        return self.domain[0] <= lo and hi <= self.domain[1]

    def __call__(self, x: float) -> float:
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise EvaluationError(f"x={x!r} outside domain [{lo!r}, {hi!r}]")
        if self.coefficients is not None:
            return horner(self.coefficients, x)
        return BUILTINS[self.builtin].func(x)

    def describe(self) -> str:
        if self.coefficients is not None:
            return "poly:" + ",".join(repr(c) for c in self.coefficients)
        return f"builtin:{self.builtin}"


def monomial(m: int, domain=POLY_DOMAIN) -> FunctionSpec:
    """``e_m(t) = t**m``."""
    return FunctionSpec.polynomial([0.0] * m + [1.0], domain)


def parse_function(spec_string: str) -> FunctionSpec:
    """Parse ``poly:c0,c1,...`` or ``builtin:<name>``.

    >>> parse_function("poly:5,-4,9")(1.0)
    10.0
    """
    kind, sep, body = spec_string.partition(":")
    if not sep:
        raise ParseError("expected 'poly:' or 'builtin:' prefix", 0)
    offset = len(kind) + 1
    if kind == "builtin":
        name = body.strip()
        if not name:
            raise ParseError("missing builtin name", offset)
        return FunctionSpec.from_builtin(name)
    if kind != "poly":
        raise ParseError(f"unknown function kind {kind!r}", 0)
    if not body.strip():
        raise ParseError("missing coefficients", offset)
    coefficients = []
    pos = offset
    for field in body.split(","):
        try:
            value = float(field)
        except ValueError:
            raise ParseError(f"bad coefficient {field!r}", pos) from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite coefficient {field!r}", pos)
        coefficients.append(value)
        pos += len(field) + 1
    return FunctionSpec.polynomial(coefficients)
