"""Convergence experiments and their CSV/JSON datasets.

Output is byte-deterministic: rows come out in grid order, columns in
``n_values`` order, and floats use Python's shortest round-trip ``repr``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .calculus import ConvergenceError, IntegrationPolicy
from .core import DomainError, PqParams
from .functions import FunctionSpec, horner
from .moments import (
    MomentTable,
    bernstein_moments,
    durrmeyer_moments,
    king_moments,
    limit_moments,
)
from .operators import OperatorKind, durrmeyer_plan, bernstein_apply, king_argument, king_interval_end

__all__ = [
    "ConfigError",
    "ExperimentError",
    "Grid",
    "ExperimentConfig",
    "ReportRow",
    "ConvergenceReport",
    "run_convergence",
    "run_limit_comparison",
    "limit_polynomial",
    "max_abs_differences",
    "monotone_violations",
]

DEFAULT_GRID_POINTS = 201


class ConfigError(ValueError):
    pass


class ExperimentError(RuntimeError):
    """An evaluation failed; ``n`` and ``x`` locate the failure.

    ``x`` is None when the failure lies in the ``x``-independent inner
    integrals; ``n`` is None when the target function itself failed.
    """

    def __init__(self, n: Optional[int], x: Optional[float], cause: Exception):
        where = ", ".join(
            part
            for part in (
                f"n={n}" if n is not None else "target",
                f"x={x!r}" if x is not None else "inner integrals",
            )
        )
        super().__init__(f"evaluation failed at {where}: {cause}")
        self.n = n
        self.x = x
        self.cause = cause

    @property
    def is_convergence_failure(self) -> bool:
        return isinstance(self.cause, ConvergenceError)


@dataclass(frozen=True)
class Grid:
    start: float = 0.0
    end: float = 1.0
    points: int = DEFAULT_GRID_POINTS

    def __post_init__(self) -> None:
        if self.points < 2:
            raise ConfigError(f"grid needs at least 2 points, got {self.points}")
        if not self.start < self.end:
            raise ConfigError(f"grid start {self.start!r} must be below end {self.end!r}")

    def values(self) -> list[float]:
        span = self.end - self.start
        last = self.points - 1
        xs = [self.start + span * i / last for i in range(last)]
        xs.append(self.end)
        return xs


@dataclass(frozen=True)
class ExperimentConfig:
    operator: OperatorKind
    params: PqParams
    n_values: tuple[int, ...]
    function: FunctionSpec
    grid: Grid = field(default_factory=Grid)
    tol: float = 1e-12
    output_format: str = "csv"
    output_path: Optional[str] = None

    def __post_init__(self) -> None:
        ns = tuple(int(n) for n in self.n_values)
        if not ns:
            raise ConfigError("n_values must not be empty")
        if any(n < 1 for n in ns):
            raise ConfigError(f"n_values must be positive, got {ns}")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError(f"n_values must be strictly increasing, got {ns}")
        object.__setattr__(self, "n_values", ns)
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.operator is OperatorKind.KING_DURRMEYER:
            end = king_interval_end(ns[0], self.params)
            if self.grid.end > end * (1 + 1e-12):
                raise ConfigError(
                    f"King grid end {self.grid.end!r} exceeds [n+2]/(p[n]) = {end!r} at n={ns[0]}"
                )
        if self.grid.start < 0:
            raise ConfigError("grid must start at or above 0")

    @property
    def policy(self) -> IntegrationPolicy:
        try:
            return IntegrationPolicy(rel_tol=self.tol)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> dict:
        return {
            "operator": self.operator.value,
            "p": self.params.p,
            "q": self.params.q,
            "n_values": list(self.n_values),
            "function": self.function.describe(),
            "grid": {"start": self.grid.start, "end": self.grid.end, "points": self.grid.points},
            "tol": self.tol,
        }


@dataclass(frozen=True)
class ReportRow:
    x: float
    values: tuple[float, ...]
    diffs: tuple[float, ...]


@dataclass
class ConvergenceReport:
    n_values: tuple[int, ...]
    rows: list[ReportRow]
    reference: Optional[list[float]] = None
    config: Optional[dict] = None
    coefficients: Optional[dict] = None

    def header(self) -> list[str]:
        cols = ["x"]
        cols += [f"D_{n}" for n in self.n_values]
        cols += [f"diff_{n}" for n in self.n_values]
        if self.reference is not None:
            cols.append("ref")
        return cols

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        for i, row in enumerate(self.rows):
            cells = [repr(row.x), *map(repr, row.values), *map(repr, row.diffs)]
            if self.reference is not None:
                cells.append(repr(self.reference[i]))
            writer.writerow(cells)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, config: Optional[dict] = None) -> ConvergenceReport:
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if not header or header[0] != "x":
            raise ValueError("CSV must start with an 'x' column")
        has_ref = header[-1] == "ref"
        body = header[1:-1] if has_ref else header[1:]
        k = len(body) // 2
        n_values = tuple(int(name[2:]) for name in body[:k])
        if [f"diff_{n}" for n in n_values] != body[k:]:
            raise ValueError(f"unexpected CSV columns {header}")
        rows, reference = [], [] if has_ref else None
        for cells in reader:
            values = [float(c) for c in cells]
            rows.append(ReportRow(values[0], tuple(values[1 : 1 + k]), tuple(values[1 + k : 1 + 2 * k])))
            if has_ref:
                reference.append(values[-1])
        return cls(n_values, rows, reference, config)

    def to_json(self) -> str:
        doc: dict = {
            "config": self.config or {},
            "rows": [
                {
                    "x": row.x,
                    "values": {str(n): v for n, v in zip(self.n_values, row.values)},
                    "diffs": {str(n): d for n, d in zip(self.n_values, row.diffs)},
                }
                for row in self.rows
            ],
        }
        if self.reference is not None:
            doc["reference"] = self.reference
        if self.coefficients is not None:
            doc["coefficients"] = self.coefficients
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ConvergenceReport:
        doc = json.loads(text)
        rows_doc = doc["rows"]
        n_values = tuple(int(n) for n in rows_doc[0]["values"]) if rows_doc else tuple(doc["config"]["n_values"])
        rows = [
            ReportRow(
                r["x"],
                tuple(r["values"][str(n)] for n in n_values),
                tuple(r["diffs"][str(n)] for n in n_values),
            )
            for r in rows_doc
        ]
        return cls(n_values, rows, doc.get("reference"), doc.get("config"), doc.get("coefficients"))

    def serialize(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()

    def column(self, n: int, kind: str = "diffs") -> list[float]:
        i = self.n_values.index(n)
        return [getattr(row, kind)[i] for row in self.rows]


def _evaluate_all(config: ExperimentConfig, n: int, xs: Sequence[float]) -> list[float]:
    f, params = config.function, config.params
    kind = config.operator
    try:
        if kind is OperatorKind.BERNSTEIN:
            evaluate = lambda x: bernstein_apply(f, n, x, params)  # noqa: E731
        else:
            plan = durrmeyer_plan(f, n, params, config.policy)
            if kind is OperatorKind.DURRMEYER:
                evaluate = plan.evaluate
            else:
                evaluate = lambda x: plan.evaluate(king_argument(n, x, params))  # noqa: E731
    except (ArithmeticError, ValueError) as exc:
        raise ExperimentError(n, None, exc) from exc
    out = []
    for x in xs:
        try:
            out.append(evaluate(x))
        except (ArithmeticError, ValueError) as exc:
            raise ExperimentError(n, x, exc) from exc
    return out


def _run(config: ExperimentConfig, target) -> tuple[ConvergenceReport, list[float]]:
    xs = config.grid.values()
    targets = []
    for x in xs:
        try:
            targets.append(target(x))
        except (ArithmeticError, ValueError) as exc:
            raise ExperimentError(None, x, exc) from exc
    columns = [_evaluate_all(config, n, xs) for n in config.n_values]
    rows = []
    for i, x in enumerate(xs):
        values = tuple(col[i] for col in columns)
        rows.append(ReportRow(x, values, tuple(v - targets[i] for v in values)))
    return ConvergenceReport(config.n_values, rows, config=config.echo()), targets


def run_convergence(config: ExperimentConfig) -> ConvergenceReport:
    """Tabulate ``op(f, x) - f(x)`` for every grid point and every ``n``."""
    report, _ = _run(config, config.function)
    return report


def _moment_table(kind: OperatorKind, n: int, params: PqParams) -> MomentTable:
    if kind is OperatorKind.BERNSTEIN:
        return bernstein_moments(n, params)
    if kind is OperatorKind.KING_DURRMEYER:
        return king_moments(n, params)
    return durrmeyer_moments(n, params)


def limit_polynomial(f: FunctionSpec, params: PqParams) -> FunctionSpec:
    """Pointwise limit of ``D_n f`` as ``n -> infinity`` for a quadratic ``f``."""
    coefficients = f.polynomial_coefficients
    if coefficients is None or len(coefficients) > 3:
        raise ConfigError("the limit is only available for polynomials of degree <= 2")
    return FunctionSpec.polynomial(limit_moments(params).apply_quadratic(coefficients))


def run_limit_comparison(
    config: ExperimentConfig, reference_poly: Optional[FunctionSpec] = None
) -> ConvergenceReport:
    """Tabulate ``op(f, x) - f*(x)`` plus the exact quadratic coefficients of ``op(f)``.

    ``reference_poly`` defaults to :func:`limit_polynomial` (Durrmeyer only).
    """
    coefficients = config.function.polynomial_coefficients
    if coefficients is None or (len(coefficients) > 3 and any(coefficients[3:])):
        raise ConfigError("limit comparison needs a polynomial of degree <= 2")
    if reference_poly is None:
        if config.operator is not OperatorKind.DURRMEYER:
            raise ConfigError("give a reference polynomial for this operator")
        reference_poly = limit_polynomial(config.function, config.params)
    ref_coeffs = reference_poly.polynomial_coefficients
    report, targets = _run(config, lambda x: horner(ref_coeffs, x))
    report.reference = targets
    report.coefficients = {
        "reference": list(ref_coeffs),
        "by_n": {
            str(n): list(_moment_table(config.operator, n, config.params).apply_quadratic(coefficients))
            for n in config.n_values
        },
    }
    return report


def max_abs_differences(report: ConvergenceReport) -> dict[int, float]:
    return {n: max(abs(d) for d in report.column(n)) for n in report.n_values}


def monotone_violations(report: ConvergenceReport) -> list[tuple[int, int, float, float]]:
    """Consecutive ``(n, n')`` pairs whose max |difference| fails to shrink."""
    maxima = max_abs_differences(report)
    ns = report.n_values
    return [(a, b, maxima[a], maxima[b]) for a, b in zip(ns, ns[1:]) if not maxima[b] < maxima[a]]
