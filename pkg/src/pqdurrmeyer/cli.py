"""Command-line front end: ``pqdurrmeyer <command> [options]``.

Exit status is 0 on success, 2 for bad configuration or input, and 3 when a
series fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from typing import Optional, Sequence

from .calculus import ConvergenceError
from .core import DomainError, PqParams
from .experiments import (
    ConfigError,
    ExperimentConfig,
    ExperimentError,
    Grid,
    run_convergence,
    run_limit_comparison,
)
from .functions import EvaluationError, ParseError, RegistryError, parse_function
from .identities import run_identity_suite
from .moments import (
    central_moments,
    combined_bound,
    combined_second_moment,
    error_profile,
    second_moment_bound,
)
from .operators import OperatorKind, durrmeyer_values, king_interval_end

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3


def _n_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _add_common(sub: argparse.ArgumentParser, *, n_default: str, f_default: str) -> None:
    sub.add_argument("--p", type=float, default=0.5)
    sub.add_argument("--q", type=float, default=0.4)
    sub.add_argument("--n", type=_n_list, default=_n_list(n_default), help="comma-separated degrees")
    sub.add_argument("--f", default=f_default, help="poly:c0,c1,... or builtin:NAME")
    sub.add_argument("--grid-start", type=float, default=0.0)
    sub.add_argument("--grid-end", type=float, default=None)
    sub.add_argument("--grid-points", type=int, default=201)
    sub.add_argument("--tol", type=float, default=1e-12)
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pqdurrmeyer", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    converge = commands.add_parser("converge", help="tabulate D_n f - f over a grid")
    _add_common(converge, n_default="5,10,15,100", f_default="builtin:quad")
    converge.add_argument(
        "--operator", choices=[k.value for k in OperatorKind], default=OperatorKind.DURRMEYER.value
    )

    limit = commands.add_parser("limit", help="tabulate D_n f - f* against the limit polynomial")
    _add_common(limit, n_default="10,15,20,50", f_default="builtin:quad")
    limit.add_argument("--ref", default=None, help="reference polynomial (default: the n -> infinity limit)")

    identities = commands.add_parser("identities", help="run the identity suite")
    identities.add_argument("--p", type=float, default=0.5)
    identities.add_argument("--q", type=float, default=0.4)
    identities.add_argument("--max-index", type=int, default=8)
    identities.add_argument("--tol", type=float, default=1e-9)
    identities.add_argument("--seed", type=int, default=20160101)
    identities.add_argument("--format", choices=("csv", "json"), default="json")
    identities.add_argument("--out", default=None)

    moments = commands.add_parser("moments", help="central moments and their bounds")
    _add_common(moments, n_default="4,10,40", f_default="builtin:quad")
    moments.add_argument(
        "--profile", action="store_true", help="emit |D_n f - f| next to the local moduli instead"
    )

    king = commands.add_parser("king", help="tabulate D*_n f - f for the King-type operator")
    _add_common(king, n_default="5,10,15,100", f_default="builtin:quad")
    return parser


def _params(args) -> PqParams:
    return PqParams(args.p, args.q)


def _grid(args, default_end: float = 1.0) -> Grid:
    end = default_end if args.grid_end is None else args.grid_end
    return Grid(args.grid_start, end, args.grid_points)


def _config(args, kind: OperatorKind) -> ExperimentConfig:
    params = _params(args)
    default_end = 1.0
    if kind is OperatorKind.KING_DURRMEYER and args.n:
        default_end = king_interval_end(min(args.n), params)
    return ExperimentConfig(
        operator=kind,
        params=params,
        n_values=args.n,
        function=parse_function(args.f),
        grid=_grid(args, default_end),
        tol=args.tol,
        output_format=args.format,
        output_path=args.out,
    )


def _records_to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in record.items()})
    return buf.getvalue()


def _records(records: list[dict], fmt: str, header: Optional[dict] = None) -> str:
    if fmt == "csv":
        return _records_to_csv(records)
    return json.dumps({"config": header or {}, "rows": records}, indent=1) + "\n"


def _cmd_converge(args) -> str:
    config = _config(args, OperatorKind(args.operator))
    return run_convergence(config).serialize(config.output_format)


def _cmd_king(args) -> str:
    config = _config(args, OperatorKind.KING_DURRMEYER)
    return run_convergence(config).serialize(config.output_format)


def _cmd_limit(args) -> str:
    config = _config(args, OperatorKind.DURRMEYER)
    reference = parse_function(args.ref) if args.ref else None
    return run_limit_comparison(config, reference).serialize(config.output_format)


def _cmd_identities(args) -> str:
    report = run_identity_suite(_params(args), args.max_index, args.tol, seed=args.seed)
    if args.format == "json":
        return json.dumps(report, indent=1) + "\n"
    return _records_to_csv(report["checks"])


def _cmd_moments(args) -> str:
    config = _config(args, OperatorKind.DURRMEYER)
    params, xs = config.params, config.grid.values()
    records = []
    for n in config.n_values:
        if args.profile:
            values = durrmeyer_values(config.function, n, xs, params, config.policy)
            for row in error_profile(config.function, n, params, xs, values):
                records.append({"n": n, **asdict(row)})
            continue
        for x in xs:
            first, second = central_moments(n, x, params)
            records.append(
                {
                    "n": n,
                    "x": x,
                    "first": first,
                    "second": second,
                    "second_bound": second_moment_bound(n, x, params),
                    "combined": combined_second_moment(n, x, params),
                    "combined_bound": combined_bound(n, x, params),
                }
            )
    return _records(records, config.output_format, config.echo())


COMMANDS = {
    "converge": _cmd_converge,
    "limit": _cmd_limit,
    "identities": _cmd_identities,
    "moments": _cmd_moments,
    "king": _cmd_king,
}


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE if exc.is_convergence_failure else EXIT_CONFIG
    except (ConfigError, ParseError, RegistryError, DomainError, EvaluationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
