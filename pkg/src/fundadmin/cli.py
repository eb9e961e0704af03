"""Command-line interface.

Six subcommands cover the library surface: evaluate, sweep, optimize,
invert, calibrate and case-study.  Results go to stdout or, with
--out, to a file written atomically; diagnostics go to stderr only.
Exit codes: 0 on success, 1 for validation and domain errors, 2 for
I/O and parse errors.
"""

from __future__ import annotations

import argparse
import io
import sys
from typing import Callable, Sequence

from .analytics import case_study_report, deflate_series
from .config import RunConfig, load_config, merge_flags
from .dataio import (
    DEFAULT_PRECISION,
    atomic_write_text,
    read_annual_csv,
    read_samples_csv,
    write_case_study_csv,
    write_key_values,
    write_sweep_csv,
)
from .errors import (
    ConfigSyntaxError,
    ConfigValueError,
    CsvFormatError,
    FundAdminError,
)
from .model import FIELD_ORDER, evaluate_point
from .optimize import optimize_ar, required_ar_for_min_psr, sweep
from .response import (
    CalibrationSample,
    LinearResponse,
    fit_response,
    samples_from_observations,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems via exceptions."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="fundadmin",
        description=(
            "Model a funding agency's administration costs: evaluate "
            "operating points, sweep and optimise the administration "
            "ratio, invert success-rate targets, calibrate response "
            "curves, and report on annual records."
        ),
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    def add(name: str, help_text: str, config_required: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        if config_required:
            sub.add_argument("--config", required=True, help="path to a key = value config file")
        sub.add_argument("--out", default=None, help="write results to this file instead of stdout")
        sub.add_argument(
            "--precision",
            type=int,
            default=None,
            help="significant digits for emitted numbers (1-17, default 6)",
        )
        return sub

    sub = add("evaluate", "evaluate one operating point")
    sub.add_argument("--y", type=float, default=None, help="discretionary spend per project")
    sub.set_defaults(handler=_cmd_evaluate)

    sub = add("sweep", "tabulate the portfolio along a ratio grid")
    sub.add_argument("--start", type=float, default=None, help="first ratio (default: base fraction)")
    sub.add_argument("--stop", type=float, default=None, help="last ratio (default: 0.5)")
    sub.add_argument("--step", type=float, default=None, help="grid step (default: 0.01)")
    sub.add_argument("--plot", default=None, help="also render the curve to this PNG file")
    sub.set_defaults(handler=_cmd_sweep)

    sub = add("optimize", "find the ratio maximising portfolio success")
    sub.set_defaults(handler=_cmd_optimize)

    sub = add("invert", "cheapest point reaching a minimum success rate")
    sub.add_argument("--psr-min", type=float, default=None, help="minimum acceptable success rate")
    sub.set_defaults(handler=_cmd_invert)

    sub = add("calibrate", "fit a response curve to observed samples")
    sub.add_argument("--samples", default=None, help="CSV of samples (y,delta_psr or ar,port_sr)")
    sub.add_argument(
        "--kind", choices=("linear", "saturating"), default=None, help="response kind to fit"
    )
    sub.set_defaults(handler=_cmd_calibrate)

    sub = add("case-study", "index an agency's annual records", config_required=False)
    sub.add_argument("--data", required=True, help="CSV of annual records")
    sub.add_argument("--base-year", type=int, required=True, help="year the indices normalise to")
    sub.add_argument("--plot", default=None, help="also render the indices to this PNG file")
    sub.set_defaults(handler=_cmd_case_study)

    return parser


def _load_merged(namespace: argparse.Namespace, **extra: object) -> RunConfig:
    config = load_config(namespace.config)
    return merge_flags(
        config, out=namespace.out, precision=namespace.precision, **extra
    )


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        atomic_write_text(out, text)


def _precision(config: RunConfig) -> int:
    return config.precision if config.precision is not None else DEFAULT_PRECISION


def _point_items(point) -> list[tuple[str, object]]:
    values = point.as_dict()
    return [(name, values[name]) for name in FIELD_ORDER]


def _cmd_evaluate(namespace: argparse.Namespace) -> int:
    config = _load_merged(namespace, y=namespace.y)
    spec = config.fund_spec()
    response = config.response_model()
    y = config.y if config.y is not None else 0.0
    point = evaluate_point(spec, response, y)
    buffer = io.StringIO()
    items = _point_items(point) + [("money_unit", config.unit_label())]
    write_key_values(items, buffer, _precision(config))
    _emit(buffer.getvalue(), config.out)
    return EXIT_OK


def _grid(start: float, stop: float, step: float) -> list[float]:
    # Integer stepping keeps the grid reproducible; a naive accumulating
    # loop would drift and make the row count depend on rounding luck.
    count = int((stop - start) / step + 1e-9)
    return [start + index * step for index in range(count + 1)]


def _cmd_sweep(namespace: argparse.Namespace) -> int:
    config = _load_merged(
        namespace,
        sweep_start=namespace.start,
        sweep_stop=namespace.stop,
        sweep_step=namespace.step,
    )
    spec = config.fund_spec()
    response = config.response_model()
    start = config.sweep_start if config.sweep_start is not None else spec.base_fraction
    stop = config.sweep_stop if config.sweep_stop is not None else 0.5
    step = config.sweep_step if config.sweep_step is not None else 0.01
    if start > stop:
        raise ConfigValueError("sweep.start must not exceed sweep.stop")
    points = sweep(spec, response, _grid(start, stop, step))
    buffer = io.StringIO()
    write_sweep_csv(points, buffer, _precision(config))
    _emit(buffer.getvalue(), config.out)
    if namespace.plot is not None:
        from .plots import save_sweep_figure

        save_sweep_figure(points, namespace.plot)
    return EXIT_OK


def _cmd_optimize(namespace: argparse.Namespace) -> int:
    config = _load_merged(namespace)
    spec = config.fund_spec()
    response = config.response_model()
    result = optimize_ar(spec, response)
    if result.high_ar:
        sys.stderr.write(
            "warning: optimum administration ratio "
            f"{result.point.ar:.3f} exceeds 0.2, rarely a defensible level\n"
        )
    values = result.point.as_dict()
    items: list[tuple[str, object]] = [
        (f"{name}_opt", values[name]) for name in FIELD_ORDER
    ]
    items += [
        ("boundary_flag", result.boundary_flag),
        ("evaluations", result.evaluations),
        ("money_unit", config.unit_label()),
    ]
    buffer = io.StringIO()
    write_key_values(items, buffer, _precision(config))
    _emit(buffer.getvalue(), config.out)
    return EXIT_OK


def _cmd_invert(namespace: argparse.Namespace) -> int:
    config = _load_merged(namespace, psr_min=namespace.psr_min)
    spec = config.fund_spec()
    response = config.response_model()
    config.require("psr_min")
    point = required_ar_for_min_psr(spec, response, config.psr_min)
    buffer = io.StringIO()
    items = [("psr_min", config.psr_min)] + _point_items(point)
    items.append(("money_unit", config.unit_label()))
    write_key_values(items, buffer, _precision(config))
    _emit(buffer.getvalue(), config.out)
    return EXIT_OK


def _cmd_calibrate(namespace: argparse.Namespace) -> int:
    config = _load_merged(namespace, samples=namespace.samples)
    # The kind to fit is chosen outside the config so that a config
    # describing one model can still calibrate the other.
    kind = namespace.kind if namespace.kind is not None else config.response_kind
    config.require("samples")
    if kind is None:
        raise ConfigValueError("missing required config key(s): response.kind")
    header_kind, pairs = read_samples_csv(config.samples)
    if header_kind == "y":
        samples = [CalibrationSample(y=y, delta_psr=delta) for y, delta in pairs]
    else:
        samples = samples_from_observations(config.fund_spec(), pairs)
    fitted = fit_response(samples, kind)
    items: list[tuple[str, object]] = [
        ("kind", kind),
        ("n_samples", len(samples)),
    ]
    if isinstance(fitted, LinearResponse):
        items += [("c", fitted.slope), ("max_delta_psr", fitted.max_delta_psr)]
    else:
        items += [("c", fitted.ceiling), ("k", fitted.rate)]
    buffer = io.StringIO()
    write_key_values(items, buffer, _precision(config))
    _emit(buffer.getvalue(), config.out)
    return EXIT_OK


def _cmd_case_study(namespace: argparse.Namespace) -> int:
    precision = namespace.precision if namespace.precision is not None else DEFAULT_PRECISION
    records = read_annual_csv(namespace.data)
    if records and records[0].deflator is not None:
        records = deflate_series(records, namespace.base_year)
    rows = case_study_report(records, namespace.base_year)
    buffer = io.StringIO()
    write_case_study_csv(rows, buffer, precision)
    _emit(buffer.getvalue(), namespace.out)
    if namespace.plot is not None:
        from .plots import save_case_study_figure

        save_case_study_figure(rows, namespace.plot)
    return EXIT_OK


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        namespace = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_INVALID
    except SystemExit as exc:  # --help exits argparse directly
        return int(exc.code or 0)
    try:
        handler: Callable[[argparse.Namespace], int] = namespace.handler
        return handler(namespace)
    except (ConfigSyntaxError, CsvFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except FundAdminError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
