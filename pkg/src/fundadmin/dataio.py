"""Delimited input and output with deterministic formatting.

All emitted numbers use fixed-point notation with a configurable count
of significant digits (never scientific notation), lines end with a
single newline, and files are written atomically via a temp file in
the target directory followed by a rename.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from typing import IO, Sequence

from .analytics import AnnualRecord, CaseStudyRow
from .errors import CsvFormatError, ValidationError
from .model import PortfolioPoint

ANNUAL_HEADER = (
    "year",
    "disbursed",
    "admin_cost",
    "projects",
    "publications",
    "masters",
    "doctorates",
    "patents",
)
SWEEP_HEADER = ("ar", "y", "np", "psr", "nsp", "port_sr")
CASE_STUDY_HEADER = (
    "year",
    "funding_per_project",
    "admin_ratio",
    "composite",
    "roi",
    "funding_per_project_index",
    "admin_ratio_index",
    "composite_index",
    "roi_index",
)
DEFAULT_PRECISION = 6


def format_number(value: float, precision: int = DEFAULT_PRECISION) -> str:
    """Fixed-point rendering with ``precision`` significant digits.

    Large magnitudes keep all their integer digits rather than losing
    them to rounding, so the notation never switches to scientific.
    """
    if not 1 <= precision <= 17:
        raise ValidationError(f"precision must lie in [1, 17], got {precision!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"cannot format non-finite value {value!r}")
    if value == 0.0:
        decimals = precision - 1
    else:
        decimals = precision - 1 - math.floor(math.log10(abs(value)))
    decimals = min(max(decimals, 0), 350)
    return f"{value:.{decimals}f}"


def write_key_values(
    items: Sequence[tuple[str, object]],
    stream: IO[str],
    precision: int = DEFAULT_PRECISION,
) -> None:
    """Write scalar results as ``key = value`` lines."""
    for key, value in items:
        if isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, int):
            rendered = str(value)
        elif isinstance(value, float):
            rendered = format_number(value, precision)
        else:
            rendered = str(value)
        stream.write(f"{key} = {rendered}\n")


def write_sweep_csv(
    points: Sequence[PortfolioPoint],
    stream: IO[str],
    precision: int = DEFAULT_PRECISION,
) -> None:
    """Write sweep results as CSV, one row per evaluated ratio."""
    if len(points) == 0:
        raise ValidationError("refusing to write an empty sweep")
    stream.write(",".join(SWEEP_HEADER) + "\n")
    for point in points:
        row = (point.ar, point.y, point.np, point.psr, point.nsp, point.port_sr)
        stream.write(",".join(format_number(v, precision) for v in row) + "\n")


def write_case_study_csv(
    rows: Sequence[CaseStudyRow],
    stream: IO[str],
    precision: int = DEFAULT_PRECISION,
) -> None:
    """Write the case-study report as CSV, one row per year."""
    if len(rows) == 0:
        raise ValidationError("refusing to write an empty report")
    stream.write(",".join(CASE_STUDY_HEADER) + "\n")
    for row in rows:
        cells = [str(row.year)] + [
            format_number(v, precision)
            for v in (
                row.funding_per_project,
                row.admin_ratio,
                row.composite,
                row.roi,
                row.funding_per_project_index,
                row.admin_ratio_index,
                row.composite_index,
                row.roi_index,
            )
        ]
        stream.write(",".join(cells) + "\n")


def _cell_float(raw: str, line: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise CsvFormatError(
            f"line {line}, column {column!r}: not a number: {raw!r}"
        ) from None
    if not math.isfinite(value):
        raise CsvFormatError(f"line {line}, column {column!r}: value must be finite")
    return value


def _cell_int(raw: str, line: int, column: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise CsvFormatError(
            f"line {line}, column {column!r}: not an integer: {raw!r}"
        ) from None


def _read_rows(path: str) -> list[list[str]]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return [row for row in csv.reader(handle)]


def _check_header(found: Sequence[str], allowed: Sequence[Sequence[str]]) -> Sequence[str]:
    cleaned = [cell.strip() for cell in found]
    for candidate in allowed:
        if cleaned == list(candidate):
            return candidate
    expected = " or ".join(",".join(candidate) for candidate in allowed)
    raise CsvFormatError(
        f"bad header: expected {expected}, found {','.join(cleaned)}"
    )


def read_annual_csv(path: str) -> list[AnnualRecord]:
    """Read annual records, returned sorted by year.

    The header must match the documented column order exactly; a
    trailing ``deflator`` column is the only optional part.
    """
    rows = _read_rows(path)
    if not rows:
        raise CsvFormatError(f"{path}: empty file; expected a header row")
    header = _check_header(
        rows[0], (ANNUAL_HEADER, ANNUAL_HEADER + ("deflator",))
    )
    with_deflator = len(header) > len(ANNUAL_HEADER)

    records = []
    seen_years: set[int] = set()
    for offset, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise CsvFormatError(
                f"line {offset}: expected {len(header)} cells, found {len(row)}"
            )
        cells = [cell.strip() for cell in row]
        year = _cell_int(cells[0], offset, "year")
        if year in seen_years:
            raise ValidationError(f"duplicate year {year}")
        seen_years.add(year)
        records.append(
            AnnualRecord(
                year=year,
                disbursed=_cell_float(cells[1], offset, "disbursed"),
                admin_cost=_cell_float(cells[2], offset, "admin_cost"),
                projects=_cell_int(cells[3], offset, "projects"),
                publications=_cell_int(cells[4], offset, "publications"),
                masters=_cell_int(cells[5], offset, "masters"),
                doctorates=_cell_int(cells[6], offset, "doctorates"),
                patents=_cell_int(cells[7], offset, "patents"),
                deflator=_cell_float(cells[8], offset, "deflator") if with_deflator else None,
            )
        )
    records.sort(key=lambda record: record.year)
    return records


SAMPLES_HEADERS = (("y", "delta_psr"), ("ar", "port_sr"))


def read_samples_csv(path: str) -> tuple[str, list[tuple[float, float]]]:
    """Read calibration samples.

    Returns ``("y", pairs)`` for direct (spend, uplift) samples or
    ``("ar", pairs)`` for observed (ratio, portfolio success) pairs
    that still need converting through a fund spec.
    """
    rows = _read_rows(path)
    if not rows:
        raise CsvFormatError(f"{path}: empty file; expected a header row")
    header = _check_header(rows[0], SAMPLES_HEADERS)
    pairs = []
    for offset, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise CsvFormatError(f"line {offset}: expected 2 cells, found {len(row)}")
        pairs.append(
            (
                _cell_float(row[0].strip(), offset, header[0]),
                _cell_float(row[1].strip(), offset, header[1]),
            )
        )
    return header[0], pairs


def atomic_write_text(path: str, text: str) -> None:
    """Write a file all-or-nothing: temp file in place, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        descriptor, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    except OSError as exc:
        raise OSError(f"cannot write {path!r}: {exc.strerror or exc}") from exc
    try:
        with os.fdopen(descriptor, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp_path, path)
    except BaseException:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        raise
