"""Analytics over an agency's annual reports.

Annual records carry money flows (disbursed funding, administration
cost) and output counts (publications, graduations, patents).  The
functions here aggregate those into a weighted composite output, a
return on investment, an incremental administration cost per project,
and a year-indexed case-study table, optionally after deflating money
values to a base year.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .errors import DegenerateDataError, ValidationError
from .model import _finite, _require

DEFAULT_PUBLICATION_VALUE = 12_000.0


@dataclass(frozen=True)
class OutputWeights:
    """Relative worth of one output of each kind, publications = 1.

    The money scale enters once, through the value of a single
    publication; the other outputs are priced relative to it.
    """

    publications: float = 1.0
    masters: float = 2.0
    doctorates: float = 5.0
    patents: float = 30.0
    base_publication_value: float = DEFAULT_PUBLICATION_VALUE

    def __post_init__(self) -> None:
        for name in (
            "publications",
            "masters",
            "doctorates",
            "patents",
            "base_publication_value",
        ):
            value = _finite(getattr(self, name), name)
            _require(value >= 0.0, f"{name} must be non-negative")


@dataclass(frozen=True)
class AnnualRecord:
    """One year of an agency's books."""

    year: int
    disbursed: float
    admin_cost: float
    projects: int
    publications: int
    masters: int
    doctorates: int
    patents: int
    deflator: float | None = None

    def __post_init__(self) -> None:
        _require(isinstance(self.year, int), f"year must be an integer, got {self.year!r}")
        for name in ("disbursed", "admin_cost"):
            value = _finite(getattr(self, name), name)
            _require(value >= 0.0, f"{name} must be non-negative in year {self.year}")
        for name in ("projects", "publications", "masters", "doctorates", "patents"):
            value = getattr(self, name)
            _require(
                isinstance(value, int) and value >= 0,
                f"{name} must be a non-negative count in year {self.year}, got {value!r}",
            )
        if self.deflator is not None:
            _finite(self.deflator, "deflator")
            _require(self.deflator > 0.0, f"deflator must be positive in year {self.year}")


@dataclass(frozen=True)
class CaseStudyRow:
    """Case-study measures for one year, raw and indexed to a base year."""

    year: int
    funding_per_project: float
    admin_ratio: float
    composite: float
    roi: float
    funding_per_project_index: float
    admin_ratio_index: float
    composite_index: float
    roi_index: float


def _check_series(series: Sequence[AnnualRecord]) -> None:
    _require(len(series) > 0, "the series is empty")
    years = [record.year for record in series]
    for earlier, later in zip(years, years[1:]):
        if later == earlier:
            raise ValidationError(f"duplicate year {later} in series")
        _require(later > earlier, f"years out of order: {earlier} before {later}")


def composite_output(record: AnnualRecord, weights: OutputWeights | None = None) -> float:
    """Weighted sum of the year's outputs."""
    w = weights if weights is not None else OutputWeights()
    return (
        record.publications * w.publications
        + record.masters * w.masters
        + record.doctorates * w.doctorates
        + record.patents * w.patents
    )


def roi(record: AnnualRecord, weights: OutputWeights | None = None) -> float:
    """Composite output valued in money, per unit of total spend."""
    w = weights if weights is not None else OutputWeights()
    spend = record.disbursed + record.admin_cost
    _require(spend > 0.0, f"total spend is zero in year {record.year}; roi undefined")
    return composite_output(record, w) * w.base_publication_value / spend


def incremental_admin_cost(series: Sequence[AnnualRecord]) -> float:
    """Administration cost added per additional funded project.

    Least-squares slope of administration cost against project count,
    intercept fitted, so a fixed overhead does not bias the estimate.
    """
    if len(series) < 2:
        raise DegenerateDataError("need at least two records to estimate a slope")
    _check_series(series)
    xs = [float(record.projects) for record in series]
    zs = [record.admin_cost for record in series]
    x_mean = sum(xs) / len(xs)
    z_mean = sum(zs) / len(zs)
    sxx = sum((x - x_mean) ** 2 for x in xs)
    if sxx == 0.0:
        raise DegenerateDataError("project counts never vary; slope undefined")
    sxz = sum((x - x_mean) * (z - z_mean) for x, z in zip(xs, zs))
    return sxz / sxx


def deflate_series(series: Sequence[AnnualRecord], base_year: int) -> list[AnnualRecord]:
    """Restate money values at the base year's price level.

    Every record must carry a deflator.  The base year's record is
    returned unchanged; other years are divided by the ratio of their
    deflator to the base year's.
    """
    _check_series(series)
    base = _find_year(series, base_year)
    if base.deflator is None:
        raise ValidationError(f"base year {base_year} has no deflator")
    deflated = []
    for record in series:
        if record.deflator is None:
            raise ValidationError(f"year {record.year} has no deflator")
        ratio = record.deflator / base.deflator
        deflated.append(
            replace(
                record,
                disbursed=record.disbursed / ratio,
                admin_cost=record.admin_cost / ratio,
            )
        )
    return deflated


def _find_year(series: Sequence[AnnualRecord], year: int) -> AnnualRecord:
    for record in series:
        if record.year == year:
            return record
    raise ValidationError(f"base year {year} not present in the series")


def _indexed(value: float, base_value: float, what: str, base_year: int) -> float:
    if base_value == 0.0:
        raise ValidationError(
            f"{what} is zero in base year {base_year}; index undefined"
        )
    return value / base_value


def case_study_report(
    series: Sequence[AnnualRecord],
    base_year: int,
    weights: OutputWeights | None = None,
) -> list[CaseStudyRow]:
    """Per-year funding, administration share, output and return table.

    Each measure is also indexed to the base year, whose own indices
    are exactly 1.  Money values are used as given; deflate the series
    first when comparing across years at constant prices.
    """
    _check_series(series)
    base = _find_year(series, base_year)

    def measures(record: AnnualRecord) -> tuple[float, float, float, float]:
        _require(
            record.projects > 0,
            f"year {record.year} funded no projects; per-project measures undefined",
        )
        funding = record.disbursed / record.projects
        total = record.admin_cost + record.disbursed
        _require(total > 0.0, f"total spend is zero in year {record.year}")
        ratio = record.admin_cost / total
        return (
            funding,
            ratio,
            composite_output(record, weights),
            roi(record, weights),
        )

    base_values = measures(base)
    rows = []
    for record in series:
        values = measures(record)
        names = ("funding per project", "administration ratio", "composite output", "roi")
        indices = tuple(
            _indexed(value, base_value, name, base_year)
            for value, base_value, name in zip(values, base_values, names)
        )
        rows.append(
            CaseStudyRow(
                year=record.year,
                funding_per_project=values[0],
                admin_ratio=values[1],
                composite=values[2],
                roi=values[3],
                funding_per_project_index=indices[0],
                admin_ratio_index=indices[1],
                composite_index=indices[2],
                roi_index=indices[3],
            )
        )
    return rows
