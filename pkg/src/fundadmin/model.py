"""Core algebra linking administration spend to portfolio outcomes.

A funding agency splits a programme budget between a fixed base
overhead, discretionary per-project administration spend, and the
project disbursements themselves.  Total administration cost and the
number of fundable projects determine each other, so both are obtained
from the simultaneous solution of

    admin_cost = base_fraction * programme_value + n_projects * y
    n_projects = (programme_value - admin_cost) / project_funding

where ``y`` is the discretionary administration spend per project.
Dividing through by the programme value gives the administration ratio

    ar = (base_fraction * project_funding + y) / (project_funding + y)

which is independent of the programme size.  Everything downstream
(success rates, sweeps, optimisation) works in terms of ``ar`` and
``y`` through the conversions in this module.

All money values share one unit; the defaults in this module are
expressed in thousands of Rand (kZAR) with an explicit conversion
constant for US dollars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol

from .errors import InfeasibleError, MissingEntryError, ValidationError

# Conversion applied only when a caller explicitly asks for it; money
# values are never converted implicitly.
ZAR_TO_USD = 0.07


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def _finite(value: float, name: str) -> float:
    value = float(value)
    _require(math.isfinite(value), f"{name} must be finite, got {value!r}")
    return value


class ResponseFunction(Protocol):
    """Anything mapping per-project spend to a success-rate uplift."""

    def delta_psr(self, y: float) -> float: ...


@dataclass(frozen=True)
class FundSpec:
    """Static description of one funding programme.

    programme_value, project_funding and the base overhead fraction fix
    the cost side; intrinsic_success_rate is the project success rate
    the portfolio would show with zero discretionary administration.
    """

    programme_value: float
    project_funding: float
    base_fraction: float
    intrinsic_success_rate: float

    def __post_init__(self) -> None:
        _finite(self.programme_value, "programme_value")
        _finite(self.project_funding, "project_funding")
        _finite(self.base_fraction, "base_fraction")
        _finite(self.intrinsic_success_rate, "intrinsic_success_rate")
        _require(self.programme_value > 0.0, "programme_value must be positive")
        _require(self.project_funding > 0.0, "project_funding must be positive")
        _require(
            0.0 <= self.base_fraction < 1.0,
            f"base_fraction must lie in [0, 1), got {self.base_fraction!r}",
        )
        _require(
            0.0 <= self.intrinsic_success_rate <= 1.0,
            "intrinsic_success_rate must lie in [0, 1], got "
            f"{self.intrinsic_success_rate!r}",
        )
        # At base overhead the programme must afford at least one project.
        _require(
            self.project_funding
            <= self.programme_value * (1.0 - self.base_fraction),
            "project_funding exceeds the budget left after base overhead",
        )


@dataclass(frozen=True)
class PortfolioPoint:
    """One evaluated operating point of a programme.

    ``np`` is the fractional number of fundable projects; rounding down
    to whole grants is a reporting choice made by :func:`project_count`,
    the core keeps the fraction so that identities hold exactly.
    """

    ar: float
    y: float
    np: float
    psr: float
    nsp: float
    port_sr: float

    def as_dict(self) -> dict[str, float]:
        return {
            "ar": self.ar,
            "y": self.y,
            "np": self.np,
            "psr": self.psr,
            "nsp": self.nsp,
            "port_sr": self.port_sr,
        }


FIELD_ORDER = ("ar", "y", "np", "psr", "nsp", "port_sr")


def ar_from_y(spec: FundSpec, y: float) -> float:
    """Administration ratio produced by discretionary spend ``y``.

    Solves the admin-cost / project-count system in closed form.  The
    result always lies in [base_fraction, 1).
    """
    y = _finite(y, "y")
    _require(y >= 0.0, f"y must be non-negative, got {y!r}")
    v_i = spec.project_funding
    # b + (1-b)*y/(v_i+y): same value, but never rounds below b, so
    # feeding the result back into y_from_ar stays feasible.
    b = spec.base_fraction
    return b + (1.0 - b) * (y / (v_i + y))


def y_from_ar(spec: FundSpec, ar: float) -> float:
    """Discretionary spend per project that yields ratio ``ar``.

    Inverse of :func:`ar_from_y`.  Ratios below the base overhead are
    infeasible, ratios at or above 1 leave nothing to disburse.
    """
    ar = _finite(ar, "ar")
    if ar < spec.base_fraction:
        raise InfeasibleError(
            f"administration ratio {ar!r} is below the base fraction "
            f"{spec.base_fraction!r}; no spend level can produce it"
        )
    _require(ar < 1.0, f"administration ratio must be below 1, got {ar!r}")
    return spec.project_funding * (ar - spec.base_fraction) / (1.0 - ar)


def admin_cost_from_y(spec: FundSpec, y: float) -> float:
    """Total administration cost at spend level ``y``."""
    return ar_from_y(spec, y) * spec.programme_value


def project_count(spec: FundSpec, ar: float, *, integer: bool = False) -> float:
    """Projects fundable at administration ratio ``ar``.

    Fractional by default, because the surrounding algebra treats the
    count as continuous.  With ``integer=True`` the count is floored to
    whole grants; the budget remainder then sits in administration, so
    the ratio implied by a floored count is 1 - count * project_funding
    / programme_value.
    """
    ar = _finite(ar, "ar")
    _require(
        spec.base_fraction <= ar <= 1.0,
        f"administration ratio {ar!r} outside "
        f"[{spec.base_fraction!r}, 1]",
    )
    count = spec.programme_value * (1.0 - ar) / spec.project_funding
    return float(math.floor(count)) if integer else count


def evaluate_point(spec: FundSpec, response: ResponseFunction, y: float) -> PortfolioPoint:
    """Evaluate every portfolio measure at spend level ``y``.

    The success rate is the intrinsic rate plus the response uplift,
    clamped into [0, 1]; the number of successful projects and the
    portfolio success rate follow directly.
    """
    ar = ar_from_y(spec, y)
    delta = response.delta_psr(y)
    psr = min(1.0, max(0.0, spec.intrinsic_success_rate + delta))
    np_frac = spec.programme_value * (1.0 - ar) / spec.project_funding
    nsp = np_frac * psr
    port_sr = (1.0 - ar) * psr
    return PortfolioPoint(ar=ar, y=float(y), np=np_frac, psr=psr, nsp=nsp, port_sr=port_sr)


def _norm_label(label: str) -> str:
    return " ".join(str(label).split()).casefold()


@dataclass(frozen=True)
class DomainMatrix:
    """Intrinsic success rates keyed by (research domain, R&D stage).

    Keys are matched case-insensitively with whitespace collapsed, so
    ``"Biotechnology"`` and ``"biotechnology"`` address the same entry.
    Looking up an absent pair raises; there is no silent default.
    """

    rates: Mapping[tuple[str, str], float]

    def __post_init__(self) -> None:
        normalised: dict[tuple[str, str], float] = {}
        for (domain, rdi), rate in dict(self.rates).items():
            rate = _finite(rate, f"rate for ({domain!r}, {rdi!r})")
            _require(
                0.0 <= rate <= 1.0,
                f"rate for ({domain!r}, {rdi!r}) must lie in [0, 1], got {rate!r}",
            )
            normalised[(_norm_label(domain), _norm_label(rdi))] = rate
        object.__setattr__(self, "rates", normalised)

    def lookup(self, domain: str, rdi: str) -> float:
        key = (_norm_label(domain), _norm_label(rdi))
        try:
            return self.rates[key]
        except KeyError:
            raise MissingEntryError(
                f"no intrinsic success rate recorded for domain {domain!r} "
                f"at stage {rdi!r}"
            ) from None


def psr_lookup(matrix: DomainMatrix, domain: str, rdi: str) -> float:
    """Intrinsic success rate for a (domain, R&D stage) pair."""
    return matrix.lookup(domain, rdi)


def default_domain_matrix() -> DomainMatrix:
    """The single calibrated entry shipped with the package."""
    return DomainMatrix({("biotechnology", "experimental development"): 0.54})


@dataclass(frozen=True)
class CostSchedule:
    """Menu of discretionary administration tasks and their prices.

    ``base_fraction`` is the non-discretionary overhead share of the
    programme value; each task carries a cost per funded project, in
    the same money unit as the rest of the model.
    """

    base_fraction: float
    tasks: tuple[tuple[str, float], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        _finite(self.base_fraction, "base_fraction")
        _require(
            0.0 <= self.base_fraction < 1.0,
            f"base_fraction must lie in [0, 1), got {self.base_fraction!r}",
        )
        cleaned: list[tuple[str, float]] = []
        seen: set[str] = set()
        for name, cost in self.tasks:
            name = str(name)
            _require(bool(name.strip()), "task names must be non-empty")
            cost = _finite(cost, f"cost of task {name!r}")
            _require(cost >= 0.0, f"cost of task {name!r} must be non-negative")
            key = _norm_label(name)
            _require(key not in seen, f"duplicate task name {name!r}")
            seen.add(key)
            cleaned.append((name, cost))
        object.__setattr__(self, "tasks", tuple(cleaned))

    def total_discretionary(self) -> float:
        """Per-project cost with every task selected."""
        return sum(cost for _, cost in self.tasks)

    def cost_of(self, selected: Iterable[str]) -> float:
        """Per-project spend for a selection of task names."""
        by_key = {_norm_label(name): cost for name, cost in self.tasks}
        total = 0.0
        chosen: set[str] = set()
        for name in selected:
            key = _norm_label(name)
            if key not in by_key:
                raise MissingEntryError(f"unknown administration task {name!r}")
            _require(key not in chosen, f"task {name!r} selected twice")
            chosen.add(key)
            total += by_key[key]
        return total

    def scaled(self, rate: float) -> CostSchedule:
        """Same schedule with every cost multiplied by ``rate``."""
        rate = _finite(rate, "rate")
        _require(rate > 0.0, f"rate must be positive, got {rate!r}")
        return CostSchedule(
            base_fraction=self.base_fraction,
            tasks=tuple((name, cost * rate) for name, cost in self.tasks),
        )


def default_cost_schedule() -> CostSchedule:
    """Default task menu, costs in kZAR per funded project."""
    return CostSchedule(
        base_fraction=0.05,
        tasks=(
            ("detailed internal ex-ante evaluation", 50.0),
            ("external ex-ante evaluation", 400.0),
            ("life cycle monitoring and evaluation", 300.0),
            ("internal ex-post evaluation", 150.0),
            ("external ex-post evaluation", 600.0),
            ("awardee training and other support", 200.0),
        ),
    )
