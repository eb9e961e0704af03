"""Choosing the administration ratio: optimisation, targets, sweeps.

The portfolio success rate as a function of spend per project is

    port_sr(y) = (1 - ar(y)) * clamp(psr_in + delta_psr(y))

For the linear response this is piecewise linear in the ratio itself,
so the optimum sits at one of two corners and is found in closed form.
For the saturating response the curve rises and then falls at most
once, so a coarse scan followed by a golden-section refinement finds
the single peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import UnreachableTargetError, ValidationError
from .model import (
    FundSpec,
    PortfolioPoint,
    _finite,
    _require,
    ar_from_y,
    evaluate_point,
    y_from_ar,
)
from .response import LinearResponse, ResponseModel, SaturatingResponse

# Ratios above this are flagged, not forbidden; agencies this heavy on
# administration are rarely defensible but the model still evaluates them.
HIGH_AR_THRESHOLD = 0.2

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_SCAN_POINTS = 1000
_Y_RTOL = 1e-9


@dataclass(frozen=True)
class RiskPreference:
    """What the agency optimises for.

    ``maximize_portsr`` picks the ratio with the best portfolio success
    rate; ``min_psr`` asks for the cheapest ratio whose per-project
    success rate reaches ``psr_min``.
    """

    mode: str = "maximize_portsr"
    psr_min: float | None = None

    def __post_init__(self) -> None:
        _require(
            self.mode in ("maximize_portsr", "min_psr"),
            f"unknown risk preference mode {self.mode!r}",
        )
        if self.mode == "min_psr":
            _require(self.psr_min is not None, "min_psr mode requires psr_min")
            _finite(self.psr_min, "psr_min")
            _require(
                0.0 <= self.psr_min <= 1.0,
                f"psr_min must lie in [0, 1], got {self.psr_min!r}",
            )
        else:
            _require(
                self.psr_min is None,
                "psr_min only applies to min_psr mode",
            )


@dataclass(frozen=True)
class OptimumResult:
    """Optimiser output: the best point plus how it was reached.

    ``boundary_flag`` is ``interior`` for a stationary optimum,
    ``at_base`` when zero discretionary spend wins, and ``at_cap`` when
    the response ceiling (or search cap) binds.  ``evaluations`` counts
    objective evaluations spent.
    """

    point: PortfolioPoint
    boundary_flag: str
    evaluations: int

    @property
    def high_ar(self) -> bool:
        """True when the optimum ratio exceeds the defensibility mark."""
        return self.point.ar > HIGH_AR_THRESHOLD


def _port_sr_of_y(spec: FundSpec, response: ResponseModel) -> Callable[[float], float]:
    def objective(y: float) -> float:
        return evaluate_point(spec, response, y).port_sr

    return objective


def _optimize_linear(spec: FundSpec, response: LinearResponse) -> OptimumResult:
    # In the uncapped region port_sr is linear in ar with constant slope
    # slope*v_i - psr_in, so only the two corners can win.  The success
    # rate clamp at 1 binds before the ceiling whenever psr_in + cap > 1,
    # which shrinks the useful part of the cap.
    gradient = response.slope * spec.project_funding - spec.intrinsic_success_rate
    useful_cap = min(
        response.max_delta_psr, max(0.0, 1.0 - spec.intrinsic_success_rate)
    )
    evaluations = 1
    base = evaluate_point(spec, response, 0.0)
    # gradient > 0 forces slope > 0, so the division below is safe.
    if gradient > 0.0 and useful_cap > 0.0:
        evaluations += 1
        capped = evaluate_point(spec, response, useful_cap / response.slope)
        if capped.port_sr > base.port_sr:
            return OptimumResult(point=capped, boundary_flag="at_cap", evaluations=evaluations)
    return OptimumResult(point=base, boundary_flag="at_base", evaluations=evaluations)


def _golden_max(
    objective: Callable[[float], float], lo: float, hi: float
) -> tuple[float, int]:
    evaluations = 0
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = objective(c), objective(d)
    evaluations += 2
    while hi - lo > _Y_RTOL * max(1.0, abs(hi)):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = objective(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = objective(d)
        evaluations += 1
    return (c if fc >= fd else d), evaluations


def _optimize_saturating(spec: FundSpec, response: SaturatingResponse) -> OptimumResult:
    # Past 10 response time-constants the curve is flat to 5 digits, and
    # past 10x the project funding the (1 - ar) factor has collapsed, so
    # nothing beyond this cap can win.
    y_max = max(10.0 / response.rate, 10.0 * spec.project_funding)

    # Coarse scan brackets the single peak; vectorised for speed.
    ys = np.linspace(0.0, y_max, _SCAN_POINTS)
    ars = (spec.base_fraction * spec.project_funding + ys) / (spec.project_funding + ys)
    psrs = np.clip(
        spec.intrinsic_success_rate
        + response.ceiling * (1.0 - np.exp(-response.rate * ys)),
        0.0,
        1.0,
    )
    scan = (1.0 - ars) * psrs
    peak = int(np.argmax(scan))
    evaluations = _SCAN_POINTS

    objective = _port_sr_of_y(spec, response)
    lo = ys[max(peak - 1, 0)]
    hi = ys[min(peak + 1, _SCAN_POINTS - 1)]
    y_golden, spent = _golden_max(objective, float(lo), float(hi))
    evaluations += spent

    # The refined point must also beat both endpoints of the search range.
    best_y = 0.0
    best = objective(0.0)
    evaluations += 1
    for candidate in (y_golden, y_max):
        value = objective(candidate)
        evaluations += 1
        if value > best:
            best, best_y = value, candidate

    if best_y == 0.0:
        flag = "at_base"
    elif best_y == y_max:
        flag = "at_cap"
    else:
        flag = "interior"
    point = evaluate_point(spec, response, best_y)
    return OptimumResult(point=point, boundary_flag=flag, evaluations=evaluations)


def optimize_ar(spec: FundSpec, response: ResponseModel) -> OptimumResult:
    """Administration ratio maximising the portfolio success rate."""
    if isinstance(response, LinearResponse):
        return _optimize_linear(spec, response)
    if isinstance(response, SaturatingResponse):
        return _optimize_saturating(spec, response)
    raise ValidationError(f"unsupported response model {type(response).__name__}")


def required_ar_for_min_psr(
    spec: FundSpec, response: ResponseModel, psr_min: float
) -> PortfolioPoint:
    """Cheapest operating point whose success rate reaches ``psr_min``.

    When the intrinsic rate already suffices this is the base point;
    otherwise the response is inverted for the missing uplift.  Targets
    beyond the response ceiling raise.
    """
    psr_min = _finite(psr_min, "psr_min")
    _require(0.0 <= psr_min <= 1.0, f"psr_min must lie in [0, 1], got {psr_min!r}")
    if psr_min <= spec.intrinsic_success_rate:
        return evaluate_point(spec, response, 0.0)
    y = response.invert(psr_min - spec.intrinsic_success_rate)
    return evaluate_point(spec, response, y)


def sweep(
    spec: FundSpec, response: ResponseModel, ar_values: Iterable[float]
) -> list[PortfolioPoint]:
    """Evaluate the portfolio along a grid of administration ratios."""
    points = []
    for ar in ar_values:
        ar = _finite(ar, "ar")
        if not spec.base_fraction <= ar < 1.0:
            raise ValidationError(
                f"sweep value {ar!r} outside [{spec.base_fraction!r}, 1)"
            )
        points.append(evaluate_point(spec, response, y_from_ar(spec, ar)))
    return points


def efficiency_estimate(
    spec: FundSpec,
    response: ResponseModel,
    observed_admin_cost: float,
    observed_port_sr: float,
) -> float:
    """Observed admin cost relative to the cheapest cost achieving the
    same portfolio success rate.

    The frontier cost comes from the rising branch of the success
    curve: the smallest spend whose portfolio success rate matches the
    observation.  Values are clamped to at most 1; an observation above
    the model's own maximum is unreachable and raises.
    """
    observed_admin_cost = _finite(observed_admin_cost, "observed_admin_cost")
    observed_port_sr = _finite(observed_port_sr, "observed_port_sr")
    _require(observed_admin_cost > 0.0, "observed_admin_cost must be positive")
    _require(observed_port_sr > 0.0, "observed_port_sr must be positive")

    optimum = optimize_ar(spec, response)
    if observed_port_sr > optimum.point.port_sr:
        raise UnreachableTargetError(
            f"observed portfolio success rate {observed_port_sr!r} exceeds the "
            f"model maximum {optimum.point.port_sr!r}"
        )

    objective = _port_sr_of_y(spec, response)
    base_value = objective(0.0)
    if observed_port_sr <= base_value:
        frontier_y = 0.0
    else:
        # Bisection on the rising branch between zero and the optimum.
        lo, hi = 0.0, optimum.point.y
        for _ in range(200):
            if hi - lo <= _Y_RTOL * max(1.0, hi):
                break
            mid = 0.5 * (lo + hi)
            if objective(mid) < observed_port_sr:
                lo = mid
            else:
                hi = mid
        frontier_y = hi
    frontier_cost = ar_from_y(spec, frontier_y) * spec.programme_value
    return min(1.0, frontier_cost / observed_admin_cost)
