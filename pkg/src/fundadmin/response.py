"""Success-rate response to discretionary administration spend.

Two response shapes are supported.  The linear shape grows at a fixed
slope until it hits a hard ceiling; the saturating shape approaches its
ceiling smoothly with an exponential rate constant.  Both map spend per
project ``y`` to an uplift ``delta_psr`` of the project success rate,
and both can be inverted and fitted from samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import (
    DegenerateDataError,
    InsufficientDataError,
    UnreachableTargetError,
    ValidationError,
)
from .model import FundSpec, _finite, _require, y_from_ar


@dataclass(frozen=True)
class LinearResponse:
    """Uplift ``slope * y``, capped at ``max_delta_psr``."""

    slope: float
    max_delta_psr: float

    kind = "linear"

    def __post_init__(self) -> None:
        _finite(self.slope, "slope")
        _finite(self.max_delta_psr, "max_delta_psr")
        _require(self.slope >= 0.0, f"slope must be non-negative, got {self.slope!r}")
        _require(
            0.0 <= self.max_delta_psr <= 1.0,
            f"max_delta_psr must lie in [0, 1], got {self.max_delta_psr!r}",
        )

    def delta_psr(self, y: float) -> float:
        y = _finite(y, "y")
        _require(y >= 0.0, f"y must be non-negative, got {y!r}")
        return min(self.slope * y, self.max_delta_psr)

    def invert(self, delta: float) -> float:
        delta = _finite(delta, "delta")
        _require(delta >= 0.0, f"uplift must be non-negative, got {delta!r}")
        if delta == 0.0:
            return 0.0
        if delta > self.max_delta_psr:
            raise UnreachableTargetError(
                f"uplift {delta!r} exceeds the ceiling {self.max_delta_psr!r}"
            )
        if self.slope == 0.0:
            raise UnreachableTargetError(
                f"uplift {delta!r} is unreachable with zero slope"
            )
        return delta / self.slope


@dataclass(frozen=True)
class SaturatingResponse:
    """Uplift ``ceiling * (1 - exp(-rate * y))``.

    The ceiling is approached but never reached at finite spend, so
    inversion is only defined strictly below it.
    """

    ceiling: float
    rate: float

    kind = "saturating"

    def __post_init__(self) -> None:
        _finite(self.ceiling, "ceiling")
        _finite(self.rate, "rate")
        _require(
            0.0 <= self.ceiling <= 1.0,
            f"ceiling must lie in [0, 1], got {self.ceiling!r}",
        )
        _require(self.rate > 0.0, f"rate must be positive, got {self.rate!r}")

    def delta_psr(self, y: float) -> float:
        y = _finite(y, "y")
        _require(y >= 0.0, f"y must be non-negative, got {y!r}")
        return self.ceiling * (1.0 - math.exp(-self.rate * y))

    def invert(self, delta: float) -> float:
        delta = _finite(delta, "delta")
        _require(delta >= 0.0, f"uplift must be non-negative, got {delta!r}")
        if delta == 0.0:
            return 0.0
        if delta >= self.ceiling:
            raise UnreachableTargetError(
                f"uplift {delta!r} is at or above the ceiling {self.ceiling!r}, "
                "which finite spend cannot reach"
            )
        return -math.log(1.0 - delta / self.ceiling) / self.rate


ResponseModel = Union[LinearResponse, SaturatingResponse]

KINDS = ("linear", "saturating")


def _check_delta(delta: float) -> float:
    delta = _finite(delta, "delta")
    _require(0.0 <= delta <= 1.0, f"uplift must lie in [0, 1], got {delta!r}")
    return delta


def delta_psr(response: ResponseModel, y: float) -> float:
    """Success-rate uplift produced by spend ``y``."""
    return response.delta_psr(y)


def invert_delta(response: ResponseModel, delta: float) -> float:
    """Spend needed for uplift ``delta``; raises when unreachable."""
    return response.invert(delta)


@dataclass(frozen=True)
class CalibrationSample:
    """One observed (spend per project, success-rate uplift) pair."""

    y: float
    delta_psr: float

    def __post_init__(self) -> None:
        _finite(self.y, "y")
        _require(self.y >= 0.0, f"y must be non-negative, got {self.y!r}")
        _check_delta(self.delta_psr)


def samples_from_observations(
    spec: FundSpec, pairs: Sequence[tuple[float, float]]
) -> list[CalibrationSample]:
    """Convert observed (ar, port_sr) pairs into calibration samples.

    Each administration ratio is mapped back to a spend level and each
    portfolio success rate back to an uplift over the intrinsic rate.
    Pairs implying a success rate outside [0, 1] or below the intrinsic
    rate are rejected.
    """
    samples = []
    for ar, port_sr in pairs:
        ar = _finite(ar, "ar")
        port_sr = _finite(port_sr, "port_sr")
        y = y_from_ar(spec, ar)
        psr = port_sr / (1.0 - ar)
        _require(
            0.0 <= psr <= 1.0,
            f"pair (ar={ar!r}, port_sr={port_sr!r}) implies success rate "
            f"{psr!r} outside [0, 1]",
        )
        delta = psr - spec.intrinsic_success_rate
        _require(
            delta >= 0.0,
            f"pair (ar={ar!r}, port_sr={port_sr!r}) implies success rate "
            f"below the intrinsic rate {spec.intrinsic_success_rate!r}",
        )
        samples.append(CalibrationSample(y=y, delta_psr=delta))
    return samples


# Fitting searches the rate constant over this logarithmic grid before
# a golden-section refinement; rates outside the range are not
# recoverable and should be rescaled into it via the money unit.
_RATE_GRID = np.logspace(-6.0, 0.0, 200)
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def fit_response(samples: Sequence[CalibrationSample], kind: str) -> ResponseModel:
    """Least-squares fit of a response model to calibration samples.

    ``linear`` fits the slope through the origin and leaves the ceiling
    at 1, since no finite sample set can pin the cap; the success-rate
    clamp still bounds evaluation.  ``saturating`` scans the rate grid,
    solves the ceiling in closed form at each rate, and refines the best
    rate by golden section.
    """
    if kind not in KINDS:
        raise ValidationError(f"unknown response kind {kind!r}; expected one of {KINDS}")
    if len(samples) == 0:
        raise InsufficientDataError("at least one calibration sample is required")
    ys = np.array([s.y for s in samples], dtype=float)
    deltas = np.array([s.delta_psr for s in samples], dtype=float)

    if kind == "linear":
        denom = float(np.dot(ys, ys))
        if denom == 0.0:
            raise DegenerateDataError("all samples sit at zero spend; slope undefined")
        # Non-negative by construction: every y and every uplift is >= 0.
        slope = float(np.dot(ys, deltas)) / denom
        return LinearResponse(slope=slope, max_delta_psr=1.0)

    if len(samples) < 2:
        raise InsufficientDataError("saturating fit needs at least two samples")
    if np.unique(ys).size < 2:
        raise DegenerateDataError("all samples share one spend level; rate undefined")

    def sse_at(rate: float) -> tuple[float, float]:
        g = 1.0 - np.exp(-rate * ys)
        gg = float(np.dot(g, g))
        ceiling = float(np.dot(g, deltas)) / gg if gg > 0.0 else 0.0
        ceiling = min(max(ceiling, 0.0), 1.0)
        resid = deltas - ceiling * g
        return float(np.dot(resid, resid)), ceiling

    scores = [sse_at(rate)[0] for rate in _RATE_GRID]
    best = int(np.argmin(scores))
    lo = math.log(_RATE_GRID[max(best - 1, 0)])
    hi = math.log(_RATE_GRID[min(best + 1, len(_RATE_GRID) - 1)])

    # Golden section on log(rate) so the refinement matches the grid scale.
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc = sse_at(math.exp(c))[0]
    fd = sse_at(math.exp(d))[0]
    for _ in range(200):
        if hi - lo <= 1e-14:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = sse_at(math.exp(c))[0]
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = sse_at(math.exp(d))[0]
    log_rate = c if fc <= fd else d
    rate = math.exp(log_rate)
    _, ceiling = sse_at(rate)
    return SaturatingResponse(ceiling=ceiling, rate=rate)
