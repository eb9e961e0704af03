"""Flat ``key = value`` run configuration.

One assignment per line, ``#`` starts a comment, blank lines are
ignored.  Keys are case-sensitive and must be known; repeating a key is
an error rather than a silent override.  Values are validated on parse,
cross-key constraints included, so a returned config is internally
consistent even though most fields are optional (each command checks
for the fields it needs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import ConfigKeyError, ConfigSyntaxError, ConfigValueError
from .model import ZAR_TO_USD, FundSpec, default_domain_matrix, psr_lookup
from .response import KINDS, LinearResponse, ResponseModel, SaturatingResponse


@dataclass
class RunConfig:
    """Raw, validated configuration values.

    Money-bearing numbers are stored as written in the file; the
    ``zar_to_usd`` toggle is applied when model objects are built.
    """

    v_p: float | None = None
    v_i: float | None = None
    b: float | None = None
    psr_in: float | None = None
    domain: str | None = None
    rdi: str | None = None
    response_kind: str | None = None
    response_c: float | None = None
    response_k: float | None = None
    response_max_delta_psr: float | None = None
    psr_min: float | None = None
    y: float | None = None
    sweep_start: float | None = None
    sweep_stop: float | None = None
    sweep_step: float | None = None
    samples: str | None = None
    data: str | None = None
    base_year: int | None = None
    out: str | None = None
    precision: int | None = None
    money_unit: str | None = None
    zar_to_usd: bool = False

    def require(self, *names: str) -> None:
        missing = [
            _KEY_OF[name] for name in names if getattr(self, name) is None
        ]
        if missing:
            raise ConfigValueError(
                "missing required config key(s): " + ", ".join(sorted(missing))
            )

    def unit_label(self) -> str:
        if self.zar_to_usd:
            return "kUSD"
        return self.money_unit if self.money_unit is not None else "kZAR"

    def fund_spec(self) -> FundSpec:
        self.require("v_p", "v_i", "b")
        if self.psr_in is not None:
            psr = self.psr_in
        elif self.domain is not None and self.rdi is not None:
            psr = psr_lookup(default_domain_matrix(), self.domain, self.rdi)
        else:
            raise ConfigValueError(
                "either psr_in or the pair domain/rdi must be configured"
            )
        scale = ZAR_TO_USD if self.zar_to_usd else 1.0
        return FundSpec(
            programme_value=self.v_p * scale,
            project_funding=self.v_i * scale,
            base_fraction=self.b,
            intrinsic_success_rate=psr,
        )

    def response_model(self) -> ResponseModel:
        self.require("response_kind")
        # Per-money-unit parameters change with the unit: halving the
        # unit value doubles the spend numbers, so slopes and rates shrink.
        scale = ZAR_TO_USD if self.zar_to_usd else 1.0
        if self.response_kind == "linear":
            self.require("response_c", "response_max_delta_psr")
            return LinearResponse(
                slope=self.response_c / scale,
                max_delta_psr=self.response_max_delta_psr,
            )
        self.require("response_c", "response_k")
        return SaturatingResponse(
            ceiling=self.response_c, rate=self.response_k / scale
        )


def _parse_float(raw: str, key: str, line: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigValueError(
            f"line {line}: value for {key} is not a number: {raw!r}"
        ) from None
    if not math.isfinite(value):
        raise ConfigValueError(f"line {line}: value for {key} must be finite")
    return value


def _parse_int(raw: str, key: str, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigValueError(
            f"line {line}: value for {key} is not an integer: {raw!r}"
        ) from None


def _parse_bool(raw: str, key: str, line: int) -> bool:
    lowered = raw.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise ConfigValueError(
        f"line {line}: value for {key} must be true or false, got {raw!r}"
    )


def _parse_str(raw: str, key: str, line: int) -> str:
    if not raw:
        raise ConfigValueError(f"line {line}: value for {key} is empty")
    return raw


def _parse_kind(raw: str, key: str, line: int) -> str:
    if raw not in KINDS:
        raise ConfigValueError(
            f"line {line}: value for {key} must be one of {KINDS}, got {raw!r}"
        )
    return raw


# config key -> (RunConfig attribute, value parser)
_SCHEMA = {
    "v_p": ("v_p", _parse_float),
    "v_i": ("v_i", _parse_float),
    "b": ("b", _parse_float),
    "psr_in": ("psr_in", _parse_float),
    "domain": ("domain", _parse_str),
    "rdi": ("rdi", _parse_str),
    "response.kind": ("response_kind", _parse_kind),
    "response.c": ("response_c", _parse_float),
    "response.k": ("response_k", _parse_float),
    "response.max_delta_psr": ("response_max_delta_psr", _parse_float),
    "psr_min": ("psr_min", _parse_float),
    "y": ("y", _parse_float),
    "sweep.start": ("sweep_start", _parse_float),
    "sweep.stop": ("sweep_stop", _parse_float),
    "sweep.step": ("sweep_step", _parse_float),
    "samples": ("samples", _parse_str),
    "data": ("data", _parse_str),
    "base_year": ("base_year", _parse_int),
    "out": ("out", _parse_str),
    "precision": ("precision", _parse_int),
    "money_unit": ("money_unit", _parse_str),
    "zar_to_usd": ("zar_to_usd", _parse_bool),
}

_KEY_OF = {attr: key for key, (attr, _) in _SCHEMA.items()}

# attribute -> (predicate, requirement stated in the error)
_RANGES = {
    "v_p": (lambda v: v > 0.0, "must be positive"),
    "v_i": (lambda v: v > 0.0, "must be positive"),
    "b": (lambda v: 0.0 <= v < 1.0, "must lie in [0, 1)"),
    "psr_in": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "response_c": (lambda v: v >= 0.0, "must be non-negative"),
    "response_k": (lambda v: v > 0.0, "must be positive"),
    "response_max_delta_psr": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "psr_min": (lambda v: 0.0 <= v <= 1.0, "must lie in [0, 1]"),
    "y": (lambda v: v >= 0.0, "must be non-negative"),
    "sweep_step": (lambda v: v > 0.0, "must be positive"),
    "precision": (lambda v: 1 <= v <= 17, "must lie in [1, 17]"),
}


def parse_config(text: str) -> RunConfig:
    """Parse config text into a :class:`RunConfig`."""
    config = RunConfig()
    seen: set[str] = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigSyntaxError(
                f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}"
            )
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if not key:
            raise ConfigSyntaxError(f"line {lineno}: assignment without a key")
        if key not in _SCHEMA:
            raise ConfigKeyError(f"line {lineno}: unknown config key {key!r}")
        if key in seen:
            raise ConfigKeyError(f"line {lineno}: duplicate config key {key!r}")
        seen.add(key)
        attr, parser = _SCHEMA[key]
        value = parser(raw_value, key, lineno)
        check = _RANGES.get(attr)
        if check is not None and not check[0](value):
            raise ConfigValueError(
                f"line {lineno}: value for {key} {check[1]}, got {raw_value!r}"
            )
        setattr(config, attr, value)

    _check_cross_constraints(config)
    return config


def _check_cross_constraints(config: RunConfig) -> None:
    if config.psr_in is not None and (config.domain is not None or config.rdi is not None):
        raise ConfigValueError("psr_in and domain/rdi are mutually exclusive")
    if (config.domain is None) != (config.rdi is None):
        raise ConfigValueError("domain and rdi must be configured together")
    if config.response_k is not None and config.response_kind != "saturating":
        raise ConfigValueError("response.k applies only when response.kind = saturating")
    if (
        config.response_max_delta_psr is not None
        and config.response_kind != "linear"
    ):
        raise ConfigValueError(
            "response.max_delta_psr applies only when response.kind = linear"
        )
    if (
        config.sweep_start is not None
        and config.sweep_stop is not None
        and config.sweep_start > config.sweep_stop
    ):
        raise ConfigValueError("sweep.start must not exceed sweep.stop")
    if config.money_unit is not None and config.zar_to_usd:
        raise ConfigValueError("money_unit conflicts with zar_to_usd; pick one")


def load_config(path: str) -> RunConfig:
    """Read and parse a config file."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read())


def merge_flags(config: RunConfig, **overrides: object) -> RunConfig:
    """Apply command-line overrides; flags beat config keys."""
    known = {f.name for f in fields(RunConfig)}
    for attr, value in overrides.items():
        if value is None:
            continue
        if attr not in known:
            raise ConfigKeyError(f"unknown override {attr!r}")
        check = _RANGES.get(attr)
        if check is not None and not check[0](value):
            raise ConfigValueError(f"value for {_KEY_OF[attr]} {check[1]}, got {value!r}")
        setattr(config, attr, value)
    _check_cross_constraints(config)
    return config
