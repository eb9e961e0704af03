"""Exception types shared across the package.

The hierarchy splits cleanly along the exit-code contract of the CLI:
validation and domain errors (bad inputs, infeasible or unreachable
targets, degenerate data) map to exit code 1, while syntax and format
errors raised during config or CSV parsing map to exit code 2.
"""

from __future__ import annotations


class FundAdminError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(FundAdminError, ValueError):
    """An input value violates a documented precondition."""


class InfeasibleError(ValidationError):
    """A requested operating point cannot exist under the model."""


class UnreachableTargetError(FundAdminError):
    """A target lies beyond what the response function can deliver."""


class MissingEntryError(FundAdminError, KeyError):
    """A lookup key is absent from a rate table or task schedule."""

    def __str__(self) -> str:  # KeyError repr-quotes its payload
        return self.args[0] if self.args else ""


class InsufficientDataError(FundAdminError):
    """Too few samples or records for the requested estimate."""


class DegenerateDataError(FundAdminError):
    """Samples carry no usable variation (e.g. all at the same x)."""


class ConfigError(FundAdminError):
    """Base class for config-file problems."""


class ConfigSyntaxError(ConfigError):
    """A config line does not parse; message carries the line number."""


class ConfigKeyError(ConfigError, ValueError):
    """An unknown or duplicated config key."""


class ConfigValueError(ConfigError, ValueError):
    """A config value has the wrong type or violates a constraint."""


class CsvFormatError(FundAdminError):
    """A CSV file has a bad header, ragged row, or non-numeric cell."""
