"""Administration-cost modelling for research funding agencies.

The package answers one family of questions: given a programme budget,
a per-project funding level and a response of project success to
administrative effort, how much administration is worth paying for?
It evaluates operating points, finds the optimum administration ratio
under linear and saturating response curves, inverts success-rate
targets into required spend, calibrates response curves from samples,
and indexes an agency's annual records for case-study comparisons.
"""

from .analytics import (
    AnnualRecord,
    CaseStudyRow,
    OutputWeights,
    case_study_report,
    composite_output,
    deflate_series,
    incremental_admin_cost,
    roi,
)
from .config import RunConfig, load_config, merge_flags, parse_config
from .dataio import (
    atomic_write_text,
    format_number,
    read_annual_csv,
    read_samples_csv,
    write_case_study_csv,
    write_key_values,
    write_sweep_csv,
)
from .errors import (
    ConfigError,
    ConfigKeyError,
    ConfigSyntaxError,
    ConfigValueError,
    CsvFormatError,
    DegenerateDataError,
    FundAdminError,
    InfeasibleError,
    InsufficientDataError,
    MissingEntryError,
    UnreachableTargetError,
    ValidationError,
)
from .model import (
    ZAR_TO_USD,
    CostSchedule,
    DomainMatrix,
    FundSpec,
    PortfolioPoint,
    admin_cost_from_y,
    ar_from_y,
    default_cost_schedule,
    default_domain_matrix,
    evaluate_point,
    project_count,
    psr_lookup,
    y_from_ar,
)
from .optimize import (
    HIGH_AR_THRESHOLD,
    OptimumResult,
    RiskPreference,
    efficiency_estimate,
    optimize_ar,
    required_ar_for_min_psr,
    sweep,
)
from .response import (
    CalibrationSample,
    LinearResponse,
    SaturatingResponse,
    delta_psr,
    fit_response,
    invert_delta,
    samples_from_observations,
)

__version__ = "0.1.0"

__all__ = [
    "AnnualRecord",
    "CalibrationSample",
    "CaseStudyRow",
    "ConfigError",
    "ConfigKeyError",
    "ConfigSyntaxError",
    "ConfigValueError",
    "CostSchedule",
    "CsvFormatError",
    "DegenerateDataError",
    "DomainMatrix",
    "FundAdminError",
    "FundSpec",
    "HIGH_AR_THRESHOLD",
    "InfeasibleError",
    "InsufficientDataError",
    "LinearResponse",
    "MissingEntryError",
    "OptimumResult",
    "OutputWeights",
    "PortfolioPoint",
    "RiskPreference",
    "RunConfig",
    "SaturatingResponse",
    "UnreachableTargetError",
    "ValidationError",
    "ZAR_TO_USD",
    "admin_cost_from_y",
    "ar_from_y",
    "atomic_write_text",
    "case_study_report",
    "composite_output",
    "default_cost_schedule",
    "default_domain_matrix",
    "deflate_series",
    "delta_psr",
    "efficiency_estimate",
    "evaluate_point",
    "fit_response",
    "format_number",
    "incremental_admin_cost",
    "invert_delta",
    "load_config",
    "merge_flags",
    "optimize_ar",
    "parse_config",
    "project_count",
    "psr_lookup",
    "read_annual_csv",
    "read_samples_csv",
    "required_ar_for_min_psr",
    "roi",
    "samples_from_observations",
    "sweep",
    "write_case_study_csv",
    "write_key_values",
    "write_sweep_csv",
    "y_from_ar",
]
