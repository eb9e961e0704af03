import pytest

from fundadmin import FundSpec, LinearResponse, SaturatingResponse


@pytest.fixture
def ref_spec() -> FundSpec:
    return FundSpec(
        programme_value=50_000.0,
        project_funding=5_000.0,
        base_fraction=0.05,
        intrinsic_success_rate=0.54,
    )


@pytest.fixture
def sat_ref() -> SaturatingResponse:
    return SaturatingResponse(ceiling=0.3, rate=0.002)


@pytest.fixture
def lin_ref() -> LinearResponse:
    return LinearResponse(slope=2e-4, max_delta_psr=0.3)
