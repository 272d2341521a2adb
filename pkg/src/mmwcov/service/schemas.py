"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from ..params import ParameterError, Scenario
from ..presets import DEFAULT_CELL_RADIUS_M, load_preset
from ..scenario_io import scenario_from_mapping


class ScenarioSpec(BaseModel):
    """A scenario by preset name or as a raw parameter mapping.

    ``params`` accepts the same flat key set as a scenario file (see the
    README); exactly one of ``preset`` / ``params`` must be given.
    """

    model_config = ConfigDict(extra="forbid")

    preset: Optional[str] = None
    outage_variant: Literal["corrected", "as-printed"] = "corrected"
    cell_radius_m: Optional[float] = Field(default=None, gt=0.0)
    disable_outage: bool = False
    params: Optional[dict[str, Union[float, int, bool, str]]] = None

    def resolve(self) -> Scenario:
        if (self.preset is None) == (self.params is None):
            raise ParameterError("give exactly one of preset / params")
        if self.preset is not None:
            scenario = load_preset(
                self.preset,
                outage_variant=self.outage_variant,
                cell_radius_m=self.cell_radius_m or DEFAULT_CELL_RADIUS_M,
            )
        else:
            if self.cell_radius_m is not None:
                raise ParameterError(
                    "cell_radius_m override applies to presets; set avg_cell_radius_m "
                    "inside params instead"
                )
            scenario = scenario_from_mapping(self.params)
        if self.disable_outage and scenario.outage_enabled:
            scenario = scenario.without_outage()
        return scenario


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: float
    stop: float
    points: int = Field(ge=2)
    spacing: Literal["linear", "log"] = "linear"


class HealthResponse(BaseModel):
    status: str
    version: str


class PresetInfo(BaseModel):
    name: str
    outage_enabled: bool
    bandwidth_hz: float
    default_cell_radius_m: float


class PresetListResponse(BaseModel):
    presets: list[PresetInfo]
    outage_variants: list[str]


class ScenarioResponse(BaseModel):
    name: str
    sha256: str
    params: dict[str, str]


class CoverageRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioSpec
    thresholds_db: list[float] = Field(min_length=1)


class CoverageValue(BaseModel):
    threshold_db: float
    coverage: float
    los_term: float
    nlos_term: float
    error_estimate: float


class CoverageResponse(BaseModel):
    scenario: ScenarioResponse
    values: list[CoverageValue]


class RateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioSpec


class RateResponse(BaseModel):
    scenario: ScenarioResponse
    rate_bps: float
    error_estimate: float
    rate_normalized: float  # rate / bandwidth


class CoverageSweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioSpec
    sweep: Literal["threshold", "radius"] = "threshold"
    grid: GridSpec
    modes: list[Literal["analytic", "mc_snr_only", "mc_full_sinr"]] = ["analytic"]
    n_realizations: int = Field(default=100_000, ge=1)
    base_seed: int = 1
    threshold_db: Optional[float] = None


class RateSweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioSpec
    grid: GridSpec  # cell radii in meters
    modes: list[Literal["analytic", "mc_snr_only", "mc_full_sinr"]] = ["analytic"]
    n_realizations: int = Field(default=100_000, ge=1)
    base_seed: int = 1
    normalize: bool = False
    ratio_scenario: Optional[ScenarioSpec] = None


class SweepResponse(BaseModel):
    columns: list[str]
    rows: list[list[Optional[float]]]
    header_lines: list[str]
    errors: list[str]
    csv: str


class ValidateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioSpec


class CheckResultModel(BaseModel):
    name: str
    passed: bool
    worst: float
    threshold: float
    detail: str


class ValidateResponse(BaseModel):
    scenario: ScenarioResponse
    passed: bool
    checks: list[CheckResultModel]
    lines: list[str]
