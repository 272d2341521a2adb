"""FastAPI application exposing the coverage/rate computations.

Every response that contains numbers derived from a scenario echoes the
scenario's canonical parameter hash, so results stay traceable to the
exact configuration that produced them.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..coverage import NoiseLimitedModel
from ..numerics import QuadratureError
from ..params import ParameterError, Scenario, db_to_linear
from ..presets import DEFAULT_CELL_RADIUS_M, OUTAGE_VARIANTS, PRESET_NAMES, load_preset
from ..scenario_io import canonical_mapping, scenario_hash
from ..sweeps import SweepGrid, SweepSpec, run_coverage_sweep, run_rate_sweep
from ..validation import validate_scenario
from . import schemas


def _scenario_response(scenario: Scenario) -> schemas.ScenarioResponse:
    return schemas.ScenarioResponse(
        name=scenario.name,
        sha256=scenario_hash(scenario),
        params=canonical_mapping(scenario),
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="mmwcov",
        version=__version__,
        description=(
            "Coverage probability and average rate of mmWave cellular networks: "
            "closed-form evaluation cross-validated by Monte Carlo simulation."
        ),
    )

    @app.exception_handler(ParameterError)
    async def _parameter_error(request: Request, exc: ParameterError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(QuadratureError)
    async def _quadrature_error(request: Request, exc: QuadratureError) -> JSONResponse:
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.get("/presets", response_model=schemas.PresetListResponse)
    def presets() -> schemas.PresetListResponse:
        infos = []
        for name in PRESET_NAMES:
            scenario = load_preset(name)
            infos.append(
                schemas.PresetInfo(
                    name=name,
                    outage_enabled=scenario.outage_enabled,
                    bandwidth_hz=scenario.system.bandwidth_hz,
                    default_cell_radius_m=DEFAULT_CELL_RADIUS_M,
                )
            )
        return schemas.PresetListResponse(presets=infos, outage_variants=list(OUTAGE_VARIANTS))

    @app.post("/scenario/resolve", response_model=schemas.ScenarioResponse)
    def resolve(spec: schemas.ScenarioSpec) -> schemas.ScenarioResponse:
        return _scenario_response(spec.resolve())

    @app.post("/coverage", response_model=schemas.CoverageResponse)
    def coverage(request: schemas.CoverageRequest) -> schemas.CoverageResponse:
        scenario = request.scenario.resolve()
        model = NoiseLimitedModel(scenario)
        values = []
        for t_db in request.thresholds_db:
            result = model.coverage(db_to_linear(t_db))
            values.append(
                schemas.CoverageValue(
                    threshold_db=t_db,
                    coverage=result.total,
                    los_term=result.los_term,
                    nlos_term=result.nlos_term,
                    error_estimate=result.error_estimate,
                )
            )
        return schemas.CoverageResponse(scenario=_scenario_response(scenario), values=values)

    @app.post("/rate", response_model=schemas.RateResponse)
    def rate(request: schemas.RateRequest) -> schemas.RateResponse:
        scenario = request.scenario.resolve()
        value, err = NoiseLimitedModel(scenario).average_rate()
        return schemas.RateResponse(
            scenario=_scenario_response(scenario),
            rate_bps=value,
            error_estimate=err,
            rate_normalized=value / scenario.system.bandwidth_hz,
        )

    @app.post("/sweep/coverage", response_model=schemas.SweepResponse)
    def sweep_coverage(request: schemas.CoverageSweepRequest) -> schemas.SweepResponse:
        spec = SweepSpec(
            scenario=request.scenario.resolve(),
            sweep=request.sweep,
            grid=SweepGrid(
                start=request.grid.start,
                stop=request.grid.stop,
                points=request.grid.points,
                spacing=request.grid.spacing,
            ),
            modes=tuple(request.modes),
            n_realizations=request.n_realizations,
            base_seed=request.base_seed,
            threshold_db=request.threshold_db,
        )
        result = run_coverage_sweep(spec)
        return schemas.SweepResponse(
            columns=result.columns,
            rows=result.rows,
            header_lines=result.header_lines,
            errors=result.errors,
            csv=result.to_csv(),
        )

    @app.post("/sweep/rate", response_model=schemas.SweepResponse)
    def sweep_rate(request: schemas.RateSweepRequest) -> schemas.SweepResponse:
        spec = SweepSpec(
            scenario=request.scenario.resolve(),
            sweep="radius",
            grid=SweepGrid(
                start=request.grid.start,
                stop=request.grid.stop,
                points=request.grid.points,
                spacing=request.grid.spacing,
            ),
            modes=tuple(request.modes),
            n_realizations=request.n_realizations,
            base_seed=request.base_seed,
            normalize=request.normalize,
            ratio_scenario=(
                request.ratio_scenario.resolve() if request.ratio_scenario is not None else None
            ),
        )
        result = run_rate_sweep(spec)
        return schemas.SweepResponse(
            columns=result.columns,
            rows=result.rows,
            header_lines=result.header_lines,
            errors=result.errors,
            csv=result.to_csv(),
        )

    @app.post("/validate", response_model=schemas.ValidateResponse)
    def validate(request: schemas.ValidateRequest) -> schemas.ValidateResponse:
        scenario = request.scenario.resolve()
        report = validate_scenario(scenario)
        return schemas.ValidateResponse(
            scenario=_scenario_response(scenario),
            passed=report.passed,
            checks=[
                schemas.CheckResultModel(
                    name=c.name,
                    passed=c.passed,
                    worst=c.worst,
                    threshold=c.threshold,
                    detail=c.detail,
                )
                for c in report.checks
            ],
            lines=report.lines(),
        )

    return app


app = create_app()
