"""Experiment sweeps: coverage/rate curves with analytic and empirical columns.

A sweep evaluates the enabled modes over a grid (reliability thresholds in
dB, or average cell radii in meters) and assembles a CSV-ready table with
a provenance header.  Output is a pure function of the spec: rerunning an
identical spec reproduces the CSV byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import __version__
from .coverage import NoiseLimitedModel
from .montecarlo import coverage_from_samples, rate_from_samples, simulate_samples
from .params import ParameterError, Scenario, db_to_linear
from .scenario_io import scenario_hash

MODE_NAMES = ("analytic", "mc_snr_only", "mc_full_sinr")
_MC_MODE = {"mc_snr_only": "snr_only", "mc_full_sinr": "full_sinr"}

COVERAGE_EPSREL = 1e-8
RATE_EPSREL = 1e-6


@dataclass(frozen=True)
class SweepGrid:
    start: float
    stop: float
    points: int
    spacing: str = "linear"  # or "log"

    def __post_init__(self) -> None:
        if self.points < 2:
            raise ParameterError("a sweep grid needs at least 2 points")
        if self.spacing not in ("linear", "log"):
            raise ParameterError(f"spacing must be linear or log, got {self.spacing!r}")
        if self.spacing == "log" and (self.start <= 0.0 or self.stop <= 0.0):
            raise ParameterError("log spacing requires positive endpoints")

    def values(self) -> list[float]:
        n = self.points
        if self.spacing == "log":
            lo, hi = math.log(self.start), math.log(self.stop)
            return [math.exp(lo + (hi - lo) * i / (n - 1)) for i in range(n)]
        return [self.start + (self.stop - self.start) * i / (n - 1) for i in range(n)]


@dataclass(frozen=True)
class SweepSpec:
    scenario: Scenario
    sweep: str  # "threshold" | "radius"
    grid: SweepGrid
    modes: tuple[str, ...] = ("analytic",)
    n_realizations: int = 100_000
    base_seed: int = 1
    threshold_db: float | None = None  # fixed threshold for radius coverage sweeps
    normalize: bool = False  # rate sweeps: add <mode>_rate_normalized columns
    ratio_scenario: Scenario | None = None  # rate sweeps: add <mode>_rate_ratio

    def __post_init__(self) -> None:
        if self.sweep not in ("threshold", "radius"):
            raise ParameterError(f"sweep must be threshold or radius, got {self.sweep!r}")
        if not self.modes:
            raise ParameterError("enable at least one mode")
        for mode in self.modes:
            if mode not in MODE_NAMES:
                raise ParameterError(f"unknown mode {mode!r}; expected one of {MODE_NAMES}")
        if self.n_realizations < 1:
            raise ParameterError("n_realizations must be positive")


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[list[float | None]]
    header_lines: list[str]
    errors: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = [f"# {line}" for line in self.header_lines]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join("nan" if v is None else repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


def _header(spec: SweepSpec, kind: str) -> list[str]:
    lines = [
        f"mmwcov {__version__} {kind}",
        f"scenario: {spec.scenario.name} sha256={scenario_hash(spec.scenario)}",
        f"avg_cell_radius_m: {spec.scenario.system.avg_cell_radius_m!r}",
        f"sweep: {spec.sweep} start={spec.grid.start!r} stop={spec.grid.stop!r} "
        f"points={spec.grid.points} spacing={spec.grid.spacing}",
        f"modes: {','.join(spec.modes)}",
        f"tolerances: coverage_epsrel={COVERAGE_EPSREL!r} rate_epsrel={RATE_EPSREL!r}",
    ]
    if any(m in _MC_MODE for m in spec.modes):
        lines.append(f"monte_carlo: n={spec.n_realizations} base_seed={spec.base_seed} ci=95%")
    if spec.threshold_db is not None:
        lines.append(f"threshold_db: {spec.threshold_db!r}")
    if spec.ratio_scenario is not None:
        lines.append(
            f"ratio_scenario: {spec.ratio_scenario.name} "
            f"sha256={scenario_hash(spec.ratio_scenario)}"
        )
    return lines


def _mode_columns(modes: tuple[str, ...], metric: str) -> list[str]:
    cols = []
    for mode in modes:
        cols.extend([f"{mode}_{metric}", f"{mode}_err"])
    return cols


def run_coverage_sweep(spec: SweepSpec) -> SweepResult:
    """Coverage versus threshold (or versus cell radius at a fixed threshold)."""
    if spec.sweep == "radius" and spec.threshold_db is None:
        raise ParameterError("radius coverage sweeps need a fixed threshold_db")
    sweep_col = "threshold_db" if spec.sweep == "threshold" else "cell_radius_m"
    result = SweepResult(
        columns=[sweep_col] + _mode_columns(spec.modes, "coverage"),
        rows=[],
        header_lines=_header(spec, "coverage-sweep"),
    )
    grid = spec.grid.values()

    if spec.sweep == "threshold":
        cells = _coverage_cells_fixed_scenario(spec, spec.scenario, grid, result.errors)
        for i, value in enumerate(grid):
            result.rows.append([value] + cells[i])
        return result

    for radius in grid:
        scenario = spec.scenario.with_cell_radius(radius)
        cells = _coverage_cells_fixed_scenario(
            spec, scenario, [spec.threshold_db], result.errors, row_label=f"R_c={radius:g}"
        )
        result.rows.append([radius] + cells[0])
    return result


def _coverage_cells_fixed_scenario(
    spec: SweepSpec,
    scenario: Scenario,
    thresholds_db: list[float],
    errors: list[str],
    row_label: str = "",
) -> list[list[float | None]]:
    """Coverage/err cell pairs for every threshold, one scenario.

    Monte Carlo realizations are shared across thresholds (the estimator
    just re-thresholds the same SINR samples), so a grid costs one
    simulation per mode family.
    """
    cells: list[list[float | None]] = [[] for _ in thresholds_db]

    def record_failure(mode: str, label: str, exc: Exception) -> None:
        errors.append(f"{mode} {label}: {type(exc).__name__}: {exc}")

    for mode in spec.modes:
        if mode == "analytic":
            try:
                model = NoiseLimitedModel(scenario, epsrel=COVERAGE_EPSREL)
            except Exception as exc:  # pragma: no cover - config errors surface earlier
                record_failure(mode, row_label or "model", exc)
                for cell in cells:
                    cell.extend([None, None])
                continue
            for i, t_db in enumerate(thresholds_db):
                try:
                    cov = model.coverage(db_to_linear(t_db))
                    cells[i].extend([cov.total, cov.error_estimate])
                except Exception as exc:
                    record_failure(mode, f"{row_label} T={t_db:g}dB".strip(), exc)
                    cells[i].extend([None, None])
        else:
            try:
                samples = simulate_samples(scenario, spec.n_realizations, spec.base_seed)
            except Exception as exc:
                record_failure(mode, row_label or "simulation", exc)
                for cell in cells:
                    cell.extend([None, None])
                continue
            for i, t_db in enumerate(thresholds_db):
                est = coverage_from_samples(samples, db_to_linear(t_db), _MC_MODE[mode])
                cells[i].extend([est.mean, est.half_width_95])
    return cells


def run_rate_sweep(spec: SweepSpec) -> SweepResult:
    """Average rate versus cell radius, optionally normalized or as a ratio."""
    if spec.sweep != "radius":
        raise ParameterError("rate sweeps run over the cell radius")
    columns = ["cell_radius_m"] + _mode_columns(spec.modes, "rate_bps")
    if spec.normalize:
        columns += [f"{m}_rate_normalized" for m in spec.modes]
    if spec.ratio_scenario is not None:
        columns += [f"{m}_rate_ratio" for m in spec.modes]
    result = SweepResult(columns=columns, rows=[], header_lines=_header(spec, "rate-sweep"))

    bw = spec.scenario.system.bandwidth_hz
    for radius in spec.grid.values():
        row: list[float | None] = [radius]
        rates: dict[str, float | None] = {}
        for mode in spec.modes:
            value, err = _rate_cell(spec, spec.scenario.with_cell_radius(radius), mode, radius, result.errors)
            rates[mode] = value
            row.extend([value, err])
        if spec.normalize:
            row.extend([None if rates[m] is None else rates[m] / bw for m in spec.modes])
        if spec.ratio_scenario is not None:
            ref = spec.ratio_scenario.with_cell_radius(radius)
            for mode in spec.modes:
                ref_value, _ = _rate_cell(spec, ref, mode, radius, result.errors)
                if rates[mode] is None or ref_value in (None, 0.0):
                    row.append(None)
                else:
                    row.append(rates[mode] / ref_value)
        result.rows.append(row)
    return result


def _rate_cell(
    spec: SweepSpec, scenario: Scenario, mode: str, radius: float, errors: list[str]
) -> tuple[float | None, float | None]:
    try:
        if mode == "analytic":
            rate, err = NoiseLimitedModel(scenario, epsrel=COVERAGE_EPSREL).average_rate(
                epsrel=RATE_EPSREL
            )
            return rate, err
        est = rate_from_samples(
            simulate_samples(scenario, spec.n_realizations, spec.base_seed),
            scenario.system.bandwidth_hz,
            _MC_MODE[mode],
        )
        return est.mean, est.half_width_95
    except Exception as exc:
        errors.append(f"{mode} R_c={radius:g} [{scenario.name}]: {type(exc).__name__}: {exc}")
        return None, None
