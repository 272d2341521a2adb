"""Fast self-check suite for a scenario.

Runs the internal consistency checks that certify the closed forms for a
given parameter set: state probabilities form an exact partition, the
closed-form intensity matches the quadrature oracle, the analytic
derivative matches finite differences, the closed form is continuous at
its branch point, and the serving-link density integrates to the
reachable-network probability.  Each check reports its worst observed
deviation against the threshold it must stay under.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .intensity import IntensityMeasure, geometric_ladder, oracle_intensity_quadrature
from .numerics import checked_quad
from .params import Scenario
from .propagation import LinkState, interferer_gain_distribution, link_state_probs

_STATES = (LinkState.LOS, LinkState.NLOS)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    scenario_name: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [f"validation of scenario {self.scenario_name!r}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"  [{status}] {c.name}: worst {c.worst:.3e} (limit {c.threshold:.1e})"
            if c.detail:
                line += f" - {c.detail}"
            out.append(line)
        return out


def _grid(n: int = 12) -> np.ndarray:
    return np.logspace(2.0, 16.0, n)


def _check_state_probs(scenario: Scenario) -> CheckResult:
    rng = np.random.default_rng(20240229)
    radii = np.concatenate([np.linspace(0.0, 400.0, 41), rng.uniform(0.0, 2000.0, 1000)])
    worst = 0.0
    in_range = True
    for r in radii:
        probs = link_state_probs(float(r), scenario.blockage)
        triple = (probs.p_los, probs.p_nlos, probs.p_out)
        worst = max(worst, abs(probs.p_los + probs.p_nlos + probs.p_out - 1.0))
        in_range = in_range and all(0.0 <= p <= 1.0 for p in triple)
    return CheckResult(
        name="state probabilities partition unity",
        passed=bool(worst == 0.0 and in_range),
        worst=float(worst),
        threshold=0.0,
        detail="" if in_range else "a probability left [0, 1]",
    )


def _check_oracle(scenario: Scenario, im: IntensityMeasure) -> CheckResult:
    worst = 0.0
    for state in _STATES:
        for x in _grid():
            closed = im.lambda_component(float(x), state)
            oracle = oracle_intensity_quadrature(scenario, float(x), state)
            worst = max(worst, abs(closed - oracle) / max(abs(oracle), 1e-300))
    return CheckResult(
        name="closed form vs quadrature oracle",
        passed=bool(worst < 1e-8),
        worst=float(worst),
        threshold=1e-8,
    )


def derivative_check_points(
    im: IntensityMeasure, state: LinkState, candidates
) -> list[float]:
    """Grid points where a finite-difference comparison is meaningful.

    Skips the neighborhood of the branch point (the derivative is only
    piecewise smooth there) and regions where the local mass x * dL sits
    below ~1e-4 of the cumulative L: a central difference with relative
    step 1e-6 resolves the derivative to about 5e-11 * L / (x * dL), so
    beyond that ratio the comparison measures roundoff, not the formula.
    """
    points = []
    for x in candidates:
        x = float(x)
        if any(abs(x - z) < 0.2 * z for z in im.breakpoints()):
            continue
        density = im.lambda_deriv(x, state)
        if density * x < 1e-4 * max(im.lambda_total(x), 1e-12):
            continue
        points.append(x)
    return points


def _check_derivative(scenario: Scenario, im: IntensityMeasure) -> CheckResult:
    worst = 0.0
    checked = 0
    for state in _STATES:
        for x in derivative_check_points(im, state, np.logspace(2.5, 15.0, 12)):
            h = 1e-6 * x
            fd = (im.lambda_component(x + h, state) - im.lambda_component(x - h, state)) / (
                2.0 * h
            )
            analytic = im.lambda_deriv(x, state)
            worst = max(worst, abs(fd - analytic) / max(abs(analytic), 1e-300))
            checked += 1
    return CheckResult(
        name="derivative vs central finite differences",
        passed=worst < 1e-5 and checked >= 4,
        worst=float(worst),
        threshold=1e-5,
        detail=f"{checked} points",
    )


def _check_continuity(im: IntensityMeasure) -> CheckResult:
    worst = 0.0
    for z in im.breakpoints():
        for fn in (im.upsilon0, im.upsilon1):
            for state in _STATES:
                lo = fn(z * (1.0 - 1e-12), state)
                hi = fn(z * (1.0 + 1e-12), state)
                worst = max(worst, abs(hi - lo) / max(1.0, abs(hi)))
    return CheckResult(
        name="continuity across the branch point",
        passed=bool(worst < 1e-10),
        worst=float(worst),
        threshold=1e-10,
    )


def _check_normalization(im: IntensityMeasure) -> CheckResult:
    x_max = im.serving_tail_cut(1e-13)
    points = sorted(
        p
        for p in set(geometric_ladder(x_max)) | set(im.breakpoints())
        if 0.0 < p < x_max
    )

    def integrand(x: float) -> float:
        if x <= 0.0:
            return 0.0
        return im.lambda_total_deriv(x) * math.exp(-im.lambda_total(x))

    value, _ = checked_quad(integrand, 0.0, x_max, epsrel=1e-9, points=points or None)
    lam_inf = im.lambda_limit()
    target = -math.expm1(-lam_inf) if math.isfinite(lam_inf) else 1.0
    worst = abs(value - target)
    return CheckResult(
        name="serving density integrates to reachable probability",
        passed=bool(worst < 1e-6),
        worst=float(worst),
        threshold=1e-6,
    )


def _check_gains(scenario: Scenario) -> CheckResult:
    dist = interferer_gain_distribution(scenario.bs_antenna, scenario.mt_antenna)
    worst = abs(math.fsum(dist.probs) - 1.0)
    mean_sides = 1.0
    for ant in (scenario.bs_antenna, scenario.mt_antenna):
        p = ant.main_lobe_prob
        mean_sides *= p * ant.g_max + (1.0 - p) * ant.g_min
    worst = max(worst, abs(dist.mean() - mean_sides) / mean_sides)
    return CheckResult(
        name="interferer gain atoms (normalization and mean)",
        passed=bool(worst < 1e-12),
        worst=float(worst),
        threshold=1e-12,
    )


def _check_cdf(im: IntensityMeasure) -> CheckResult:
    cdf = np.array([im.cdf_min_path_loss(float(x)) for x in _grid(40)])
    monotone = bool(np.all(np.diff(cdf) >= 0.0))
    bounded = bool(np.all((cdf >= 0.0) & (cdf <= 1.0))) and im.cdf_min_path_loss(0.0) == 0.0
    worst = float(max(0.0, np.max(-np.diff(cdf)), np.max(cdf) - 1.0))
    return CheckResult(
        name="serving-link CDF monotone in [0, 1]",
        passed=bool(monotone and bounded),
        worst=float(worst),
        threshold=0.0,
    )


def validate_scenario(scenario: Scenario) -> ValidationReport:
    """Run the invariant suite; any failed check marks the report failed."""
    im = IntensityMeasure(scenario)
    checks = [
        _check_state_probs(scenario),
        _check_oracle(scenario, im),
        _check_derivative(scenario, im),
        _check_normalization(im),
        _check_gains(scenario),
        _check_cdf(im),
    ]
    if scenario.outage_enabled:
        checks.insert(3, _check_continuity(im))
    return ValidationReport(scenario_name=scenario.name, checks=tuple(checks))
