"""Noise-limited coverage probability and average rate (closed-form path).

Coverage of a threshold T is the probability that the serving link's
shadowed SNR exceeds T.  Conditioning on the serving path-loss x gives

    P_s(T) = 1/2 int_0^inf erfc((ln(T x / g0) - mu_s) / (sqrt(2) sigma_s))
             * dL_s(x) * exp(-L([0, x)))

per link state s, where g0 = P * G0 / noise is the aligned-link SNR scale
and dL_s is the per-state serving density from :mod:`mmwcov.intensity`.
The average rate integrates coverage over thresholds.

Numerical strategy: integrate in v = x^(1/beta_s) (a scaled radius), where
the serving density is an analytic, exponentially decaying profile with a
single branch point; split panels at every branch point and at the erfc
transition; truncate where the residual serving-link mass is certified
below ``tail_eps`` and carry that bound in the reported error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .intensity import IntensityMeasure, geometric_ladder
from .numerics import QuadratureError, checked_quad
from .params import ParameterError, Scenario
from .propagation import LinkState, intended_link_gain, shadowing_natural_params

_LN2 = math.log(2.0)
# erfc underflows around 27; beyond this the integrand is exactly zero.
_ERFC_CLAMP = 38.0


@dataclass(frozen=True)
class CoverageResult:
    """Coverage probability split by serving-link state."""

    threshold: float  # linear SNR threshold
    los_term: float
    nlos_term: float
    error_estimate: float  # absolute, quadrature plus truncation

    @property
    def total(self) -> float:
        return self.los_term + self.nlos_term


class NoiseLimitedModel:
    """Closed-form coverage/rate evaluator for one scenario.

    Pure and immutable after construction; evaluations at different
    thresholds are independent and safe to run concurrently.
    """

    def __init__(self, scenario: Scenario, *, epsrel: float = 1e-8, tail_eps: float = 1e-13):
        self.scenario = scenario
        self.intensity = IntensityMeasure(scenario)
        self.epsrel = epsrel
        self.tail_eps = tail_eps
        system = scenario.system
        self.gamma0 = (
            system.tx_power_mw
            * intended_link_gain(scenario.bs_antenna, scenario.mt_antenna)
            / system.noise_power_mw
        )
        self._x_max = self.intensity.serving_tail_cut(tail_eps)

    # -- coverage ------------------------------------------------------------

    def _term_points(self, state: LinkState, v_max: float, ln_ratio: float) -> list[float]:
        """Panel boundaries in v-space: branch points, the erfc knee, and a
        short geometric ladder so mass far below v_max cannot be skipped."""
        beta = self._beta(state)
        pts = {z ** (1.0 / beta) for z in self.intensity.breakpoints()}
        pts.update(geometric_ladder(v_max, levels=12))
        mu, _ = shadowing_natural_params(self.scenario.shadowing, state)
        knee_ln = (mu - ln_ratio) / beta
        if knee_ln < math.log(v_max):
            pts.add(math.exp(knee_ln))
        return sorted(p for p in pts if 0.0 < p < v_max)

    def _beta(self, state: LinkState) -> float:
        pl = self.scenario.pathloss
        return pl.beta_los if state is LinkState.LOS else pl.beta_nlos

    def coverage_term(self, state: LinkState, threshold: float) -> tuple[float, float]:
        """One state's coverage contribution and its absolute error estimate."""
        if threshold <= 0.0:
            raise ParameterError(f"threshold must be positive, got {threshold!r}")
        if state is LinkState.OUT:
            raise ParameterError("coverage terms exist for LOS and NLOS only")
        im = self.intensity
        beta = self._beta(state)
        mu, sigma = shadowing_natural_params(self.scenario.shadowing, state)
        ln_ratio = math.log(threshold) - math.log(self.gamma0)
        inv_width = 1.0 / (math.sqrt(2.0) * sigma)

        def integrand(v: float) -> float:
            x = v**beta
            if x <= 0.0:
                return 0.0
            density = im.lambda_deriv(x, state) * beta * v ** (beta - 1.0)
            if density == 0.0:
                return 0.0
            arg = (ln_ratio + beta * math.log(v) - mu) * inv_width
            if arg >= _ERFC_CLAMP:
                return 0.0
            return 0.5 * math.erfc(arg) * density * math.exp(-im.lambda_total(x))

        v_max = self._x_max ** (1.0 / beta)
        points = self._term_points(state, v_max, ln_ratio)
        value, abserr = checked_quad(
            integrand, 0.0, v_max, epsrel=self.epsrel, points=points or None
        )
        return value, abserr + self.tail_eps

    def coverage(self, threshold: float) -> CoverageResult:
        los, err_los = self.coverage_term(LinkState.LOS, threshold)
        nlos, err_nlos = self.coverage_term(LinkState.NLOS, threshold)
        return CoverageResult(
            threshold=threshold,
            los_term=los,
            nlos_term=nlos,
            error_estimate=err_los + err_nlos,
        )

    def coverage_curve(self, thresholds: Iterable[float]) -> list[CoverageResult]:
        return [self.coverage(t) for t in thresholds]

    # -- rate ------------------------------------------------------------------

    def _coverage_tail_bound(self, t: float) -> float:
        """Certified bound on int_t^inf coverage(s)/(1+s) ds.

        Uses the global power-law envelope of the serving densities: the
        per-state density is at most D_s x^(2/beta_s - 1), which after the
        Log-Normal smearing gives coverage(s) <= C_s s^(-2/beta_s).
        """
        im = self.intensity
        c = im.constants
        total = 0.0
        for state in (LinkState.LOS, LinkState.NLOS):
            s = c.los if state is LinkState.LOS else c.nlos
            if state is LinkState.LOS:
                d_env = c.k1 * s.q**2 / s.beta
                if im.outage_enabled:
                    d_env = max(d_env, c.k2 * s.v**2 / s.beta)
            else:
                d_env = 2.0 * math.pi * im.lam / (s.kappa**2 * s.beta)
            if d_env == 0.0:
                continue
            mu, sigma = shadowing_natural_params(self.scenario.shadowing, state)
            p = 2.0 / s.beta
            log_c = (
                math.log(d_env / p**2)
                + p * (math.log(self.gamma0) + mu)
                + p**2 * sigma**2 / 2.0
            )
            total += math.exp(log_c - p * math.log(t))
        return total

    def _threshold_floor_cap(self, floor: float) -> float:
        t = 1.0
        for _ in range(60):
            if self.coverage(t).total < floor:
                return t
            t *= 10.0
        return t

    def average_rate(
        self, *, epsrel: float = 1e-6, coverage_floor: float = 1e-10
    ) -> tuple[float, float]:
        """Mean Shannon rate in bit/s and its absolute error estimate.

        Integrates BW/ln2 * coverage(t)/(1+t) over thresholds with the
        substitution u = t/(1+t); the threshold axis is capped once
        coverage falls below ``coverage_floor`` and the cap is pushed out
        until the certified power-law tail bound is negligible.
        """
        bw = self.scenario.system.bandwidth_hz
        t_cap = self._threshold_floor_cap(coverage_floor)
        knees = self._rate_knees(t_cap)
        integral, abserr = _integrate_coverage_over_u(
            lambda t: self.coverage(t).total, 0.0, t_cap, knees, epsrel
        )
        tail = self._coverage_tail_bound(t_cap)
        for _ in range(40):
            if tail <= 0.5 * max(epsrel * integral, 1e-300):
                break
            new_cap = t_cap * 100.0
            extra, extra_err = _integrate_coverage_over_u(
                lambda t: self.coverage(t).total, t_cap, new_cap, [], epsrel
            )
            integral += extra
            abserr += extra_err
            t_cap = new_cap
            tail = self._coverage_tail_bound(t_cap)
        # inner coverage evaluations carry their own relative tolerance
        abserr += integral * self.epsrel + tail
        return bw / _LN2 * integral, bw / _LN2 * abserr

    def _rate_knees(self, t_cap: float) -> list[float]:
        """Threshold scales where coverage transitions, for panel splits."""
        im = self.intensity
        lam_inf = im.lambda_limit()
        target = min(_LN2, lam_inf / 2.0) if math.isfinite(lam_inf) else _LN2
        lo, hi = 1e-30, self._x_max
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            if im.lambda_total(mid) < target:
                lo = mid
            else:
                hi = mid
        x_scale = math.sqrt(lo * hi)
        mu, _ = shadowing_natural_params(self.scenario.shadowing, LinkState.LOS)
        t_knee = self.gamma0 * math.exp(mu) / x_scale
        return [t for t in (t_knee * 1e-3, t_knee, t_knee * 1e3) if 0.0 < t < t_cap]


def _integrate_coverage_over_u(
    coverage_fn: Callable[[float], float],
    t_lo: float,
    t_hi: float,
    interior_thresholds: Sequence[float],
    epsrel: float,
) -> tuple[float, float]:
    """int_{t_lo}^{t_hi} coverage(t)/(1+t) dt via u = t/(1+t)."""

    def g(u: float) -> float:
        if u >= 1.0:
            return 0.0
        t = u / (1.0 - u)
        return coverage_fn(t) / (1.0 - u)

    u_lo = t_lo / (1.0 + t_lo)
    u_hi = t_hi / (1.0 + t_hi)
    points = sorted(
        t / (1.0 + t) for t in interior_thresholds if t_lo < t < t_hi
    )
    return checked_quad(g, u_lo, u_hi, epsrel=epsrel, points=points or None, limit=300)


def rate_from_coverage(
    coverage_fn: Callable[[float], float],
    bandwidth_hz: float,
    *,
    t_cap: float,
    breakpoints: Sequence[float] = (),
    epsrel: float = 1e-6,
) -> tuple[float, float]:
    """Rate integral for an arbitrary coverage curve, truncated at ``t_cap``.

    The caller owns the truncation: the returned error estimate covers the
    quadrature on [0, t_cap] only.  Useful for cross-checks against
    coverage curves with known closed-form rates.
    """
    if t_cap <= 0.0:
        raise ParameterError("t_cap must be positive")
    integral, abserr = _integrate_coverage_over_u(coverage_fn, 0.0, t_cap, breakpoints, epsrel)
    return bandwidth_hz / _LN2 * integral, bandwidth_hz / _LN2 * abserr


__all__ = [
    "CoverageResult",
    "NoiseLimitedModel",
    "QuadratureError",
    "rate_from_coverage",
]
