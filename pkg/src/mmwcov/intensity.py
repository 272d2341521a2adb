"""Intensity measure of the path-loss process seen from the typical user.

Mapping every base station to its path-loss turns the planar point
process into a point process on the positive half-line whose intensity
measure L([0, x)), the expected number of stations with path-loss below
x, has a closed form.  This module evaluates that closed form, its
per-state split, its first derivative (the serving-link density), the
serving-link CDF, and an independent quadrature oracle used to certify
the closed forms.

Numerical layout: with u = x^(1/beta) every exponential term is a value of

    phi(z) = 1 - (1 + z) * exp(-z),

the mass of a radial exponential profile inside radius z (in units of the
decay length).  phi is evaluated through a small-argument series so the
closed forms stay accurate even when the arguments nearly cancel; x itself
(which reaches ~1e16 in path-loss units) never enters an exponential.

All evaluators take scalar path-loss values and are pure; they sit in the
innermost loops of the coverage quadrature, so they stay plain ``math``
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import checked_quad
from .params import ParameterError, Scenario
from .propagation import LinkState, link_state_probs

_TWO_PI = 2.0 * math.pi

# phi(z) = sum_{k>=2} (-1)^k (k-1)/k! z^k; 12 terms cover |z| <= 0.3 to
# full double precision.
_PHI_SERIES_CUTOFF = 0.3
_PHI_COEFFS = tuple((-1.0) ** k * (k - 1) / math.factorial(k) for k in range(13, 1, -1))


class OutageModelError(ParameterError):
    """Closed forms are restricted to gamma_out >= 1 when outage is enabled."""


def _phi(z: float) -> float:
    """1 - (1 + z) e^(-z), accurate for all z >= 0."""
    if z < _PHI_SERIES_CUTOFF:
        acc = 0.0
        for c in _PHI_COEFFS:
            acc = acc * z + c
        return acc * z * z
    return 1.0 - (1.0 + z) * math.exp(-z)


def geometric_ladder(upper: float, levels: int = 56) -> list[float]:
    """Log-spaced interior break points for quadrature over [0, upper].

    Guards adaptive quadrature against integrands whose mass sits many
    orders of magnitude below the domain size: every length scale down to
    ~upper * 2^-levels intersects a panel of comparable width, so no
    spike can fall between the initial nodes.
    """
    return [upper * 0.5**k for k in range(1, levels)]


@dataclass(frozen=True)
class StateConstants:
    """Per-state pieces of the closed form (blockage rates over kappa)."""

    kappa: float
    beta: float
    q: float  # delta_los / kappa
    t: float  # delta_out / kappa
    v: float  # (delta_los + delta_out) / kappa
    z: float  # path-loss at the outage-onset radius; +inf without outage


@dataclass(frozen=True)
class IntensityConstants:
    """Scenario-wide pieces of the closed form."""

    k1: float  # 2 pi lam gamma_los / delta_los^2
    k2: float  # 2 pi lam gamma_los gamma_out / (delta_los + delta_out)^2
    r_const: float  # delta_los * crossover radius
    w_const: float  # (delta_los + delta_out) * crossover radius
    los: StateConstants
    nlos: StateConstants


def _state_constants(kappa: float, beta: float, blockage, crossover: float) -> StateConstants:
    return StateConstants(
        kappa=kappa,
        beta=beta,
        q=blockage.delta_los / kappa,
        t=blockage.delta_out / kappa,
        v=(blockage.delta_los + blockage.delta_out) / kappa,
        z=(kappa * crossover) ** beta if math.isfinite(crossover) else math.inf,
    )


class IntensityMeasure:
    """Closed-form intensity of the path-loss process for one scenario.

    Immutable after construction; evaluations are pure and safe to call
    concurrently.
    """

    def __init__(self, scenario: Scenario):
        bl = scenario.blockage
        if scenario.outage_enabled and bl.gamma_out < 1.0:
            raise OutageModelError(
                "closed forms require gamma_out >= 1 (outage probability zero at "
                f"distance 0); got gamma_out = {bl.gamma_out!r}"
            )
        if bl.gamma_los > 0.0 and bl.delta_los == 0.0:
            raise ParameterError("closed forms require delta_los > 0 when gamma_los > 0")
        self.scenario = scenario
        self.outage_enabled = scenario.outage_enabled
        self.lam = scenario.system.density

        k1 = _TWO_PI * self.lam * bl.gamma_los / bl.delta_los**2 if bl.gamma_los else 0.0
        if self.outage_enabled:
            crossover = bl.crossover_radius_m
            log_gamma_out = math.log(bl.gamma_out)
            k2 = (
                _TWO_PI * self.lam * bl.gamma_los * bl.gamma_out / (bl.delta_los + bl.delta_out) ** 2
                if bl.gamma_los
                else 0.0
            )
            r_const = bl.delta_los * crossover
            w_const = (bl.delta_los + bl.delta_out) * crossover
        else:
            crossover, log_gamma_out, k2, r_const, w_const = math.inf, 0.0, 0.0, 0.0, 0.0

        self._crossover = crossover
        self._log_gamma_out = log_gamma_out
        pl = scenario.pathloss
        self.constants = IntensityConstants(
            k1=k1,
            k2=k2,
            r_const=r_const,
            w_const=w_const,
            los=_state_constants(pl.kappa_los, pl.beta_los, bl, crossover),
            nlos=_state_constants(pl.kappa_nlos, pl.beta_nlos, bl, crossover),
        )

    # -- helpers -----------------------------------------------------------

    def _state(self, state: LinkState) -> StateConstants:
        if state is LinkState.LOS:
            return self.constants.los
        if state is LinkState.NLOS:
            return self.constants.nlos
        raise ParameterError("intensity components are defined for LOS and NLOS only")

    @staticmethod
    def _check_x(x: float) -> float:
        x = float(x)
        if not x >= 0.0:
            raise ParameterError(f"path-loss values must be non-negative, got {x!r}")
        return x

    def breakpoints(self) -> tuple[float, ...]:
        """Finite path-loss values where the closed form changes branch."""
        if not self.outage_enabled:
            return ()
        return tuple(sorted({self.constants.los.z, self.constants.nlos.z}))

    # -- closed forms ------------------------------------------------------

    def upsilon0(self, x: float, state: LinkState) -> float:
        """Cumulative LOS-profile mass inside path-loss x (outage model).

        2 pi lam int_0^{r(x)} (1 - p_out(r)) gamma_los e^(-delta_los r) r dr
        in closed form; the branch point z is where r(x) crosses the
        outage-onset radius (the point itself uses the upper branch).
        """
        if not self.outage_enabled:
            raise ParameterError("upsilon0 is the outage-model form; use the *_no_outage route")
        x = self._check_x(x)
        c, s = self.constants, self._state(state)
        u = x ** (1.0 / s.beta)
        if x < s.z:
            return c.k1 * _phi(s.q * u)
        return c.k1 * _phi(c.r_const) + c.k2 * (_phi(s.v * u) - _phi(c.w_const))

    def upsilon1(self, x: float, state: LinkState) -> float:
        """Cumulative non-outage mass: 2 pi lam int_0^{r(x)} (1 - p_out(r)) r dr."""
        if not self.outage_enabled:
            raise ParameterError("upsilon1 is the outage-model form; use the *_no_outage route")
        x = self._check_x(x)
        s = self._state(state)
        bl = self.scenario.blockage
        u = x ** (1.0 / s.beta)
        if x < s.z:
            return math.pi * self.lam * u * u / s.kappa**2
        plateau = math.pi * self.lam * self._crossover**2
        tail_scale = _TWO_PI * self.lam * bl.gamma_out / bl.delta_out**2
        return plateau + tail_scale * (_phi(s.t * u) - _phi(self._log_gamma_out))

    def upsilon0_no_outage(self, x: float, state: LinkState) -> float:
        if self.outage_enabled:
            raise ParameterError("outage is enabled; use upsilon0")
        s = self._state(state)
        u = self._check_x(x) ** (1.0 / s.beta)
        return self.constants.k1 * _phi(s.q * u)

    def upsilon1_no_outage(self, x: float, state: LinkState) -> float:
        if self.outage_enabled:
            raise ParameterError("outage is enabled; use upsilon1")
        s = self._state(state)
        u = self._check_x(x) ** (1.0 / s.beta)
        return math.pi * self.lam * u * u / s.kappa**2

    def lambda_component(self, x: float, state: LinkState) -> float:
        """Expected number of ``state`` links with path-loss below x."""
        if state is LinkState.OUT:
            self._check_x(x)
            return 0.0
        if self.outage_enabled:
            ups0, ups1 = self.upsilon0, self.upsilon1
        else:
            ups0, ups1 = self.upsilon0_no_outage, self.upsilon1_no_outage
        if state is LinkState.LOS:
            return ups0(x, state)
        return ups1(x, state) - ups0(x, state)

    def lambda_component_no_outage(self, x: float, state: LinkState) -> float:
        """Outage-free closed forms (never touch the outage parameters);
        rejects configurations that have the outage state enabled."""
        if self.outage_enabled:
            raise ParameterError("outage is enabled; use lambda_component")
        return self.lambda_component(x, state)

    def lambda_total(self, x: float) -> float:
        return self.lambda_component(x, LinkState.LOS) + self.lambda_component(
            x, LinkState.NLOS
        )

    def lambda_deriv(self, x: float, state: LinkState) -> float:
        """Per-state intensity density (the smooth part; the branch point
        carries no atom because the closed form is continuous there)."""
        x = float(x)
        if not x > 0.0:
            raise ParameterError(f"intensity density requires x > 0, got {x!r}")
        c, s = self.constants, self._state(state)
        bl = self.scenario.blockage
        u = x ** (1.0 / s.beta)
        x_pow = u * u / x  # x^(2/beta - 1)
        if state is LinkState.LOS:
            if x < s.z or not self.outage_enabled:
                return c.k1 * (s.q**2 / s.beta) * x_pow * math.exp(-s.q * u)
            return c.k2 * (s.v**2 / s.beta) * x_pow * math.exp(-s.v * u)
        # NLOS density factored as (non-outage profile) * (1 - LOS fraction)
        # to avoid cancellation between the two cumulative forms.
        base = _TWO_PI * self.lam / (s.kappa**2 * s.beta) * x_pow
        if bl.gamma_los == 1.0:
            nlos_frac = -math.expm1(-s.q * u)
        else:
            nlos_frac = 1.0 - bl.gamma_los * math.exp(-s.q * u)
        if x < s.z or not self.outage_enabled:
            return base * nlos_frac
        return base * bl.gamma_out * math.exp(-s.t * u) * nlos_frac

    def lambda_total_deriv(self, x: float) -> float:
        return self.lambda_deriv(x, LinkState.LOS) + self.lambda_deriv(x, LinkState.NLOS)

    # -- limits, CDF, truncation -------------------------------------------

    def lambda_component_limit(self, state: LinkState) -> float:
        """x -> inf limit of a component (finite only with outage enabled)."""
        if state is LinkState.OUT:
            return 0.0
        c = self.constants
        if not self.outage_enabled:
            # phi(inf) = 1, and the quadratic non-outage mass diverges
            return c.k1 if state is LinkState.LOS else math.inf
        bl = self.scenario.blockage
        ups0_inf = c.k1 * _phi(c.r_const) + c.k2 * (1.0 - _phi(c.w_const))
        if state is LinkState.LOS:
            return ups0_inf
        plateau = math.pi * self.lam * self._crossover**2
        tail_scale = _TWO_PI * self.lam * bl.gamma_out / bl.delta_out**2
        ups1_inf = plateau + tail_scale * (1.0 - _phi(self._log_gamma_out))
        return ups1_inf - ups0_inf

    def lambda_limit(self) -> float:
        """Total mass of finite path-losses; +inf when outage is disabled."""
        if not self.outage_enabled:
            return math.inf
        return self.lambda_component_limit(LinkState.LOS) + self.lambda_component_limit(
            LinkState.NLOS
        )

    def cdf_min_path_loss(self, x: float) -> float:
        """P{smallest path-loss <= x} = 1 - exp(-L([0, x))).

        With outage enabled the limit as x -> inf stays below one; the gap
        is the probability that the whole network is unreachable.
        """
        return -math.expm1(-self.lambda_total(x))

    def serving_tail_cut(self, tail_eps: float = 1e-13) -> float:
        """Path-loss x beyond which the serving link carries < tail_eps mass.

        The remaining mass of the serving-link density past x is
        exp(-L(x)) - exp(-L(inf)), so integrals of that density can stop
        at the returned point with a certified truncation error.
        """
        lam_inf = self.lambda_limit()
        floor = math.exp(-lam_inf) if math.isfinite(lam_inf) else 0.0
        pl = self.scenario.pathloss
        scale = (pl.kappa_nlos * self.scenario.system.avg_cell_radius_m) ** pl.beta_nlos
        x = max(1.0, scale, *(self.breakpoints() or (0.0,)))
        for _ in range(200):
            if math.exp(-self.lambda_total(x)) - floor < tail_eps:
                return x
            x *= 2.0
        raise ParameterError("serving-link tail does not decay; check blockage parameters")


def oracle_intensity_quadrature(
    scenario: Scenario, x: float, state: LinkState, *, epsrel: float = 1e-10
) -> float:
    """Intensity of one state by direct numerical integration.

    Evaluates 2 pi lam int_0^inf 1{(kappa_s r)^beta_s < x} p_s(r) r dr with
    adaptive quadrature, using only the link-state probabilities and the
    radius/path-loss mapping, none of the closed-form machinery, so it
    serves as an independent certification oracle.  The panel layout uses
    a geometric ladder so short-range blockage scales cannot hide inside a
    kilometre-sized domain.  Non-convergence raises
    :class:`~mmwcov.numerics.QuadratureError`.
    """
    x = float(x)
    if not x >= 0.0:
        raise ParameterError(f"path-loss values must be non-negative, got {x!r}")
    if state is LinkState.OUT or x == 0.0:
        return 0.0
    pl = scenario.pathloss
    if state is LinkState.LOS:
        kappa, beta = pl.kappa_los, pl.beta_los
        pick = lambda probs: probs.p_los  # noqa: E731
    elif state is LinkState.NLOS:
        kappa, beta = pl.kappa_nlos, pl.beta_nlos
        pick = lambda probs: probs.p_nlos  # noqa: E731
    else:
        raise ParameterError("oracle is defined for LOS and NLOS only")
    r_max = x ** (1.0 / beta) / kappa
    blockage = scenario.blockage

    def integrand(r: float) -> float:
        return pick(link_state_probs(r, blockage)) * r

    points = sorted(
        p
        for p in set(geometric_ladder(r_max)) | {blockage.crossover_radius_m}
        if 0.0 < p < r_max
    )
    value, _ = checked_quad(integrand, 0.0, r_max, epsrel=epsrel, points=points or None)
    return _TWO_PI * scenario.system.density * value
