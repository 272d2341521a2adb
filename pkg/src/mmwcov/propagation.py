"""Physical-layer primitives shared by the analytic and Monte Carlo paths.

Link-state probabilities, the power-law path-loss, Log-Normal shadowing
and the two-level antenna gains.  Everything here is a pure function of
its inputs (plus an explicit RNG where sampling is involved), so the
functions are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .params import (
    AntennaPattern,
    BlockageParams,
    ParameterError,
    PathLossParams,
    ShadowingParams,
    db_to_natural,
)


class LinkState(Enum):
    LOS = "los"
    NLOS = "nlos"
    OUT = "out"


@dataclass(frozen=True)
class LinkStateProbs:
    """Probability triple of a link being LOS / NLOS / unreachable.

    Constructed so that p_los + p_nlos + p_out == 1.0 holds exactly in
    floating point (summed left to right), not just to rounding error:
    p_out is snapped onto the complement grid of 1 and p_nlos absorbs the
    residual, nudged by at most one ulp.
    """

    p_los: float
    p_nlos: float
    p_out: float


def link_state_probs(r: float, blockage: BlockageParams) -> LinkStateProbs:
    """Three-state probabilities at link distance ``r`` (meters)."""
    if r < 0.0:
        raise ParameterError(f"link distance must be non-negative, got {r!r}")
    p_out = max(0.0, 1.0 - blockage.gamma_out * math.exp(-blockage.delta_out * r))
    not_out = 1.0 - p_out
    p_out = 1.0 - not_out  # snap: not_out + p_out == 1 in real arithmetic
    p_los = not_out * (blockage.gamma_los * math.exp(-blockage.delta_los * r))
    p_nlos = not_out - p_los
    # one Sterbenz round-trip makes p_los + p_nlos == not_out exact as well
    # (either the subtraction above was exact, or this one is)
    p_los = not_out - p_nlos
    return LinkStateProbs(p_los=p_los, p_nlos=p_nlos, p_out=p_out)


def link_state_prob_arrays(
    r: np.ndarray, blockage: BlockageParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (p_los, p_nlos, p_out); matches the scalar construction to
    one ulp (the simulator only consumes the p_out / p_los thresholds)."""
    p_out = np.maximum(0.0, 1.0 - blockage.gamma_out * np.exp(-blockage.delta_out * r))
    not_out = 1.0 - p_out
    p_los = not_out * (blockage.gamma_los * np.exp(-blockage.delta_los * r))
    return p_los, not_out - p_los, 1.0 - not_out


def path_loss(r: float, state: LinkState, pl: PathLossParams) -> float:
    """Linear path-loss (kappa*r)^beta; +inf for an unreachable link.

    The power law is a far-field model, so r = 0 is a domain error rather
    than zero loss; the simulator keeps stations at least a configurable
    minimum distance away.
    """
    if state is LinkState.OUT:
        return math.inf
    if r <= 0.0:
        raise ParameterError(f"path-loss undefined at distance {r!r}")
    if state is LinkState.LOS:
        return (pl.kappa_los * r) ** pl.beta_los
    return (pl.kappa_nlos * r) ** pl.beta_nlos


def intended_link_gain(bs: AntennaPattern, mt: AntennaPattern) -> float:
    """Beamforming gain of the aligned serving link (linear)."""
    return bs.g_max * mt.g_max


@dataclass(frozen=True)
class GainDistribution:
    """Discrete distribution of the combined gain of a randomly oriented link."""

    gains: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(g <= 0.0 for g in self.gains):
            raise ParameterError("gains must be positive")
        if abs(math.fsum(self.probs) - 1.0) > 1e-12:
            raise ParameterError("gain probabilities must sum to 1")

    def mean(self) -> float:
        return math.fsum(g * p for g, p in zip(self.gains, self.probs))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inverse-CDF draw of ``size`` i.i.d. gains."""
        edges = np.cumsum(self.probs)
        idx = np.searchsorted(edges, rng.random(size), side="right")
        return np.asarray(self.gains)[np.minimum(idx, len(self.gains) - 1)]


def _two_point(pattern: AntennaPattern) -> list[tuple[float, float]]:
    p_max = pattern.main_lobe_prob
    return [(pattern.g_max, p_max), (pattern.g_min, 1.0 - p_max)]


def interferer_gain_distribution(bs: AntennaPattern, mt: AntennaPattern) -> GainDistribution:
    """Distribution of G_bs * G_mt when both boresights are uniform random.

    The product of the two two-point side distributions has up to four
    atoms; atoms whose gains agree to 1e-12 relative are merged so that
    degenerate patterns (e.g. an omnidirectional terminal) collapse
    cleanly.
    """
    atoms: list[tuple[float, float]] = []
    for g_b, p_b in _two_point(bs):
        for g_m, p_m in _two_point(mt):
            atoms.append((g_b * g_m, p_b * p_m))
    atoms.sort(key=lambda a: a[0], reverse=True)
    merged: list[tuple[float, float]] = []
    for gain, prob in atoms:
        if prob == 0.0:
            continue
        if merged and abs(merged[-1][0] - gain) <= 1e-12 * merged[-1][0]:
            merged[-1] = (merged[-1][0], merged[-1][1] + prob)
        else:
            merged.append((gain, prob))
    return GainDistribution(
        gains=tuple(g for g, _ in merged), probs=tuple(p for _, p in merged)
    )


def shadowing_natural_params(sh: ShadowingParams, state: LinkState) -> tuple[float, float]:
    """(mu, sigma) of ln(shadowing gain) for a LOS or NLOS link."""
    if state is LinkState.LOS:
        return db_to_natural(sh.mu_los_db), db_to_natural(sh.sigma_los_db)
    if state is LinkState.NLOS:
        return db_to_natural(sh.mu_nlos_db), db_to_natural(sh.sigma_nlos_db)
    raise ParameterError("shadowing is undefined for unreachable links")


def sample_shadowing(
    rng: np.random.Generator, mu: float, sigma: float, size: int | None = None
):
    """Log-Normal power gains exp(N(mu, sigma^2)), natural-log parameters."""
    if sigma < 0.0:
        raise ParameterError("sigma must be non-negative")
    return rng.lognormal(mean=mu, sigma=sigma, size=size)
