"""Monte Carlo system simulator.

Unlike the closed-form path, the simulator makes no noise-limited
assumption: every realization samples the full station process in a
truncated window, marks each station LOS/NLOS/unreachable, draws
shadowing and interferer beam gains, associates the user with the
smallest-path-loss station, and accumulates the aggregate other-cell
interference.

Reproducibility contract: realization ``i`` of a run is a pure function
of ``(base_seed, i)`` (per-realization generators derived through
``numpy`` seed sequences with the index as spawn key), so estimates do
not depend on batching, worker count or scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .params import ParameterError, Scenario
from .propagation import (
    LinkState,
    intended_link_gain,
    interferer_gain_distribution,
    link_state_prob_arrays,
    shadowing_natural_params,
)

_STATE_BY_CODE = (LinkState.LOS, LinkState.NLOS, LinkState.OUT)
_CODE_LOS, _CODE_NLOS, _CODE_OUT = 0, 1, 2

MODES = ("snr_only", "full_sinr")


@dataclass(frozen=True)
class BaseStationSample:
    distance: float
    state: LinkState
    path_loss: float  # +inf for unreachable links
    shadowing: float
    gain: float  # combined beam gain; the aligned gain on the serving link


@dataclass(frozen=True)
class NetworkRealization:
    stations: tuple[BaseStationSample, ...]
    serving_index: int | None  # None when no station has finite path-loss
    truncation_radius: float
    seed: tuple[int, int] | None = None  # (base_seed, realization index)


@dataclass(frozen=True)
class EmpiricalEstimate:
    mean: float
    half_width_95: float
    n_realizations: int


@dataclass(frozen=True)
class SimulationSamples:
    """Per-realization outputs of one simulation run.

    ``snr`` ignores interference, ``sinr`` includes it; both are NaN for
    realizations where every station is unreachable.  Both are computed
    from the same realizations, so the per-realization ordering
    sinr <= snr holds exactly.
    """

    snr: np.ndarray
    sinr: np.ndarray
    serving_path_loss: np.ndarray  # +inf for unreachable realizations
    n_stations: np.ndarray
    base_seed: int
    truncation_radius: float


def realization_rng(base_seed: int, index: int) -> np.random.Generator:
    """Generator for one realization; independent of how runs are batched."""
    return np.random.default_rng(np.random.SeedSequence(entropy=base_seed, spawn_key=(index,)))


def truncation_radius(scenario: Scenario, epsilon: float = 1e-6) -> float:
    """Simulation window radius keeping the neglected mass below ``epsilon``.

    With outage enabled: the smallest radius where the probability of a
    link not being in outage drops to ``epsilon``.  Without outage: at
    least twenty cell radii, extended until the mean contribution of a
    unit-gain interferer falls below ``epsilon`` times the noise power.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    bl = scenario.blockage
    if scenario.outage_enabled:
        return max(0.0, (math.log(bl.gamma_out) - math.log(epsilon)) / bl.delta_out)
    mu, sigma = shadowing_natural_params(scenario.shadowing, LinkState.NLOS)
    mean_shadow = math.exp(mu + sigma**2 / 2.0)
    loss_floor = scenario.system.tx_power_mw * mean_shadow / (
        epsilon * scenario.system.noise_power_mw
    )
    pl = scenario.pathloss
    r_noise = loss_floor ** (1.0 / pl.beta_nlos) / pl.kappa_nlos
    return max(20.0 * scenario.system.avg_cell_radius_m, r_noise)


@lru_cache(maxsize=64)
def _tables(scenario: Scenario):
    """Per-scenario constant arrays for the sampling hot loop (read-only)."""
    sh = scenario.shadowing
    mu_by_code, sigma_by_code = np.zeros(3), np.zeros(3)
    for code, state in ((_CODE_LOS, LinkState.LOS), (_CODE_NLOS, LinkState.NLOS)):
        mu_by_code[code], sigma_by_code[code] = shadowing_natural_params(sh, state)
    dist = interferer_gain_distribution(scenario.bs_antenna, scenario.mt_antenna)
    pl = scenario.pathloss
    return (
        mu_by_code,
        sigma_by_code,
        np.cumsum(dist.probs),
        np.asarray(dist.gains),
        np.array([pl.kappa_los, pl.kappa_nlos, np.nan]),
        np.array([pl.beta_los, pl.beta_nlos, np.nan]),
    )


def _draw_arrays(rng: np.random.Generator, scenario: Scenario, radius: float):
    """One realization as parallel arrays (distance, state code, loss, shadow, gain).

    Draw order is part of the reproducibility contract: Poisson count,
    disk radii (with resampling of stations closer than the minimum link
    distance), state uniforms, one standard normal per station for
    shadowing, one uniform per station for the interferer beam gain.
    """
    min_dist = scenario.min_link_distance_m
    if min_dist >= radius:
        raise ParameterError("truncation radius must exceed the minimum link distance")
    mu_by_code, sigma_by_code, gain_edges, gain_values, kappa_by_code, beta_by_code = _tables(
        scenario
    )
    count = rng.poisson(scenario.system.density * math.pi * radius**2)
    r = radius * np.sqrt(rng.random(count))
    while True:
        close = r < min_dist
        n_close = int(np.count_nonzero(close))
        if n_close == 0:
            break
        r[close] = radius * np.sqrt(rng.random(n_close))

    p_los, _, p_out = link_state_prob_arrays(r, scenario.blockage)
    u = rng.random(count)
    codes = np.where(u < p_out, _CODE_OUT, np.where(u < p_out + p_los, _CODE_LOS, _CODE_NLOS))

    shadow = np.exp(mu_by_code[codes] + sigma_by_code[codes] * rng.standard_normal(count))

    # same inverse-CDF scheme as GainDistribution.sample, on cached atoms
    idx = np.searchsorted(gain_edges, rng.random(count), side="right")
    gains = gain_values[np.minimum(idx, len(gain_values) - 1)]

    kappa = kappa_by_code[codes]
    beta = beta_by_code[codes]
    loss = np.full(count, np.inf)
    finite = codes != _CODE_OUT
    loss[finite] = (kappa[finite] * r[finite]) ** beta[finite]
    return r, codes, loss, shadow, gains


@lru_cache(maxsize=64)
def _link_budget(scenario: Scenario) -> tuple[float, float, float]:
    return (
        scenario.system.tx_power_mw,
        scenario.system.noise_power_mw,
        intended_link_gain(scenario.bs_antenna, scenario.mt_antenna),
    )


def _metrics(scenario: Scenario, loss: np.ndarray, shadow: np.ndarray, gains: np.ndarray):
    """(snr, sinr, serving_loss) of one realization; NaNs when unreachable."""
    finite = np.isfinite(loss)
    if not finite.any():
        return math.nan, math.nan, math.inf
    idx = int(np.argmin(np.where(finite, loss, np.inf)))
    p_mw, noise_mw, g0 = _link_budget(scenario)
    signal = p_mw * g0 * shadow[idx] / loss[idx]
    interferers = finite.copy()
    interferers[idx] = False
    interference = float(
        np.sum(p_mw * gains[interferers] * shadow[interferers] / loss[interferers])
    )
    return signal / noise_mw, signal / (noise_mw + interference), float(loss[idx])


def sample_realization(
    rng: np.random.Generator,
    scenario: Scenario,
    truncation_radius: float,
    seed: tuple[int, int] | None = None,
) -> NetworkRealization:
    """Sample one network realization inside the given window."""
    if truncation_radius <= 0.0:
        raise ParameterError("truncation radius must be positive")
    r, codes, loss, shadow, gains = _draw_arrays(rng, scenario, truncation_radius)
    finite = np.isfinite(loss)
    serving = int(np.argmin(np.where(finite, loss, np.inf))) if finite.any() else None
    g0 = intended_link_gain(scenario.bs_antenna, scenario.mt_antenna)
    stations = tuple(
        BaseStationSample(
            distance=float(r[i]),
            state=_STATE_BY_CODE[int(codes[i])],
            path_loss=float(loss[i]),
            shadowing=float(shadow[i]),
            gain=g0 if i == serving else float(gains[i]),
        )
        for i in range(len(r))
    )
    return NetworkRealization(
        stations=stations,
        serving_index=serving,
        truncation_radius=truncation_radius,
        seed=seed,
    )


def sinr(
    realization: NetworkRealization, scenario: Scenario, *, include_interference: bool = True
) -> float | None:
    """Linear SINR of one realization; None when nothing is reachable."""
    if realization.serving_index is None:
        return None
    loss = np.array([b.path_loss for b in realization.stations])
    shadow = np.array([b.shadowing for b in realization.stations])
    gains = np.array([b.gain for b in realization.stations])
    snr_value, sinr_value, _ = _metrics(scenario, loss, shadow, gains)
    return sinr_value if include_interference else snr_value


def simulate_samples(
    scenario: Scenario,
    n: int,
    base_seed: int,
    *,
    window_radius: float | None = None,
    epsilon: float = 1e-6,
) -> SimulationSamples:
    """Run ``n`` independent realizations and collect per-realization metrics."""
    if n < 1:
        raise ParameterError("need at least one realization")
    radius = truncation_radius(scenario, epsilon) if window_radius is None else window_radius
    if radius <= scenario.min_link_distance_m:
        raise ParameterError("window radius must exceed the minimum link distance")
    snr_out = np.empty(n)
    sinr_out = np.empty(n)
    loss_out = np.empty(n)
    counts = np.empty(n, dtype=np.int64)
    children = np.random.SeedSequence(base_seed).spawn(n)
    for i in range(n):
        rng = np.random.default_rng(children[i])
        _, _, loss, shadow, gains = _draw_arrays(rng, scenario, radius)
        snr_out[i], sinr_out[i], loss_out[i] = _metrics(scenario, loss, shadow, gains)
        counts[i] = len(loss)
    return SimulationSamples(
        snr=snr_out,
        sinr=sinr_out,
        serving_path_loss=loss_out,
        n_stations=counts,
        base_seed=base_seed,
        truncation_radius=radius,
    )


def _select(samples: SimulationSamples, mode: str) -> np.ndarray:
    if mode == "snr_only":
        return samples.snr
    if mode == "full_sinr":
        return samples.sinr
    raise ParameterError(f"unknown mode {mode!r}; expected one of {MODES}")


def coverage_from_samples(samples: SimulationSamples, threshold: float, mode: str) -> EmpiricalEstimate:
    values = _select(samples, mode)
    n = len(values)
    covered = values >= threshold  # NaN (unreachable) compares False
    p = float(np.count_nonzero(covered)) / n
    half = 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / n)
    return EmpiricalEstimate(mean=p, half_width_95=half, n_realizations=n)


def rate_from_samples(
    samples: SimulationSamples, bandwidth_hz: float, mode: str
) -> EmpiricalEstimate:
    values = _select(samples, mode)
    rates = bandwidth_hz * np.log2(1.0 + np.where(np.isnan(values), 0.0, values))
    n = len(rates)
    std = float(np.std(rates, ddof=1)) if n > 1 else 0.0
    return EmpiricalEstimate(
        mean=float(np.mean(rates)), half_width_95=1.96 * std / math.sqrt(n), n_realizations=n
    )


def estimate_coverage(
    scenario: Scenario,
    threshold: float,
    n: int,
    base_seed: int,
    *,
    mode: str = "snr_only",
    samples: SimulationSamples | None = None,
) -> EmpiricalEstimate:
    """Empirical P{SINR >= threshold}; unreachable realizations count as uncovered."""
    if samples is None:
        samples = simulate_samples(scenario, n, base_seed)
    return coverage_from_samples(samples, threshold, mode)


def estimate_rate(
    scenario: Scenario,
    n: int,
    base_seed: int,
    *,
    mode: str = "full_sinr",
    samples: SimulationSamples | None = None,
) -> EmpiricalEstimate:
    """Empirical mean of BW*log2(1+SINR); unreachable realizations contribute zero."""
    if samples is None:
        samples = simulate_samples(scenario, n, base_seed)
    return rate_from_samples(samples, scenario.system.bandwidth_hz, mode)
