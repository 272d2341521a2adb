"""Model parameters and unit conversions.

All dB <-> linear conversion happens here, at the configuration boundary.
The analytic and Monte Carlo cores consume linear (or natural-log)
quantities exclusively through the accessors on these types, so no dB
arithmetic ever leaks into the numerics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

LN10_OVER_10 = math.log(10.0) / 10.0


class ParameterError(ValueError):
    """Raised when a configuration value violates a model precondition."""


def db_to_linear(value_db: float) -> float:
    """Power ratio in dB to a linear power ratio."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        raise ParameterError(f"cannot express non-positive ratio {value!r} in dB")
    return 10.0 * math.log10(value)


def dbm_to_mw(value_dbm: float) -> float:
    return 10.0 ** (value_dbm / 10.0)


def db_to_natural(value_db: float) -> float:
    """dB-domain mean/std of a Log-Normal to its natural-log domain value."""
    return value_db * LN10_OVER_10


def kappa_from_alpha(alpha_db: float, beta: float) -> float:
    """Reference path-loss base from an (alpha, beta) model.

    alpha_db is the path-loss in dB at 1 m; the returned base kappa feeds
    the power law (kappa * r) ** beta.
    """
    if beta <= 0.0:
        raise ParameterError(f"path-loss exponent must be positive, got {beta!r}")
    return 10.0 ** (alpha_db / (10.0 * beta))


def alpha_from_kappa(kappa: float, beta: float) -> float:
    """Inverse of :func:`kappa_from_alpha` (used for round-trip checks)."""
    if kappa <= 0.0 or beta <= 0.0:
        raise ParameterError("kappa and beta must be positive")
    return 10.0 * beta * math.log10(kappa)


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power over a bandwidth, in dBm."""
    if bandwidth_hz <= 0.0:
        raise ParameterError(f"bandwidth must be positive, got {bandwidth_hz!r}")
    return -174.0 + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


@dataclass(frozen=True)
class BlockageParams:
    """Three-state link model parameters.

    The outage probability at distance r is max{0, 1 - gamma_out * exp(-delta_out * r)};
    conditioned on not being in outage, a link is LOS with probability
    gamma_los * exp(-delta_los * r).
    """

    delta_los: float  # 1/m
    gamma_los: float
    delta_out: float  # 1/m
    gamma_out: float

    def __post_init__(self) -> None:
        if self.delta_los < 0.0 or self.delta_out < 0.0:
            raise ParameterError("blockage decay rates must be non-negative")
        if not 0.0 <= self.gamma_los <= 1.0:
            raise ParameterError(f"gamma_los must lie in [0, 1], got {self.gamma_los!r}")
        if self.gamma_out <= 0.0:
            raise ParameterError(f"gamma_out must be positive, got {self.gamma_out!r}")

    @property
    def crossover_radius_m(self) -> float:
        """Distance beyond which the outage probability becomes positive."""
        if self.delta_out == 0.0:
            return math.inf
        return max(0.0, math.log(self.gamma_out) / self.delta_out)


@dataclass(frozen=True)
class PathLossParams:
    """Power-law path-loss bases and exponents for LOS and NLOS links."""

    kappa_los: float  # 1/m
    beta_los: float
    kappa_nlos: float  # 1/m
    beta_nlos: float

    def __post_init__(self) -> None:
        for name in ("kappa_los", "beta_los", "kappa_nlos", "beta_nlos"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class ShadowingParams:
    """Log-Normal shadowing, specified in dB per link state."""

    mu_los_db: float
    sigma_los_db: float
    mu_nlos_db: float
    sigma_nlos_db: float

    def __post_init__(self) -> None:
        if self.sigma_los_db <= 0.0 or self.sigma_nlos_db <= 0.0:
            raise ParameterError("shadowing standard deviations must be positive")


@dataclass(frozen=True)
class AntennaPattern:
    """Two-level sectored beam pattern (main lobe plus side lobe)."""

    g_max_db: float
    g_min_db: float
    omega_rad: float  # main-lobe beamwidth

    def __post_init__(self) -> None:
        if not 0.0 < self.omega_rad <= 2.0 * math.pi:
            raise ParameterError(f"beamwidth must lie in (0, 2*pi], got {self.omega_rad!r}")
        if self.g_max_db < self.g_min_db:
            raise ParameterError("main-lobe gain cannot be below the side-lobe gain")

    @property
    def g_max(self) -> float:
        return db_to_linear(self.g_max_db)

    @property
    def g_min(self) -> float:
        return db_to_linear(self.g_min_db)

    @property
    def main_lobe_prob(self) -> float:
        """Probability that a uniformly random boresight covers the link."""
        return self.omega_rad / (2.0 * math.pi)


@dataclass(frozen=True)
class SystemParams:
    """Radio and deployment parameters."""

    tx_power_dbm: float
    bandwidth_hz: float
    noise_figure_db: float
    density: float  # base stations per m^2

    def __post_init__(self) -> None:
        if self.bandwidth_hz <= 0.0:
            raise ParameterError("bandwidth must be positive")
        if self.density <= 0.0:
            raise ParameterError("density must be positive")

    @classmethod
    def from_cell_radius(
        cls,
        tx_power_dbm: float,
        bandwidth_hz: float,
        noise_figure_db: float,
        cell_radius_m: float,
    ) -> "SystemParams":
        if cell_radius_m <= 0.0:
            raise ParameterError("cell radius must be positive")
        return cls(tx_power_dbm, bandwidth_hz, noise_figure_db, 1.0 / (math.pi * cell_radius_m**2))

    @property
    def avg_cell_radius_m(self) -> float:
        return math.sqrt(1.0 / (math.pi * self.density))

    @property
    def noise_power_dbm(self) -> float:
        return noise_power_dbm(self.bandwidth_hz, self.noise_figure_db)

    @property
    def noise_power_mw(self) -> float:
        return dbm_to_mw(self.noise_power_dbm)

    @property
    def tx_power_mw(self) -> float:
        return dbm_to_mw(self.tx_power_dbm)


@dataclass(frozen=True)
class Scenario:
    """Complete, immutable description of one network configuration.

    Instances are safe to share across workers. ``outage_enabled`` selects
    between the three-state link model and the outage-free special case;
    with outage disabled the blockage parameters must carry
    delta_out = 0, gamma_out = 1 so the outage probability is identically
    zero everywhere.
    """

    name: str
    blockage: BlockageParams
    pathloss: PathLossParams
    shadowing: ShadowingParams
    bs_antenna: AntennaPattern
    mt_antenna: AntennaPattern
    system: SystemParams
    outage_enabled: bool
    min_link_distance_m: float = 1.0

    def __post_init__(self) -> None:
        if self.min_link_distance_m < 0.0:
            raise ParameterError("minimum link distance cannot be negative")
        if self.outage_enabled:
            if self.blockage.delta_out <= 0.0:
                raise ParameterError(
                    "outage_enabled requires delta_out > 0; "
                    "use outage_enabled = false for an outage-free model"
                )
            if self.blockage.gamma_out < 1.0:
                warnings.warn(
                    f"gamma_out = {self.blockage.gamma_out!r} < 1 makes the outage "
                    "probability positive at distance 0",
                    stacklevel=2,
                )
        else:
            if self.blockage.delta_out != 0.0 or self.blockage.gamma_out != 1.0:
                raise ParameterError(
                    "outage_enabled = false requires delta_out = 0 and gamma_out = 1"
                )

    def with_cell_radius(self, cell_radius_m: float) -> "Scenario":
        """Copy of this scenario at a different deployment density."""
        system = SystemParams.from_cell_radius(
            self.system.tx_power_dbm,
            self.system.bandwidth_hz,
            self.system.noise_figure_db,
            cell_radius_m,
        )
        return replace(self, system=system)

    def without_outage(self) -> "Scenario":
        """Copy of this scenario with the outage state switched off."""
        blockage = BlockageParams(
            delta_los=self.blockage.delta_los,
            gamma_los=self.blockage.gamma_los,
            delta_out=0.0,
            gamma_out=1.0,
        )
        return replace(self, blockage=blockage, outage_enabled=False)
