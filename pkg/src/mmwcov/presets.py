"""Built-in scenario presets for the three reference carriers.

Two interpretations of the mmWave outage-parameter pair are shipped.  The
"as-printed" pair (delta_out = 5.2 /m, gamma_out = e^(1/30)) puts the
outage onset at delta_out^-1 * ln(gamma_out) = 6.4 mm, i.e. virtually the
whole network is unreachable, which is inconsistent with the 100-200 m
cell radii the model targets.  Swapping the two magnitudes ("corrected",
delta_out = 1/30 /m, gamma_out = e^5.2) puts the onset at 156 m.  The
corrected pair is the default; both remain selectable.
"""

from __future__ import annotations

import math

from .params import (
    AntennaPattern,
    BlockageParams,
    ParameterError,
    PathLossParams,
    Scenario,
    ShadowingParams,
    SystemParams,
    kappa_from_alpha,
)

PRESET_NAMES = ("mmwave-28", "mmwave-73", "uwave-2.5")
OUTAGE_VARIANTS = ("corrected", "as-printed")

DEFAULT_CELL_RADIUS_M = 100.0

_MMWAVE_BS = AntennaPattern(g_max_db=20.0, g_min_db=-10.0, omega_rad=math.radians(30.0))
_MMWAVE_MT = _MMWAVE_BS
_UWAVE_MT = AntennaPattern(g_max_db=0.0, g_min_db=0.0, omega_rad=2.0 * math.pi)

# 2.5 GHz single-slope model: 22.7 + 36.7 log10(r) + 26 log10(2.5) dB
_UWAVE_ALPHA_DB = 22.7 + 26.0 * math.log10(2.5)
_UWAVE_BETA = 3.67


def _mmwave_blockage(variant: str) -> BlockageParams:
    if variant == "corrected":
        delta_out, gamma_out = 1.0 / 30.0, math.exp(5.2)
    elif variant == "as-printed":
        delta_out, gamma_out = 5.2, math.exp(1.0 / 30.0)
    else:
        raise ParameterError(
            f"unknown outage variant {variant!r}; expected one of {OUTAGE_VARIANTS}"
        )
    return BlockageParams(
        delta_los=1.0 / 67.1, gamma_los=1.0, delta_out=delta_out, gamma_out=gamma_out
    )


def _mmwave_scenario(
    name: str,
    alpha_los_db: float,
    beta_los: float,
    alpha_nlos_db: float,
    beta_nlos: float,
    outage_variant: str,
    cell_radius_m: float,
) -> Scenario:
    return Scenario(
        name=f"{name}[{outage_variant}]",
        blockage=_mmwave_blockage(outage_variant),
        pathloss=PathLossParams(
            kappa_los=kappa_from_alpha(alpha_los_db, beta_los),
            beta_los=beta_los,
            kappa_nlos=kappa_from_alpha(alpha_nlos_db, beta_nlos),
            beta_nlos=beta_nlos,
        ),
        shadowing=ShadowingParams(
            mu_los_db=0.0, sigma_los_db=5.8, mu_nlos_db=0.0, sigma_nlos_db=8.7
        ),
        bs_antenna=_MMWAVE_BS,
        mt_antenna=_MMWAVE_MT,
        system=SystemParams.from_cell_radius(
            tx_power_dbm=30.0,
            bandwidth_hz=2e9,
            noise_figure_db=10.0,
            cell_radius_m=cell_radius_m,
        ),
        outage_enabled=True,
    )


def _uwave_scenario(cell_radius_m: float) -> Scenario:
    kappa = kappa_from_alpha(_UWAVE_ALPHA_DB, _UWAVE_BETA)
    return Scenario(
        name="uwave-2.5",
        # gamma_los = 0 forces every link into the NLOS state; the LOS slot
        # then carries zero probability mass and its parameters are inert.
        blockage=BlockageParams(delta_los=1.0, gamma_los=0.0, delta_out=0.0, gamma_out=1.0),
        pathloss=PathLossParams(
            kappa_los=kappa, beta_los=_UWAVE_BETA, kappa_nlos=kappa, beta_nlos=_UWAVE_BETA
        ),
        shadowing=ShadowingParams(
            mu_los_db=0.0, sigma_los_db=4.0, mu_nlos_db=0.0, sigma_nlos_db=4.0
        ),
        bs_antenna=_MMWAVE_BS,
        mt_antenna=_UWAVE_MT,
        system=SystemParams.from_cell_radius(
            tx_power_dbm=30.0,
            bandwidth_hz=40e6,
            noise_figure_db=10.0,
            cell_radius_m=cell_radius_m,
        ),
        outage_enabled=False,
    )


def load_preset(
    name: str,
    outage_variant: str = "corrected",
    cell_radius_m: float = DEFAULT_CELL_RADIUS_M,
) -> Scenario:
    """Build one of the reference scenarios.

    ``outage_variant`` selects the mmWave outage-parameter interpretation
    (ignored for the outage-free micro-wave preset).  ``cell_radius_m``
    sets the deployment density via density = 1 / (pi * radius^2).
    """
    if name == "mmwave-28":
        return _mmwave_scenario("mmwave-28", 61.4, 2.0, 72.0, 2.92, outage_variant, cell_radius_m)
    if name == "mmwave-73":
        return _mmwave_scenario("mmwave-73", 69.8, 2.0, 82.7, 2.69, outage_variant, cell_radius_m)
    if name == "uwave-2.5":
        return _uwave_scenario(cell_radius_m)
    raise ParameterError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
