"""Scenario files: flat ``key = value`` text with units in the key names.

The same key set doubles as the JSON object accepted by the HTTP service,
so a scenario prepared for the CLI can be posted verbatim.  Unknown keys
are rejected rather than ignored; a typo must never silently fall back to
a default.
"""

from __future__ import annotations

import hashlib
import math
from typing import Mapping

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


class ScenarioFileError(ParameterError):
    """Raised for malformed scenario files or mappings."""


_FLOAT_KEYS = {
    "tx_power_dbm",
    "bandwidth_hz",
    "noise_figure_db",
    "avg_cell_radius_m",
    "density_per_m2",
    "delta_los_per_m",
    "gamma_los",
    "delta_out_per_m",
    "gamma_out",
    "alpha_los_db",
    "kappa_los_per_m",
    "beta_los",
    "alpha_nlos_db",
    "kappa_nlos_per_m",
    "beta_nlos",
    "mu_los_db",
    "sigma_los_db",
    "mu_nlos_db",
    "sigma_nlos_db",
    "bs_gain_max_db",
    "bs_gain_min_db",
    "bs_beamwidth_deg",
    "mt_gain_max_db",
    "mt_gain_min_db",
    "mt_beamwidth_deg",
    "min_link_distance_m",
}
_BOOL_KEYS = {"outage_enabled"}
_STR_KEYS = {"name"}
KNOWN_KEYS = _FLOAT_KEYS | _BOOL_KEYS | _STR_KEYS


def _as_float(key: str, value: object) -> float:
    if isinstance(value, bool):
        raise ScenarioFileError(f"{key}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value).strip())
    except ValueError:
        raise ScenarioFileError(f"{key}: expected a number, got {value!r}") from None


def _as_bool(key: str, value: object) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1", "yes"):
        return True
    if text in ("false", "0", "no"):
        return False
    raise ScenarioFileError(f"{key}: expected true/false, got {value!r}")


def _pick_one(data: dict, key_a: str, key_b: str) -> tuple[str, object]:
    if key_a in data and key_b in data:
        raise ScenarioFileError(f"give exactly one of {key_a} / {key_b}, not both")
    if key_a in data:
        return key_a, data.pop(key_a)
    if key_b in data:
        return key_b, data.pop(key_b)
    raise ScenarioFileError(f"missing required key: one of {key_a} / {key_b}")


def _require(data: dict, key: str) -> object:
    if key not in data:
        raise ScenarioFileError(f"missing required key {key}")
    return data.pop(key)


def _state_pathloss(data: dict, state: str) -> tuple[float, float]:
    beta = _as_float(f"beta_{state}", _require(data, f"beta_{state}"))
    key, raw = _pick_one(data, f"alpha_{state}_db", f"kappa_{state}_per_m")
    value = _as_float(key, raw)
    if key.startswith("alpha"):
        return kappa_from_alpha(value, beta), beta
    return value, beta


def scenario_from_mapping(mapping: Mapping[str, object]) -> Scenario:
    """Build a :class:`Scenario` from the flat key set (file or JSON form)."""
    data = dict(mapping)
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise ScenarioFileError(f"unknown keys: {', '.join(unknown)}")

    name = str(data.pop("name", "custom"))
    outage_enabled = _as_bool("outage_enabled", _require(data, "outage_enabled"))

    if outage_enabled:
        delta_out = _as_float("delta_out_per_m", _require(data, "delta_out_per_m"))
        gamma_out = _as_float("gamma_out", _require(data, "gamma_out"))
    else:
        for key in ("delta_out_per_m", "gamma_out"):
            if key in data:
                raise ScenarioFileError(f"{key} is only meaningful with outage_enabled = true")
        delta_out, gamma_out = 0.0, 1.0

    blockage = BlockageParams(
        delta_los=_as_float("delta_los_per_m", _require(data, "delta_los_per_m")),
        gamma_los=_as_float("gamma_los", _require(data, "gamma_los")),
        delta_out=delta_out,
        gamma_out=gamma_out,
    )

    kappa_los, beta_los = _state_pathloss(data, "los")
    kappa_nlos, beta_nlos = _state_pathloss(data, "nlos")
    pathloss = PathLossParams(
        kappa_los=kappa_los, beta_los=beta_los, kappa_nlos=kappa_nlos, beta_nlos=beta_nlos
    )

    shadowing = ShadowingParams(
        mu_los_db=_as_float("mu_los_db", _require(data, "mu_los_db")),
        sigma_los_db=_as_float("sigma_los_db", _require(data, "sigma_los_db")),
        mu_nlos_db=_as_float("mu_nlos_db", _require(data, "mu_nlos_db")),
        sigma_nlos_db=_as_float("sigma_nlos_db", _require(data, "sigma_nlos_db")),
    )

    antennas = {}
    for side in ("bs", "mt"):
        antennas[side] = AntennaPattern(
            g_max_db=_as_float(f"{side}_gain_max_db", _require(data, f"{side}_gain_max_db")),
            g_min_db=_as_float(f"{side}_gain_min_db", _require(data, f"{side}_gain_min_db")),
            omega_rad=math.radians(
                _as_float(f"{side}_beamwidth_deg", _require(data, f"{side}_beamwidth_deg"))
            ),
        )

    tx_power_dbm = _as_float("tx_power_dbm", _require(data, "tx_power_dbm"))
    bandwidth_hz = _as_float("bandwidth_hz", _require(data, "bandwidth_hz"))
    noise_figure_db = _as_float("noise_figure_db", _require(data, "noise_figure_db"))
    density_key, raw = _pick_one(data, "avg_cell_radius_m", "density_per_m2")
    if density_key == "avg_cell_radius_m":
        system = SystemParams.from_cell_radius(
            tx_power_dbm, bandwidth_hz, noise_figure_db, _as_float(density_key, raw)
        )
    else:
        system = SystemParams(
            tx_power_dbm, bandwidth_hz, noise_figure_db, _as_float(density_key, raw)
        )

    min_link = _as_float("min_link_distance_m", data.pop("min_link_distance_m", 1.0))
    assert not data

    return Scenario(
        name=name,
        blockage=blockage,
        pathloss=pathloss,
        shadowing=shadowing,
        bs_antenna=antennas["bs"],
        mt_antenna=antennas["mt"],
        system=system,
        outage_enabled=outage_enabled,
        min_link_distance_m=min_link,
    )


def parse_mapping_text(text: str) -> dict[str, str]:
    """``key = value`` lines (with ``#`` comments) to a raw string mapping."""
    data: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioFileError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in data:
            raise ScenarioFileError(f"line {lineno}: duplicate key {key}")
        data[key] = value
    return data


def parse_scenario_text(text: str) -> Scenario:
    return scenario_from_mapping(parse_mapping_text(text))


def load_scenario_file(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario_text(fh.read())


def canonical_mapping(scenario: Scenario) -> dict[str, str]:
    """Canonical flat representation (linear path-loss form, repr floats).

    Used for saving, for the provenance hash, and as the wire echo of a
    resolved scenario.  Parsing it back reproduces the scenario (density
    round-trips through the cell radius to < 1e-12 relative).
    """
    sc = scenario
    items: dict[str, str] = {"name": sc.name, "outage_enabled": str(sc.outage_enabled).lower()}
    items["tx_power_dbm"] = repr(sc.system.tx_power_dbm)
    items["bandwidth_hz"] = repr(sc.system.bandwidth_hz)
    items["noise_figure_db"] = repr(sc.system.noise_figure_db)
    items["avg_cell_radius_m"] = repr(sc.system.avg_cell_radius_m)
    items["delta_los_per_m"] = repr(sc.blockage.delta_los)
    items["gamma_los"] = repr(sc.blockage.gamma_los)
    if sc.outage_enabled:
        items["delta_out_per_m"] = repr(sc.blockage.delta_out)
        items["gamma_out"] = repr(sc.blockage.gamma_out)
    items["kappa_los_per_m"] = repr(sc.pathloss.kappa_los)
    items["beta_los"] = repr(sc.pathloss.beta_los)
    items["kappa_nlos_per_m"] = repr(sc.pathloss.kappa_nlos)
    items["beta_nlos"] = repr(sc.pathloss.beta_nlos)
    items["mu_los_db"] = repr(sc.shadowing.mu_los_db)
    items["sigma_los_db"] = repr(sc.shadowing.sigma_los_db)
    items["mu_nlos_db"] = repr(sc.shadowing.mu_nlos_db)
    items["sigma_nlos_db"] = repr(sc.shadowing.sigma_nlos_db)
    items["bs_gain_max_db"] = repr(sc.bs_antenna.g_max_db)
    items["bs_gain_min_db"] = repr(sc.bs_antenna.g_min_db)
    items["bs_beamwidth_deg"] = repr(math.degrees(sc.bs_antenna.omega_rad))
    items["mt_gain_max_db"] = repr(sc.mt_antenna.g_max_db)
    items["mt_gain_min_db"] = repr(sc.mt_antenna.g_min_db)
    items["mt_beamwidth_deg"] = repr(math.degrees(sc.mt_antenna.omega_rad))
    items["min_link_distance_m"] = repr(sc.min_link_distance_m)
    return items


def scenario_text(scenario: Scenario) -> str:
    lines = [f"{key} = {value}" for key, value in canonical_mapping(scenario).items()]
    return "\n".join(lines) + "\n"


def save_scenario_file(scenario: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scenario_text(scenario))


def scenario_hash(scenario: Scenario) -> str:
    """sha256 over the canonical text; identifies a parameter set exactly."""
    return hashlib.sha256(scenario_text(scenario).encode("utf-8")).hexdigest()
