import math

import pytest

from mmwcov import ParameterError, load_preset, load_scenario_file, save_scenario_file
from mmwcov.scenario_io import (
    ScenarioFileError,
    canonical_mapping,
    parse_mapping_text,
    parse_scenario_text,
    scenario_from_mapping,
    scenario_hash,
    scenario_text,
)


def _assert_scenarios_close(a, b, rel=1e-12):
    assert a.name == b.name
    assert a.outage_enabled == b.outage_enabled
    for attr, sub in (
        ("blockage", ("delta_los", "gamma_los", "delta_out", "gamma_out")),
        ("pathloss", ("kappa_los", "beta_los", "kappa_nlos", "beta_nlos")),
        ("shadowing", ("mu_los_db", "sigma_los_db", "mu_nlos_db", "sigma_nlos_db")),
        ("system", ("tx_power_dbm", "bandwidth_hz", "noise_figure_db", "density")),
    ):
        for field in sub:
            va, vb = getattr(getattr(a, attr), field), getattr(getattr(b, attr), field)
            assert va == pytest.approx(vb, rel=rel), f"{attr}.{field}"
    for side in ("bs_antenna", "mt_antenna"):
        for field in ("g_max_db", "g_min_db", "omega_rad"):
            va, vb = getattr(getattr(a, side), field), getattr(getattr(b, side), field)
            assert va == pytest.approx(vb, rel=rel), f"{side}.{field}"


@pytest.mark.parametrize("preset", ["mmwave-28", "mmwave-73", "uwave-2.5"])
def test_save_load_round_trip(tmp_path, preset):
    scenario = load_preset(preset, cell_radius_m=137.0)
    path = tmp_path / "scenario.txt"
    save_scenario_file(scenario, str(path))
    loaded = load_scenario_file(str(path))
    _assert_scenarios_close(scenario, loaded)


def test_alpha_form_matches_kappa_form():
    base = canonical_mapping(load_preset("mmwave-28"))
    alpha_form = dict(base)
    del alpha_form["kappa_los_per_m"], alpha_form["kappa_nlos_per_m"]
    alpha_form["alpha_los_db"] = "61.4"
    alpha_form["alpha_nlos_db"] = "72.0"
    sc = scenario_from_mapping(alpha_form)
    assert sc.pathloss.kappa_los == pytest.approx(10 ** (61.4 / 20.0), rel=1e-12)
    assert sc.pathloss.kappa_nlos == pytest.approx(10 ** (72.0 / 29.2), rel=1e-12)


def test_unknown_key_rejected():
    mapping = canonical_mapping(load_preset("mmwave-28"))
    mapping["tx_powr_dbm"] = "30"  # typo must not be absorbed
    with pytest.raises(ScenarioFileError, match="tx_powr_dbm"):
        scenario_from_mapping(mapping)


def test_missing_key_rejected():
    mapping = canonical_mapping(load_preset("mmwave-28"))
    del mapping["gamma_los"]
    with pytest.raises(ScenarioFileError, match="gamma_los"):
        scenario_from_mapping(mapping)


def test_alpha_and_kappa_together_rejected():
    mapping = canonical_mapping(load_preset("mmwave-28"))
    mapping["alpha_los_db"] = "61.4"
    with pytest.raises(ScenarioFileError, match="exactly one"):
        scenario_from_mapping(mapping)


def test_outage_keys_require_outage_enabled():
    mapping = canonical_mapping(load_preset("uwave-2.5"))
    mapping["gamma_out"] = "2.0"
    with pytest.raises(ScenarioFileError, match="outage_enabled"):
        scenario_from_mapping(mapping)


def test_duplicate_key_rejected():
    with pytest.raises(ScenarioFileError, match="duplicate"):
        parse_mapping_text("tx_power_dbm = 30\ntx_power_dbm = 31\n")


def test_malformed_line_rejected():
    with pytest.raises(ScenarioFileError, match="key = value"):
        parse_mapping_text("this is not a scenario\n")


def test_corrupted_kappa_fails_loudly():
    text = scenario_text(load_preset("mmwave-28"))
    corrupted = text.replace(
        "kappa_los_per_m = 1174.897554939529", "kappa_los_per_m = -1174.897554939529"
    )
    assert corrupted != text
    with pytest.raises(ParameterError, match="kappa_los"):
        parse_scenario_text(corrupted)


def test_comments_and_blank_lines_ignored():
    text = scenario_text(load_preset("mmwave-28"))
    commented = "# header comment\n\n" + text.replace(
        "tx_power_dbm = 30.0", "tx_power_dbm = 30.0  # transmit power"
    )
    _assert_scenarios_close(parse_scenario_text(commented), load_preset("mmwave-28"))


def test_density_key_alternative():
    mapping = canonical_mapping(load_preset("mmwave-28", cell_radius_m=100.0))
    del mapping["avg_cell_radius_m"]
    mapping["density_per_m2"] = repr(1.0 / (math.pi * 100.0**2))
    sc = scenario_from_mapping(mapping)
    assert sc.system.avg_cell_radius_m == pytest.approx(100.0, rel=1e-12)


def test_hash_stable_and_sensitive():
    a = load_preset("mmwave-28")
    assert scenario_hash(a) == scenario_hash(load_preset("mmwave-28"))
    assert scenario_hash(a) != scenario_hash(load_preset("mmwave-28", cell_radius_m=101.0))
    assert scenario_hash(a) != scenario_hash(load_preset("mmwave-28", "as-printed"))
