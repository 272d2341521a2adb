import warnings
from dataclasses import replace

import pytest

from mmwcov import ParameterError, load_preset
from mmwcov.params import BlockageParams
from mmwcov.sweeps import SweepGrid, SweepSpec, run_coverage_sweep, run_rate_sweep


def _spec(**overrides):
    defaults = dict(
        scenario=load_preset("mmwave-28", cell_radius_m=100.0),
        sweep="threshold",
        grid=SweepGrid(start=-20.0, stop=40.0, points=4),
        modes=("analytic", "mc_snr_only"),
        n_realizations=400,
        base_seed=7,
    )
    defaults.update(overrides)
    return SweepSpec(**defaults)


class TestGrid:
    def test_linear_values(self):
        assert SweepGrid(0.0, 10.0, 3).values() == [0.0, 5.0, 10.0]

    def test_log_values(self):
        values = SweepGrid(1.0, 100.0, 3, "log").values()
        assert values == pytest.approx([1.0, 10.0, 100.0], rel=1e-12)

    def test_guards(self):
        with pytest.raises(ParameterError):
            SweepGrid(0.0, 1.0, 1)
        with pytest.raises(ParameterError):
            SweepGrid(-1.0, 1.0, 3, "log")
        with pytest.raises(ParameterError):
            SweepGrid(0.0, 1.0, 3, "cubic")


class TestCoverageSweep:
    def test_columns_and_rows(self):
        result = run_coverage_sweep(_spec())
        assert result.columns == [
            "threshold_db",
            "analytic_coverage",
            "analytic_err",
            "mc_snr_only_coverage",
            "mc_snr_only_err",
        ]
        assert len(result.rows) == 4
        assert result.rows[0][0] == -20.0
        assert not result.errors

    def test_analytic_and_mc_agree_loosely(self):
        result = run_coverage_sweep(_spec(n_realizations=3000))
        for row in result.rows:
            analytic, mc, half = row[1], row[3], row[4]
            assert abs(analytic - mc) < 4.0 * max(half, 1e-3)

    def test_csv_deterministic(self):
        a = run_coverage_sweep(_spec()).to_csv()
        b = run_coverage_sweep(_spec()).to_csv()
        assert a == b

    def test_provenance_header(self):
        csv = run_coverage_sweep(_spec()).to_csv()
        assert csv.startswith("# mmwcov")
        assert "# scenario: mmwave-28[corrected] sha256=" in csv
        assert "# monte_carlo: n=400 base_seed=7 ci=95%" in csv
        assert "# tolerances: coverage_epsrel=1e-08" in csv
        assert "# modes: analytic,mc_snr_only" in csv

    def test_radius_sweep_requires_threshold(self):
        with pytest.raises(ParameterError):
            run_coverage_sweep(_spec(sweep="radius", grid=SweepGrid(50.0, 200.0, 3)))

    def test_radius_sweep(self):
        result = run_coverage_sweep(
            _spec(
                sweep="radius",
                grid=SweepGrid(50.0, 150.0, 3),
                modes=("analytic",),
                threshold_db=0.0,
            )
        )
        assert result.columns[0] == "cell_radius_m"
        radii = [row[0] for row in result.rows]
        coverages = [row[1] for row in result.rows]
        assert radii == [50.0, 100.0, 150.0]
        # denser networks cover better at a fixed threshold
        assert coverages[0] > coverages[1] > coverages[2]

    def test_mode_failure_recorded_not_fatal(self):
        sc = load_preset("mmwave-28", cell_radius_m=100.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            broken = replace(
                sc,
                blockage=BlockageParams(
                    delta_los=sc.blockage.delta_los,
                    gamma_los=1.0,
                    delta_out=sc.blockage.delta_out,
                    gamma_out=0.5,  # closed forms reject gamma_out < 1
                ),
            )
        result = run_coverage_sweep(_spec(scenario=broken, n_realizations=200))
        assert result.errors and "gamma_out" in result.errors[0]
        for row in result.rows:
            assert row[1] is None and row[2] is None  # analytic cells
            assert row[3] is not None  # Monte Carlo still fine
        assert ",nan," in result.to_csv()

    def test_bad_modes_rejected(self):
        with pytest.raises(ParameterError):
            _spec(modes=("simulated",))
        with pytest.raises(ParameterError):
            _spec(modes=())


class TestRateSweep:
    def test_rate_decreases_with_radius(self):
        spec = _spec(
            sweep="radius",
            grid=SweepGrid(50.0, 200.0, 3),
            modes=("analytic",),
            normalize=True,
        )
        result = run_rate_sweep(spec)
        assert result.columns == [
            "cell_radius_m",
            "analytic_rate_bps",
            "analytic_err",
            "analytic_rate_normalized",
        ]
        rates = [row[1] for row in result.rows]
        assert rates[0] > rates[1] > rates[2]
        bw = spec.scenario.system.bandwidth_hz
        for row in result.rows:
            assert row[3] == pytest.approx(row[1] / bw, rel=1e-15)

    def test_ratio_column(self):
        spec = _spec(
            sweep="radius",
            grid=SweepGrid(50.0, 200.0, 2),
            modes=("analytic",),
            ratio_scenario=load_preset("uwave-2.5"),
        )
        result = run_rate_sweep(spec)
        assert result.columns[-1] == "analytic_rate_ratio"
        for row in result.rows:
            assert row[-1] is not None and row[-1] > 1.0

    def test_threshold_sweep_rejected(self):
        with pytest.raises(ParameterError):
            run_rate_sweep(_spec(sweep="threshold"))

    def test_mc_rate_column(self):
        spec = _spec(
            sweep="radius",
            grid=SweepGrid(80.0, 120.0, 2),
            modes=("mc_snr_only",),
            n_realizations=400,
        )
        result = run_rate_sweep(spec)
        assert result.columns[1] == "mc_snr_only_rate_bps"
        for row in result.rows:
            assert row[1] is not None and row[1] > 0.0
