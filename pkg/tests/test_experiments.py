import json
import math

import pytest

from lplab import ConfigError, ExperimentConfig, Report, emit_report, run_experiment


FAST_GRID = {"dimension": 1, "points_per_axis": 2048, "half_extent": 16.0}
FAST_SCALES = {"t_min": 1e-3, "t_max": 100.0, "count": 96}
ONE_SHAPE = {"shapes": ["gaussian_derivative"], "dilations": [1.0, 2.0]}


def fast_config(scenario, **kw):
    base = {
        "scenario": scenario,
        "grid": dict(FAST_GRID),
        "scales": dict(FAST_SCALES),
        "test_family": dict(ONE_SHAPE),
    }
    base.update(kw)
    return ExperimentConfig.from_dict(base)


class TestConfigValidation:
    def test_unknown_scenario(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"scenario": "prop99"})

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"scenario": "cor31", "foo": 1})

    def test_hardy_needs_small_p(self):
        cfg = fast_config("cor31", p=2.0)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_ladder_needs_large_n(self):
        cfg = fast_config("prop23", p=0.5, q=2.0, N=1)
        with pytest.raises(ConfigError, match="N > max"):
            cfg.validate()

    def test_inadmissible_weight_rejected(self):
        cfg = fast_config("prop23", p=2.0, q=2.0, N=2,
                          weight={"kind": "power", "a": 3.5})
        with pytest.raises(ConfigError, match="admissible"):
            cfg.validate()

    def test_unknown_kernel_name(self):
        cfg = fast_config("cor31", p=1.0, phi={"name": "sinc", "params": []})
        with pytest.raises(ConfigError):
            run_experiment(cfg)


class TestScenarios:
    def test_hardy_lower_passes(self):
        rep = run_experiment(fast_config("cor31", p=1.0))
        assert rep.passed
        assert len(rep.rows) == 2
        assert all(math.isfinite(r["ratio"]) and r["ratio"] > 0 for r in rep.rows)

    def test_vanishing_symbol_oracle(self):
        rep = run_experiment(fast_config("thm210", p=2.0, q=2.0, N=2))
        assert rep.passed
        assert rep.diagnostics["max_oracle_gap"] <= 0.02

    def test_ladder_compare_weighted(self):
        rep = run_experiment(fast_config(
            "prop23", p=2.0, q=2.0, N=2, weight={"kind": "power", "a": -0.5}
        ))
        assert rep.passed

    def test_discrete_ladder(self):
        rep = run_experiment(fast_config("prop36", q=2.0, discrete_b=0.95))
        assert rep.passed
        assert all(r["ratio"] <= 0.15 for r in rep.rows)

    def test_synthesis_atoms(self):
        rep = run_experiment(fast_config("lemma33", p=1.0, atom_count=2))
        assert rep.passed
        assert all(s <= 1.5 for s in rep.diagnostics["per_atom_spread"].values())

    def test_constants_audit(self):
        rep = run_experiment(fast_config("constants_audit", N=2))
        assert rep.passed
        assert {r["fname"] for r in rep.rows} == {
            "low_freq_growth", "gradient_scale_sum", "gradient_multiplier_tail",
            "psi_scale_sum", "psi_multiplier_tail",
        }

    def test_hardy_lower_two_dimensional(self):
        # the default grand scale grid is too coarse for 2-d dilation
        # stability at 2%; the config overrides it with a denser range
        rep = run_experiment(ExperimentConfig.from_dict({
            "scenario": "cor31", "p": 1.0,
            "grid": {"dimension": 2, "points_per_axis": 256, "half_extent": 8.0},
            "scales": {"t_min": 1e-3, "t_max": 50.0, "count": 48},
            "grand_scales": {"t_min": 0.0156, "t_max": 16.0, "count": 128},
            "test_family": {"shapes": ["gaussian_derivative", "band_noise"],
                            "dilations": [1.0, 2.0]},
        }))
        assert rep.passed, rep.diagnostics["dilation_spread"]

    def test_vanishing_symbol_two_dimensional(self):
        # gaussian_derivative stays inside this grid's frequency box
        rep = run_experiment(ExperimentConfig.from_dict({
            "scenario": "thm210", "p": 2.0, "q": 2.0, "N": 2,
            "grid": {"dimension": 2, "points_per_axis": 64, "half_extent": 8.0},
            "scales": {"t_min": 1e-3, "t_max": 50.0, "count": 48},
            "test_family": {"shapes": ["gaussian_derivative"], "dilations": [1.0]},
        }))
        assert rep.passed
        assert rep.diagnostics["max_oracle_gap"] <= 0.02

    def test_empty_family_yields_empty_report(self):
        rep = run_experiment(fast_config(
            "cor31", p=1.0, test_family={"shapes": [], "dilations": []}
        ))
        assert rep.rows == []
        assert math.isnan(rep.family_max_ratio)


class TestReports:
    def test_csv_contract_and_determinism(self, tmp_path):
        cfg = fast_config("cor31", p=1.0)
        rep1 = run_experiment(cfg)
        rep2 = run_experiment(fast_config("cor31", p=1.0))
        emit_report(rep1, tmp_path / "a")
        emit_report(rep2, tmp_path / "b")
        csv_a = (tmp_path / "a" / "ratios.csv").read_bytes()
        csv_b = (tmp_path / "b" / "ratios.csv").read_bytes()
        assert csv_a == csv_b
        header = csv_a.decode().splitlines()[0]
        assert header == "fname,lambda,lhs,rhs,ratio"

    def test_json_round_trip(self, tmp_path):
        rep = run_experiment(fast_config("cor31", p=1.0))
        emit_report(rep, tmp_path)
        loaded = Report.from_dict(json.loads((tmp_path / "report.json").read_text()))
        assert loaded == rep

    def test_plotdata_emitted_per_shape(self, tmp_path):
        rep = run_experiment(fast_config("cor31", p=1.0))
        emit_report(rep, tmp_path)
        plot = tmp_path / "plotdata" / "gaussian_derivative.csv"
        assert plot.exists()
        lines = plot.read_text().splitlines()
        assert lines[0] == "lambda,ratio"
        assert len(lines) == 3
