import numpy as np
import pytest

from asdnlms.cli import main
from asdnlms.config import ConfigError, format_config, parse_config_file, parse_config_text
from asdnlms.presets import BETA_RATIOS, PRESET_NAMES, expand_preset
from conftest import make_config

GOOD_CONFIG = """
# small smoke-test run
topology.kind = random_geometric
topology.V = 6
topology.radius = 0.6
env.M = 4
env.sigma2_v_min = 0.1
env.sigma2_v_max = 0.4
env.nu = 0.2
env.delta = 1e-5
policy.kind = as_sampling
policy.beta = 0.68
policy.mu_s = 0.1571
policy.alpha_plus = 4.0
run.iterations = 120
run.realizations = 2
run.seed = 5
"""


class TestConfigParsing:
    def test_good_config(self):
        cfg = parse_config_text(GOOD_CONFIG)
        assert cfg.topology.V == 6
        assert cfg.policy.beta == 0.68
        assert cfg.iterations == 120

    def test_round_trip(self):
        cfg = make_config(kind="as_censoring", V=7, M=6, iterations=90, seed=2)
        again = parse_config_text(format_config(cfg))
        assert again == cfg

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text(GOOD_CONFIG + "\nrun.warp_speed = 9\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text(GOOD_CONFIG + "\nrun.seed = 6\n")

    def test_missing_policy_kind(self):
        with pytest.raises(ConfigError, match="policy.kind"):
            parse_config_text("run.iterations = 10\n")

    def test_bad_value(self):
        with pytest.raises(ConfigError, match="bad value"):
            parse_config_text(GOOD_CONFIG.replace("run.seed = 5", "run.seed = five"))

    def test_policy_params_enforced(self):
        text = GOOD_CONFIG.replace("policy.kind = as_sampling", "policy.kind = full")
        with pytest.raises(ConfigError, match="does not take"):
            parse_config_text(text)

    def test_malformed_line(self):
        with pytest.raises(ConfigError, match="expected"):
            parse_config_text("topology.kind random_geometric\n")

    def test_per_node_profiles(self):
        text = GOOD_CONFIG + "env.sigma2_v = 0.1,0.2,0.3,0.4,0.2,0.1\n"
        cfg = parse_config_text(text)
        assert cfg.env.sigma2_v == (0.1, 0.2, 0.3, 0.4, 0.2, 0.1)

    def test_profile_length_mismatch(self):
        text = GOOD_CONFIG + "env.sigma2_v = 0.1,0.2\n"
        with pytest.raises(ConfigError, match="length"):
            parse_config_text(text)

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            parse_config_file("does/not/exist.cfg")


class TestPresets:
    def test_names(self):
        assert set(PRESET_NAMES) == {"fig_msd_cost", "fig_beta_sweep", "fig_censoring"}

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="unknown preset"):
            expand_preset("fig_nothing")

    def test_beta_sweep_coverage(self):
        configs = expand_preset("fig_beta_sweep")
        ratios = sorted(c.policy.beta / 0.4 for c in configs)
        assert ratios == pytest.approx(sorted(BETA_RATIOS))
        assert all(c.env.flip_iteration is None for c in configs)

    def test_defaults_embedded(self):
        for name in PRESET_NAMES:
            for cfg in expand_preset(name):
                assert cfg.env.nu == 0.2
                assert cfg.env.delta == 1e-5
                assert cfg.env.M == 50
                assert cfg.realizations == 100
                assert cfg.iterations == 20000
                if cfg.policy.kind in ("as_sampling", "as_censoring"):
                    assert cfg.policy.alpha_plus == 4.0
                    assert cfg.policy.mu_s == 0.1571
                    if name != "fig_beta_sweep":
                        assert cfg.policy.beta == 0.68

    def test_msd_cost_variants(self):
        labels = [c.name() for c in expand_preset("fig_msd_cost")]
        assert labels == ["dnlms_full", "as_dnlms", "random_Vs5", "random_Vs10", "random_Vs15"]
        assert all(c.env.flip_iteration == 10000 for c in expand_preset("fig_msd_cost"))

    def test_censoring_variants(self):
        kinds = {c.policy.kind for c in expand_preset("fig_censoring")}
        assert kinds == {"full", "as_sampling", "as_censoring",
                         "probabilistic_transmission", "non_cooperative"}

    def test_overrides(self):
        configs = expand_preset("fig_censoring", seed=9, realizations=3, iterations=500)
        assert all(c.seed == 9 and c.realizations == 3 and c.iterations == 500 for c in configs)
        assert all(c.env.flip_iteration == 250 for c in configs)


class TestCli:
    def test_validate_ok(self, tmp_path, capsys):
        path = tmp_path / "run.cfg"
        path.write_text(GOOD_CONFIG)
        assert main(["validate", "--config", str(path)]) == 0
        assert "ok" in capsys.readouterr().out

    def test_validate_rejects(self, tmp_path, capsys):
        path = tmp_path / "run.cfg"
        path.write_text(GOOD_CONFIG + "\nrun.comm_unit = bogus\n")
        assert main(["validate", "--config", str(path)]) == 1
        assert "error" in capsys.readouterr().err

    def test_run_missing_config(self, capsys):
        assert main(["run", "--config", "missing.cfg"]) == 1
        assert "not found" in capsys.readouterr().err

    def test_run_writes_outputs(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(GOOD_CONFIG)
        out = tmp_path / "results"
        assert main(["run", "--config", str(path), "--out", str(out)]) == 0
        csv = (out / "as_sampling.csv").read_text().splitlines()
        assert csv[0] == "n,msd_db,msd_db_smoothed,sampled,comms,mults,adds"
        assert len(csv) == 121
        manifest = (out / "as_sampling.manifest.txt").read_text()
        assert "predicted.Vs_upper" in manifest

    def test_env_var_overrides_out_dir(self, tmp_path, monkeypatch):
        path = tmp_path / "run.cfg"
        path.write_text(GOOD_CONFIG)
        target = tmp_path / "env_results"
        monkeypatch.setenv("ASDNLMS_OUT", str(target))
        assert main(["run", "--config", str(path)]) == 0
        assert (target / "as_sampling.csv").exists()

    def test_predict_output(self, capsys):
        rc = main([
            "predict", "--V", "20", "--beta", "0.68",
            "--sigma2-min", "0.1", "--sigma2-max", "0.4",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "Vs_lower = 2.9412" in out
        assert "Vs_upper = 11.7647" in out

    def test_predict_inadmissible(self, capsys):
        rc = main([
            "predict", "--V", "20", "--beta", "0.3",
            "--sigma2-min", "0.1", "--sigma2-max", "0.4",
        ])
        assert rc == 1

    def test_preset_tiny_censoring(self, tmp_path):
        out = tmp_path / "figs"
        rc = main(["preset", "fig_censoring", "--seed", "3", "--realizations", "1",
                   "--iterations", "200", "--out", str(out)])
        assert rc == 0
        names = sorted(p.name for p in out.glob("*.csv"))
        assert names == ["as_dnlms.csv", "as_dnlms_censoring.csv", "dnlms_full.csv",
                         "non_cooperative.csv", "pt_dnlms.csv"]

    def test_preset_beta_sweep_writes_bounds(self, tmp_path):
        out = tmp_path / "sweep"
        rc = main(["preset", "fig_beta_sweep", "--seed", "3", "--realizations", "1",
                   "--iterations", "150", "--out", str(out)])
        assert rc == 0
        bounds = (out / "bounds.csv").read_text().splitlines()
        assert bounds[0] == "beta_ratio,beta,vs_lower,vs_upper,measured_steady_sampled"
        assert len(bounds) == 1 + len(BETA_RATIOS)

    def test_unwritable_out_dir_is_runtime_error(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a dir")
        path = tmp_path / "run.cfg"
        path.write_text(GOOD_CONFIG)
        rc = main(["run", "--config", str(path), "--out", str(blocker / "nested")])
        assert rc == 2
