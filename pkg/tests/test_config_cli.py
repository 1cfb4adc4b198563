import pytest
from click.testing import CliRunner

from urllc_hma.cli import main
from urllc_hma.config import ConfigError, dump_config, parse_config, parse_text
from urllc_hma.engine import SimConfig
from urllc_hma.slicing import SliceConfig


def test_empty_file_gives_defaults(tmp_path):
    p = tmp_path / "e.conf"
    p.write_text("")
    cfg = parse_config(p, environ={})
    assert cfg == SimConfig()
    assert cfg.learning.alpha == 0.1 and cfg.learning.epsilon == 0.85
    assert cfg.s_tx_dbm == 21.0 and cfg.ns_tx_dbm == 23.0 and cfg.arrival_rate == 0.01


def test_mode_mapping():
    assert parse_text("slicing.mode = NOMA", environ={}).fixed_slice == SliceConfig(0, 0, 5)
    assert parse_text("slicing.mode = HMA", environ={}).fixed_slice is None


@pytest.mark.parametrize("text, needle", [
    ("learning.alpha = 1.5", "alpha"),
    ("sim.bogus = 1", "unknown key sim.bogus"),
    ("sim.n_devices = many", "sim.n_devices"),
    ("# comment\nnot a line", ":2"),
    ("slicing.mode = TDMA", "mode"),
])
def test_parse_errors_name_key_and_line(text, needle):
    with pytest.raises(ConfigError) as e:
        parse_text(text, environ={})
    assert needle in str(e.value)


def test_alpha_error_cites_line():
    with pytest.raises(ConfigError, match=r"<string>:3: learning.alpha: alpha must lie in \(0, 1\]"):
        parse_text("\n# x\nlearning.alpha = 1.5\n", environ={})


def test_env_overrides_file():
    cfg = parse_text("learning.alpha = 0.3", environ={"SIM_LEARNING_ALPHA": "0.2", "SIM_SIM_SEED": "7"})
    assert cfg.learning.alpha == 0.2 and cfg.seed == 7
    with pytest.raises(ConfigError, match="SIM_NOPE_X"):
        parse_text("", environ={"SIM_NOPE_X": "1"})


def test_dump_round_trip():
    cfg = parse_text("slicing.mode = OMA\nsim.eps_ns = 1e-3\nchannel.pl_exponent = 3", environ={})
    assert parse_text(dump_config(cfg), environ={}) == cfg


@pytest.fixture
def small_conf(tmp_path):
    p = tmp_path / "small.conf"
    p.write_text("sim.n_devices = 5\nsim.n_slots_train = 5000\nsim.n_slots_eval = 5000\nsim.eps_ns = 0.01\n")
    return p


def test_cli_validate(small_conf):
    r = CliRunner().invoke(main, ["validate", "--config", str(small_conf), "--show"])
    assert r.exit_code == 0 and "ok" in r.output and "sim.n_devices = 5" in r.output


def test_cli_validate_reports_parse_error(tmp_path):
    p = tmp_path / "bad.conf"
    p.write_text("learning.alpha = 2\n")
    r = CliRunner().invoke(main, ["validate", "--config", str(p)])
    assert r.exit_code != 0 and "learning.alpha" in r.output


def test_cli_run_missing_config():
    r = CliRunner().invoke(main, ["run", "--config", "missing.conf"])
    assert r.exit_code != 0 and "missing.conf" in r.output


def test_cli_unknown_subcommand():
    r = CliRunner().invoke(main, ["frobnicate"])
    assert r.exit_code != 0 and "Usage" in r.output


def test_cli_run_writes_metrics_and_policies(small_conf, tmp_path):
    out = tmp_path / "out"
    pol = tmp_path / "pol.txt"
    r = CliRunner().invoke(main, ["run", "--config", str(small_conf), "--out", str(out),
                                  "--seed", "4", "--export-policies", str(pol)])
    assert r.exit_code == 0, r.output
    text = (out / "metrics.csv").read_text()
    assert text.splitlines()[0].startswith("seed,mode,eps_ns")
    assert text.splitlines()[1].startswith("4,HMA,")
    assert pol.read_text().startswith("[rrp]")


def test_cli_preset_power_alloc(tmp_path):
    r = CliRunner().invoke(main, ["preset", "power_alloc", "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    assert sorted(p.name for p in tmp_path.iterdir()) == ["power_alloc_psd-164.csv", "power_alloc_psd-172.csv"]


def test_cli_preset_unknown():
    r = CliRunner().invoke(main, ["preset", "nope"])
    assert r.exit_code != 0
