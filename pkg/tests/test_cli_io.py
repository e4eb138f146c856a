import json

import numpy as np
import pytest

from harpersync import MapParams, kick_step
from harpersync.cli import main
from harpersync.config import (ConfigError, RunConfig, parse_config,
                               parse_config_file, resolve_eps_axis,
                               resolve_eps_axis_spec)
from harpersync.io import fmt, write_config_echo, write_outputs


def test_classical_defaults():
    cfg = parse_config(["classical", "trajectory", "--tau", "0.3", "--eps", "0.3"])
    assert (cfg.mode, cfg.action) == ("classical", "trajectory")
    assert cfg.ic == (0.5, 0.4, 0.3, 0.5)
    assert cfg.n_total == 1_010_000 and cfg.n_transient == 10_000
    assert cfg.grid_m == 20 and cfg.format == "csv"
    assert cfg.rho_c is None and cfg.workers is None


def test_quantum_defaults_follow_coupling_mode():
    cfg = parse_config(["quantum", "evolve", "--tau", "0.3", "--eps", "0.5"])
    assert cfg.ic == (1, 50) and cfg.coupling == "global"
    local = parse_config(["quantum", "evolve", "--tau", "0.3", "--eps", "0.5",
                          "--coupling", "local"])
    assert local.ic == (1, 20)
    small = parse_config(["quantum", "evolve", "--tau", "0.3", "--eps", "0.5",
                          "--n", "10"])
    assert small.ic == (1, 5)


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# scenario file\ntau=0.1\ng=2.0\nmode=classical\naction=sweep\n")
    cfg = parse_config(["--config", str(path), "--tau", "0.3"])
    assert cfg.tau == 0.3  # flag wins
    assert cfg.g == 2.0  # file beats default
    assert (cfg.mode, cfg.action) == ("classical", "sweep")


def test_config_file_errors(tmp_path):
    bad_key = tmp_path / "a.cfg"
    bad_key.write_text("banana=1\n")
    with pytest.raises(ConfigError, match="banana"):
        parse_config_file(str(bad_key))
    bad_line = tmp_path / "b.cfg"
    bad_line.write_text("tau 0.3\n")
    with pytest.raises(ConfigError, match="key=value"):
        parse_config_file(str(bad_line))
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config_file(str(tmp_path / "missing.cfg"))


@pytest.mark.parametrize("argv,key", [
    (["classical", "sweep"], "tau"),
    (["classical", "explode", "--tau", "0.3"], "action"),
    (["--tau", "0.3"], "mode"),
    (["quantum", "evolve", "--tau", "0.3"], "eps"),
    (["classical", "trajectory", "--tau", "abc", "--eps", "0.3"], "tau"),
    (["classical", "trajectory", "--tau", "0.3", "--eps", "0.3",
      "--ic", "0.5,0.4"], "ic"),
    (["quantum", "evolve", "--tau", "0.3", "--eps", "0.5",
      "--ic", "1.5,3"], "ic"),
    (["quantum", "evolve", "--tau", "0.3", "--eps", "0.5",
      "--ic", "0,3"], "ic"),
    (["classical", "sweep", "--mode", "quantum", "--tau", "0.3"], "mode"),
    (["quantum", "sweep", "--tau", "0.3", "--observables", "dE,SB"],
     "observables"),
    (["classical", "trajectory", "--tau", "0.3", "--eps", "0.3",
      "--n-total", "10", "--n-transient", "10"], "n_total"),
], ids=lambda x: x if isinstance(x, str) else " ".join(x))
def test_invalid_configurations_name_the_key(argv, key):
    with pytest.raises(ConfigError) as exc:
        parse_config(argv)
    assert exc.value.key == key


def test_eps_axis_specs():
    assert np.array_equal(resolve_eps_axis_spec("0:1:0.25"),
                          [0.0, 0.25, 0.5, 0.75, 1.0])
    assert np.array_equal(resolve_eps_axis_spec("0.1,0.2,0.7"), [0.1, 0.2, 0.7])
    for bad in ("0:1", "1:0:0.1", "0:1:-0.1", "0.3,0.2", "0.1,zebra"):
        with pytest.raises(ConfigError):
            resolve_eps_axis_spec(bad)
    classical = parse_config(["classical", "sweep", "--tau", "0.3"])
    axis = resolve_eps_axis(classical)
    assert axis.size == 101 and axis[0] == 0.0
    quantum = parse_config(["quantum", "sweep", "--tau", "0.3"])
    axis = resolve_eps_axis(quantum)
    assert axis.size == 100 and axis[0] == 0.01
    explicit = parse_config(["quantum", "sweep", "--tau", "0.3",
                             "--eps-axis", "0:1:0.5"])
    assert np.array_equal(resolve_eps_axis(explicit), [0.0, 0.5, 1.0])


def test_config_echo_round_trips(tmp_path):
    cfg = parse_config(["classical", "sweep", "--tau", "0.1",
                        "--eps-axis", "0:1:0.25", "--rho-c", "0.0002",
                        "--workers", "2", "--outdir", str(tmp_path)])
    write_config_echo(cfg, str(tmp_path))
    again = parse_config(["--config", str(tmp_path / "config.txt")])
    assert again == cfg


def test_fmt_round_trips_doubles():
    for x in (0.1, 1.0 / 3.0, 1e-300, np.pi, 0.30000000000000004, -2.5e17):
        assert float(fmt(x)) == x
    assert fmt(0.1) == "0.10000000000000001"


def test_write_outputs_edge_cases(tmp_path):
    cfg = RunConfig(mode="classical", action="trajectory", tau=0.3, eps=0.3,
                    outdir=str(tmp_path))
    paths = write_outputs({}, cfg)
    assert [p.split("/")[-1] for p in paths] == ["config.txt"]
    with pytest.raises(ValueError, match="mystery"):
        write_outputs({"mystery": 1}, cfg)


def run_cli(argv):
    code = main(argv)
    assert code == 0
    return code


def test_trajectory_csv_schema(tmp_path):
    out = tmp_path / "t"
    run_cli(["classical", "trajectory", "--tau", "0.3", "--eps", "0.3",
             "--n-total", "3", "--n-transient", "0", "--outdir", str(out)])
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "n,x_a,p_a,x_b,p_b"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "1"
    state = kick_step((0.5, 0.4, 0.3, 0.5), MapParams(tau=0.3, eps=0.3))
    assert first[1:] == [fmt(v) for v in state]


def test_jpd_outputs(tmp_path):
    out = tmp_path / "j"
    run_cli(["classical", "jpd", "--tau", "0.3", "--eps", "0.7",
             "--n-total", "3000", "--n-transient", "100", "--grid-m", "5",
             "--outdir", str(out)])
    for name in ("grid_a", "grid_b", "grid_delta"):
        lines = (out / f"{name}.csv").read_text().splitlines()
        assert lines[0] == "m=5" and len(lines) == 6
        assert all(len(row.split(",")) == 5 for row in lines[1:])
    verdict = json.loads((out / "verdict.json").read_text())
    assert set(verdict) == {"m", "rho_c", "max_delta_rho", "synchronized"}
    assert verdict["rho_c"] == 1e-3  # tau = 0.3 scenario threshold


def test_classical_sweep_outputs(tmp_path):
    out = tmp_path / "s"
    run_cli(["classical", "sweep", "--tau", "0.3", "--eps-axis", "0:0.4:0.1",
             "--n-total", "2000", "--n-transient", "100", "--grid-m", "5",
             "--outdir", str(out)])
    lines = (out / "curve.csv").read_text().splitlines()
    assert lines[0] == "eps,e_int" and len(lines) == 6
    summary = json.loads((out / "summary.json").read_text())
    assert {"kink_eps", "kink_factor", "verdicts", "rho_c"} <= set(summary)
    assert set(summary["verdicts"]) == {"0.3", "0.7"}
    assert set(summary["verdicts"]["0.3"]) == {"max_delta_rho", "rho_c",
                                               "synchronized"}


def test_quantum_sweep_outputs(tmp_path):
    out = tmp_path / "q"
    run_cli(["quantum", "sweep", "--tau", "0.3", "--n", "8", "--kicks", "3",
             "--eps-axis", "0.1,0.2,0.3", "--workers", "1",
             "--outdir", str(out)])
    for stem in ("delta_e", "e_int_norm", "s_a"):
        lines = (out / f"{stem}.csv").read_text().splitlines()
        assert lines[0] == "n,eps=0.1,eps=0.2,eps=0.3"
        assert len(lines) == 5  # header plus kicks 0..3
        assert lines[1].split(",")[0] == "0"
    meta = json.loads((out / "sweep_meta.json").read_text())
    assert meta["kicks"] == 3 and meta["ic"] == [1, 4]
    assert "onset_kick" in meta


def test_quantum_evolve_outputs(tmp_path):
    out = tmp_path / "e"
    run_cli(["quantum", "evolve", "--tau", "0.3", "--eps", "0.5", "--n", "8",
             "--kicks", "4", "--outdir", str(out)])
    lines = (out / "observables.csv").read_text().splitlines()
    assert lines[0] == "n,delta_e,e_a,e_b,e_int,s_a"
    assert len(lines) == 6
    row0 = lines[1].split(",")
    assert row0[0] == "0" and float(row0[4]) == 0.0  # e_int defined 0 pre-kick


def test_mi_map_outputs(tmp_path):
    out = tmp_path / "m"
    run_cli(["quantum", "mi-map", "--tau", "0.3", "--eps", "0.5", "--n", "8",
             "--kicks", "3", "--outdir", str(out)])
    lines = (out / "mi_map.csv").read_text().splitlines()
    assert lines[0] == "n=8" and len(lines) == 9
    meta = json.loads((out / "mi_map.json").read_text())
    assert meta["grid_layout"] == {"rows": "j_B", "columns": "j_A"}
    assert meta["log_base"] == 2.0
    assert 1 <= meta["argmax_j_a"] <= 8 and 1 <= meta["argmax_j_b"] <= 8
    assert meta["max"] >= 0.0


def test_json_format_variants(tmp_path):
    out = tmp_path / "jn"
    run_cli(["classical", "trajectory", "--tau", "0.3", "--eps", "0.3",
             "--n-total", "5", "--n-transient", "1", "--format", "json",
             "--outdir", str(out)])
    obj = json.loads((out / "trajectory.json").read_text())
    assert obj["columns"] == ["n", "x_a", "p_a", "x_b", "p_b"]
    assert obj["start_step"] == 2 and len(obj["states"]) == 4
    out2 = tmp_path / "jn2"
    run_cli(["quantum", "mi-map", "--tau", "0.3", "--eps", "0.5", "--n", "6",
             "--kicks", "2", "--format", "json", "--outdir", str(out2)])
    obj = json.loads((out2 / "mi_map.json").read_text())
    assert len(obj["grid"]) == 6 and len(obj["grid"][0]) == 6


def test_reruns_are_byte_identical(tmp_path):
    out = tmp_path / "rep"
    argv = ["classical", "jpd", "--tau", "0.3", "--eps", "0.7",
            "--n-total", "3000", "--n-transient", "100", "--grid-m", "5",
            "--outdir", str(out)]
    run_cli(argv)
    snapshot = {p.name: p.read_bytes() for p in out.iterdir()}
    assert set(snapshot) == {"config.txt", "grid_a.csv", "grid_b.csv",
                             "grid_delta.csv", "verdict.json"}
    run_cli(argv)
    for p in out.iterdir():
        assert p.read_bytes() == snapshot[p.name]


def test_exit_codes(tmp_path, capsys):
    assert main([]) == 2
    assert "mode" in capsys.readouterr().err
    assert main(["classical", "sweep"]) == 2
    assert "tau" in capsys.readouterr().err
    out = tmp_path / "drift"
    code = main(["quantum", "evolve", "--tau", "0.3", "--eps", "0.5",
                 "--n", "6", "--kicks", "2", "--norm-tol", "1e-30",
                 "--outdir", str(out)])
    assert code == 3
    assert "norm drift" in capsys.readouterr().err
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = main(["classical", "trajectory", "--tau", "0.3", "--eps", "0.3",
                 "--n-total", "3", "--n-transient", "0",
                 "--outdir", str(blocker / "sub")])
    assert code == 3
    assert "i/o failure" in capsys.readouterr().err
