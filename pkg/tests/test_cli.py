import copy
import csv
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
import yaml

import lindloc.cli as cli
from lindloc.cli import (
    RunConfig,
    _set_by_path,
    build_system,
    dump_config,
    initial_state,
    load_config,
    make_generator,
)
from lindloc.errors import ConfigError
from lindloc.liouvillian import product_gibbs
from lindloc.models import TwoQubitParams, two_qubit_model
from lindloc.thermo import ThermoReport

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

INV_2PI = 0.15915494309189535


def base_dict(**overrides):
    data = {
        "model": {
            "builder": "two_qubit",
            "params": {
                "e1": 1.0,
                "e2": 1.0,
                "alpha": 0.01,
                "beta_coupling": 0.01,
                "t1": 2.0,
                "t2": 1.0,
            },
        },
        "generator": "modified",
        "solver": {"dt": 0.02, "t_max": 200.0, "record_stride": 400},
    }
    data.update(overrides)
    return data


def write_yaml(tmp_path, data, name="run.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "lindloc", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=300,
    )


# -- config loading and validation ------------------------------------------------


def test_bundled_configs_load_and_round_trip():
    paths = sorted(CONFIG_DIR.glob("*.yaml"))
    assert len(paths) == 6
    for path in paths:
        cfg = load_config(path)
        again = RunConfig.from_dict(yaml.safe_load(dump_config(cfg)))
        assert again == cfg, path.name


def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigError, match="config.*'extra'"):
        RunConfig.from_dict(base_dict(extra=1))
    data = base_dict()
    data["model"]["params"]["rate"] = 1.0
    with pytest.raises(ConfigError, match=r"model\.params.*'rate'"):
        RunConfig.from_dict(data)
    data = base_dict()
    data["solver"]["steps"] = 10
    with pytest.raises(ConfigError, match=r"solver.*'steps'"):
        RunConfig.from_dict(data)


def test_missing_required_key_names_the_path():
    data = base_dict()
    del data["model"]["params"]["t1"]
    with pytest.raises(ConfigError, match=r"model\.params\.t1: missing"):
        RunConfig.from_dict(data)
    data = base_dict()
    del data["solver"]["dt"]
    with pytest.raises(ConfigError, match=r"solver\.dt: missing"):
        RunConfig.from_dict(data)


def test_builder_and_explicit_are_exclusive():
    data = base_dict()
    data["model"]["explicit"] = {}
    with pytest.raises(ConfigError, match="exactly one"):
        RunConfig.from_dict(data)
    data = base_dict()
    del data["model"]["builder"]
    with pytest.raises(ConfigError, match="exactly one"):
        RunConfig.from_dict(data)


def test_type_errors_name_the_path():
    data = base_dict()
    data["model"]["params"]["t1"] = "hot"
    with pytest.raises(ConfigError, match=r"model\.params\.t1: expected a number"):
        RunConfig.from_dict(data)
    data = base_dict()
    data["solver"]["record_stride"] = 1.5
    with pytest.raises(ConfigError, match=r"solver\.record_stride: expected an integer"):
        RunConfig.from_dict(data)
    data = base_dict(generator="secular")
    with pytest.raises(ConfigError, match="generator"):
        RunConfig.from_dict(data)
    data = base_dict()
    data["model"]["initial_state"] = "vacuum"
    with pytest.raises(ConfigError, match="initial_state"):
        RunConfig.from_dict(data)


def explicit_dict(b2_scale=INV_2PI, alpha=0.01):
    qubit = {"real": [[0.5, 0.0], [0.0, -0.5]]}
    sx = {"real": [[0.0, 1.0], [1.0, 0.0]]}
    sxsx = {
        "real": [
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ]
    }
    flat = {"kind": "flat", "coupling_scale": INV_2PI}
    return {
        "model": {
            "explicit": {
                "subsystems": [
                    {"label": "q1", "hamiltonian": qubit},
                    {"label": "q2", "hamiltonian": qubit},
                ],
                "interactions": [sxsx],
                "alpha": alpha,
                "beta_coupling": 0.01,
                "baths": [
                    {"label": "b1", "temperature": 2.0, "coupling": sx, "spectral": flat},
                    {
                        "label": "b2",
                        "temperature": 1.0,
                        "coupling": sx,
                        "spectral": {"kind": "flat", "coupling_scale": b2_scale},
                    },
                ],
            }
        },
        "solver": {"dt": 0.02, "t_max": 200.0, "record_stride": 400},
    }


def test_explicit_model_matches_builder():
    explicit = RunConfig.from_dict(explicit_dict())
    builder = two_qubit_model(TwoQubitParams())
    spec = build_system(explicit)
    assert np.array_equal(spec.free_hamiltonian(), builder.free_hamiltonian())
    assert np.array_equal(spec.interaction_sum(), builder.interaction_sum())
    gen_a = make_generator(explicit, spec)
    gen_b = make_generator(explicit, builder)
    assert np.array_equal(gen_a.superop, gen_b.superop)


def test_explicit_model_validation_paths():
    data = explicit_dict()
    del data["model"]["explicit"]["baths"][0]["temperature"]
    with pytest.raises(ConfigError, match=r"model\.explicit\.baths\[0\]\.temperature"):
        RunConfig.from_dict(data)
    data = explicit_dict()
    data["model"]["explicit"]["subsystems"][0]["hamiltonian"] = {
        "real": [[0.0, 1.0], [0.0, 0.0]]
    }
    with pytest.raises(ConfigError, match="Hermitian"):
        RunConfig.from_dict(data)
    data = explicit_dict()
    data["model"]["explicit"]["interactions"][0]["real"] = [[0.0, 1.0]]
    with pytest.raises(ConfigError, match="square"):
        RunConfig.from_dict(data)


def test_initial_state_kinds():
    cfg = RunConfig.from_dict(base_dict())
    gen = make_generator(cfg)
    assert np.array_equal(initial_state(cfg, gen), np.eye(4) / 4)

    data = base_dict()
    data["model"]["initial_state"] = "ground"
    cfg = RunConfig.from_dict(data)
    # the lowest level of the resonant pair has both qubits de-excited
    assert np.allclose(initial_state(cfg, gen), np.diag([0.0, 0.0, 0.0, 1.0]), atol=1e-15)

    data = base_dict()
    data["model"]["initial_state"] = "gibbs_product"
    cfg = RunConfig.from_dict(data)
    assert np.allclose(initial_state(cfg, gen), product_gibbs(gen.spec), atol=1e-15)

    data = base_dict()
    data["model"]["initial_state"] = {
        "real": [[0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    }
    cfg = RunConfig.from_dict(data)
    assert np.array_equal(initial_state(cfg, gen), np.diag([0.5, 0.5, 0.0, 0.0]))


def test_initial_state_matrix_shape_check():
    data = base_dict()
    data["model"]["initial_state"] = {"real": [[1.0, 0.0], [0.0, 0.0]]}
    cfg = RunConfig.from_dict(data)
    gen = make_generator(cfg)
    with pytest.raises(ConfigError, match="does not match dimension"):
        initial_state(cfg, gen)


def test_set_by_path():
    data = base_dict(sweep={"parameter": "model.params.t1", "values": [1.0]})
    cfg = RunConfig.from_dict(data)
    d = cfg.to_dict()
    _set_by_path(d, "model.params.t1", 3.0)
    assert d["model"]["params"]["t1"] == 3.0
    with pytest.raises(ConfigError, match="no key"):
        _set_by_path(d, "model.params.zeta", 1.0)
    with pytest.raises(ConfigError, match="cannot descend"):
        _set_by_path(d, "model.params.t1.deeper", 1.0)

    ex = explicit_dict()
    _set_by_path(ex, "model.explicit.baths.1.temperature", 4.0)
    assert ex["model"]["explicit"]["baths"][1]["temperature"] == 4.0
    with pytest.raises(ConfigError, match="out of range"):
        _set_by_path(ex, "model.explicit.baths.7.temperature", 4.0)
    with pytest.raises(ConfigError, match="list index"):
        _set_by_path(ex, "model.explicit.baths.first.temperature", 4.0)


def test_sweep_validation():
    data = base_dict(sweep={"parameter": "model.params.t1", "values": []})
    with pytest.raises(ConfigError, match="at least one value"):
        RunConfig.from_dict(data)
    data = base_dict(sweep={"values": [1.0]})
    with pytest.raises(ConfigError, match=r"sweep\.parameter"):
        RunConfig.from_dict(data)


# -- command functions ---------------------------------------------------------------


def fake_reports(n, ok):
    rep = ThermoReport(
        q_dot=(0.0, 0.0),
        e_dot=0.0,
        s_dot=0.0,
        first_law_residual=0.0,
        entropy_production=0.0 if ok else -1.0,
        spohn_lhs=0.0,
        spohn_rhs=0.0,
        spohn_residual=0.0,
        second_law_ok=ok,
    )
    return [rep] * n


def patched_audit(ok):
    def _fake(gen, traj, baths=None):
        reports = fake_reports(len(traj), ok)
        traj.reports = reports
        return reports

    return _fake


def test_simulate_exit_two_on_asserted_violation(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "audit_trajectory", patched_audit(ok=False))
    cfg = RunConfig.from_dict(base_dict())
    assert cli.cmd_simulate(cfg, tmp_path / "o") == 2
    # the naive generator only reports; it does not assert
    cfg = RunConfig.from_dict(base_dict(generator="naive"))
    assert cli.cmd_simulate(cfg, tmp_path / "o2") == 0


def test_compare_exit_two_on_asserted_violation(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "audit_trajectory", patched_audit(ok=False))
    cfg = RunConfig.from_dict(base_dict())
    assert cli.cmd_compare(cfg, tmp_path / "o") == 2
    report = (tmp_path / "o" / "compare_report.txt").read_text()
    assert "VIOLATED" in report


def test_simulate_exit_zero_when_clean(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "audit_trajectory", patched_audit(ok=True))
    cfg = RunConfig.from_dict(base_dict())
    assert cli.cmd_simulate(cfg, tmp_path / "o") == 0


def test_sweep_requires_sweep_section(tmp_path):
    cfg = RunConfig.from_dict(base_dict())
    with pytest.raises(ConfigError, match="sweep"):
        cli.cmd_sweep(cfg, tmp_path / "o")


# -- end-to-end through the real entry point --------------------------------------


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_simulate_end_to_end(tmp_path):
    path = write_yaml(tmp_path, base_dict())
    proc = run_cli("simulate", path, "--out", tmp_path / "out")
    assert proc.returncode == 0, proc.stderr

    header, rows = read_csv(tmp_path / "out" / "trajectory.csv")
    assert header == [
        "t",
        "pop_0",
        "pop_1",
        "pop_2",
        "pop_3",
        "S",
        "e_dot",
        "q_dot_b1",
        "q_dot_b2",
        "first_law_residual",
        "entropy_production",
        "second_law_ok",
    ]
    assert len(rows) == 26  # 10000 steps recorded every 400, plus t = 0
    assert float(rows[0][0]) == 0.0
    assert float(rows[-1][0]) == pytest.approx(200.0)
    for row in rows:
        assert row[-1] == "1"
        assert float(row[10]) >= -1e-9

    report = (tmp_path / "out" / "report.txt").read_text()
    assert "generator: modified" in report
    assert "spectrum diagnostics: PASS" in report
    assert "second law: ok" in report


def test_steady_end_to_end(tmp_path):
    path = write_yaml(tmp_path, base_dict())
    proc = run_cli("steady", path, "--out", tmp_path / "out")
    assert proc.returncode == 0, proc.stderr

    rho = np.loadtxt(tmp_path / "out" / "rho_ss_real.csv", delimiter=",")
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
    assert (tmp_path / "out" / "rho_ss_imag.csv").exists()

    header, rows = read_csv(tmp_path / "out" / "steady_summary.csv")
    assert header[:2] == ["residual", "null_dim"]
    assert len(rows) == 1
    by_col = dict(zip(header, rows[0]))
    assert float(by_col["q_dot_b1"]) == pytest.approx(1.5356402288472635e-05, rel=1e-6)
    assert int(by_col["null_dim"]) == 1
    assert "spohn" in (tmp_path / "out" / "steady_report.txt").read_text()


def test_sweep_end_to_end_deterministic_under_threads(tmp_path):
    data = base_dict(sweep={"parameter": "model.params.t1", "values": [0.5, 1.0, 2.0]})
    path = write_yaml(tmp_path, data)

    proc = run_cli("sweep", path, "--out", tmp_path / "a", "--jobs", 4)
    assert proc.returncode == 0, proc.stderr
    proc = run_cli("sweep", path, "--out", tmp_path / "b", "--jobs", 4)
    assert proc.returncode == 0, proc.stderr
    a = (tmp_path / "a" / "sweep.csv").read_bytes()
    assert a == (tmp_path / "b" / "sweep.csv").read_bytes()

    header, rows = read_csv(tmp_path / "a" / "sweep.csv")
    assert header == ["parameter", "value", "q_dot_b1", "q_dot_b2", "entropy_production", "residual"]
    assert [float(r[1]) for r in rows] == [0.5, 1.0, 2.0]
    q1 = [float(r[2]) for r in rows]
    # current through the first bath flips sign where the temperatures cross
    assert q1[0] < -1e-7
    assert abs(q1[1]) < 1e-12
    assert q1[2] > 1e-7


def test_compare_end_to_end(tmp_path):
    path = write_yaml(tmp_path, base_dict())
    proc = run_cli("compare", path, "--out", tmp_path / "out")
    assert proc.returncode == 0, proc.stderr

    header, rows = read_csv(tmp_path / "out" / "compare.csv")
    assert header[0] == "t"
    mod_res = max(abs(float(r[3])) for r in rows)
    naive_res = max(abs(float(r[4])) for r in rows)
    assert mod_res <= 1e-10
    assert naive_res > 1e-9
    assert "modified second law: ok" in (tmp_path / "out" / "compare_report.txt").read_text()


def test_dump_config_round_trips(tmp_path):
    path = write_yaml(tmp_path, base_dict())
    proc = run_cli("simulate", path, "--dump-config")
    assert proc.returncode == 0, proc.stderr
    assert yaml.safe_load(proc.stdout) == load_config(path).to_dict()


def test_error_exits_are_one(tmp_path):
    proc = run_cli("simulate", tmp_path / "missing.yaml")
    assert proc.returncode == 1
    assert "lindloc: error:" in proc.stderr

    bad = tmp_path / "bad.yaml"
    bad.write_text("model: [unclosed", encoding="utf-8")
    proc = run_cli("simulate", bad)
    assert proc.returncode == 1
    assert "invalid YAML" in proc.stderr

    data = base_dict()
    del data["model"]["params"]["t2"]
    proc = run_cli("steady", write_yaml(tmp_path, data, "incomplete.yaml"))
    assert proc.returncode == 1
    assert "model.params.t2" in proc.stderr

    proc = run_cli()
    assert proc.returncode == 1

    proc = run_cli("simulate", write_yaml(tmp_path, base_dict()), "--jobs", 0)
    assert proc.returncode == 1
    assert "--jobs" in proc.stderr


def test_degenerate_steady_state_exits_one(tmp_path):
    data = explicit_dict(b2_scale=0.0, alpha=0.0)
    del data["model"]["explicit"]["interactions"]
    path = write_yaml(tmp_path, data, "degenerate.yaml")
    proc = run_cli("steady", path, "--out", tmp_path / "out")
    assert proc.returncode == 1
    assert "not unique" in proc.stderr
    assert "dimension 2" in proc.stderr


def test_bad_log_level_exits_one(tmp_path):
    import os

    env = dict(os.environ, LINDLOC_LOG="chatty")
    proc = subprocess.run(
        [sys.executable, "-m", "lindloc", "steady", str(write_yaml(tmp_path, base_dict()))],
        capture_output=True,
        text=True,
        env=env,
        timeout=120,
    )
    assert proc.returncode == 1
    assert "LINDLOC_LOG" in proc.stderr


def test_config_dataclass_round_trip_identity():
    for overrides in (
        {},
        {"generator": "naive"},
        {"output": {"directory": "elsewhere", "formats": ["report"]}},
        {"sweep": {"parameter": "model.params.alpha", "values": [0.0, 0.01]}},
    ):
        data = base_dict(**copy.deepcopy(overrides))
        cfg = RunConfig.from_dict(copy.deepcopy(data))
        assert RunConfig.from_dict(cfg.to_dict()) == cfg
