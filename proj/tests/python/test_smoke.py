import math
import os
import subprocess

import numpy as np
import pytest

import spinbath as sb

BIN = os.environ.get("SPINBATH_BIN")


def small_gue():
    config = sb.ModelConfig()
    config.n_env = 8
    config.k = 1
    config.alpha = 2e-4
    config.coupling_kind = sb.CouplingKind.Gue
    config.seed = 3
    return config


def quick_params():
    params = sb.RunParams()
    params.t_max = 3e4
    params.samples = 256
    return params


def test_combinatorics():
    assert sb.binomial(14, 2) == 91
    assert sb.binomial(14, 3) == 364
    assert sb.subspace_dim(14, 2) == 455
    assert sb.enumerate_band(3, 1) == [1, 2, 4]
    with pytest.raises(sb.DomainError):
        sb.binomial(5, 7)


def test_thermo_predictions():
    assert abs(sb.expected_inversion(14, 2) + 0.6) <= 1e-15
    assert abs(sb.spectral_beta(14, 2) - math.log(4.0)) <= 1e-14
    table = sb.beta_table(14)
    assert len(table) == 14
    assert table[2].inversion == sb.expected_inversion(14, 2)
    for row in table:
        mirror = table[14 - 1 - row.k]
        assert mirror.inversion == -row.inversion


def test_config_round_trip():
    config = small_gue()
    parsed = sb.parse_config_text(sb.config_to_text(config))
    assert parsed.n_env == 8
    assert parsed.seed == 3
    assert parsed.coupling_kind == sb.CouplingKind.Gue
    bad = sb.ModelConfig()
    bad.k = bad.n_env
    with pytest.raises(sb.ConfigError):
        bad.validate()


def test_scenario_runs_and_is_deterministic():
    result = sb.run_scenario(small_gue(), quick_params())
    assert result.resolved_method == sb.Method.Projected
    assert len(result.trajectory) == 256
    sz = result.trajectory.sz
    assert abs(sz[0] - 1.0) <= 1e-12
    assert max(abs(n - 1.0) for n in result.trajectory.norm) <= 1e-10
    assert abs(result.summary.expected - sb.expected_inversion(8, 1)) <= 1e-15
    again = sb.run_scenario(small_gue(), quick_params())
    assert again.summary.z_diag == result.summary.z_diag
    assert again.trajectory.sz == sz


def test_ensemble_values_are_numpy():
    result = sb.ensemble_histogram(small_gue(), 3)
    values = np.asarray(result.values)
    assert values.shape == (3 * sb.subspace_dim(8, 1),)
    assert np.all(np.abs(values) <= 1.0 + 1e-12)
    assert sum(result.hist.counts) == values.size
    assert abs(result.stats.mean - values.mean()) <= 1e-12


@pytest.mark.skipif(BIN is None, reason="SPINBATH_BIN not set")
def test_cli_thermo_table(tmp_path):
    out = subprocess.run(
        [BIN, "thermo-table", "--n-env", "14", "--out-dir", str(tmp_path)],
        capture_output=True, text=True, check=True)
    assert "rows = 14" in out.stdout
    lines = (tmp_path / "thermo_table.csv").read_text().splitlines()
    assert lines[0] == "k,beta,inversion"
    assert len(lines) == 15
    k, beta, inversion = lines[3].split(",")
    assert k == "2"
    assert float(inversion) == -0.6
    assert abs(float(beta) - math.log(4.0)) <= 1e-14


@pytest.mark.skipif(BIN is None, reason="SPINBATH_BIN not set")
def test_cli_evolve_reproducible(tmp_path):
    config = tmp_path / "model.txt"
    config.write_text(sb.config_to_text(small_gue()))
    dirs = [tmp_path / "a", tmp_path / "b"]
    for d in dirs:
        out = subprocess.run(
            [BIN, "evolve", "--config", str(config), "--out-dir", str(d),
             "--tmax", "30000", "--samples", "256"],
            capture_output=True, text=True, check=True)
        assert "z_diag = " in out.stdout
    first = (dirs[0] / "trajectory.csv").read_bytes()
    second = (dirs[1] / "trajectory.csv").read_bytes()
    assert first == second
    manifest = (dirs[0] / "manifest.txt").read_text()
    assert "coupling_kind = gue" in manifest
    assert "z_numeric = " in manifest


@pytest.mark.skipif(BIN is None, reason="SPINBATH_BIN not set")
def test_cli_seed_override_changes_output(tmp_path):
    config = tmp_path / "model.txt"
    config.write_text(sb.config_to_text(small_gue()))
    run = [BIN, "evolve", "--config", str(config), "--out-dir"]
    base = subprocess.run(
        run + [str(tmp_path / "base"), "--tmax", "30000", "--samples", "128"],
        capture_output=True, text=True, check=True)
    other = subprocess.run(
        run + [str(tmp_path / "other"), "--tmax", "30000", "--samples", "128",
               "--seed", "4"],
        capture_output=True, text=True, check=True)
    assert base.stdout != other.stdout


@pytest.mark.skipif(BIN is None, reason="SPINBATH_BIN not set")
def test_cli_missing_config_exit_code(tmp_path):
    out = subprocess.run(
        [BIN, "evolve", "--config", str(tmp_path / "absent.txt")],
        capture_output=True, text=True)
    assert out.returncode == 3
    assert "io error" in out.stderr
