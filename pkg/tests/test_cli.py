"""End-to-end CLI behaviour: config parsing, CSV outputs, verify table."""

import json
import re
import subprocess
import sys

import numpy as np
import pytest

from ringspdc.cli import (
    VLF_CSV_COLUMNS,
    config_hash,
    load_config,
    load_figure_manifest,
    main,
    parse_config,
    parse_profile_token,
    run_verify,
)
from ringspdc.gaussian import covariance_at, covariance_from_csv
from ringspdc.model import ArrayConfig, ConfigError, PumpProfile

AFFINE_TOL = 1e-12


def write_config(tmp_path, name="config.json", **overrides):
    data = {
        "n_modes": 4,
        "coupling_per_mm": 0.45,
        "eta_per_mm": 0.015,
        "pump_profile": "r0",
        "z_max_mm": 20.0,
        "z_steps": 9,
    }
    data.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def read_vlf(path):
    """Split a sweep CSV into (meta dict, list of row dicts)."""
    meta, rows = {}, []
    columns = None
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif columns is None:
            columns = line.split(",")
            assert line == VLF_CSV_COLUMNS
        else:
            rows.append(dict(zip(columns, line.split(","))))
    return meta, rows


# ---------------------------------------------------------------------------
# config parsing


def test_parse_profile_tokens():
    assert parse_profile_token("r0").kind == "uniform"
    assert parse_profile_token("rN2").kind == "alternating_pi"
    assert parse_profile_token("rN4").kind == "alternating_half_pi"
    assert parse_profile_token("general:3").shift == 3
    assert parse_profile_token({"custom_phases_rad": [0.0, 1.0]}).kind == "custom"


def test_parse_profile_rejects_junk():
    with pytest.raises(ConfigError, match="unknown pump profile"):
        parse_profile_token("rN8")
    with pytest.raises(ConfigError, match="bad shift"):
        parse_profile_token("general:x")
    with pytest.raises(ConfigError, match="custom_phases_rad"):
        parse_profile_token({"phases": [1.0]})


def test_parse_config_rejects_unknown_and_missing_keys():
    with pytest.raises(ConfigError, match="unknown config keys: couplign_per_mm"):
        parse_config({"couplign_per_mm": 0.45})
    with pytest.raises(ConfigError, match="missing config keys"):
        parse_config({"n_modes": 4})


def test_load_config_round_trip(tmp_path):
    cfg = load_config(write_config(tmp_path))
    assert cfg == ArrayConfig(
        n_modes=4, coupling=0.45, eta_mag=0.015, pump=PumpProfile.uniform(), z_steps=9
    )


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.json")


def test_config_hash_is_sha256_and_order_free():
    a = ArrayConfig(n_modes=4, coupling=0.45, eta_mag=0.015, pump=PumpProfile.uniform())
    b = ArrayConfig(n_modes=4, coupling=0.45, eta_mag=0.015, pump=PumpProfile.uniform())
    c = ArrayConfig(n_modes=8, coupling=0.45, eta_mag=0.015, pump=PumpProfile.uniform())
    assert re.fullmatch(r"[0-9a-f]{64}", config_hash(a))
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(c)


# ---------------------------------------------------------------------------
# covariance subcommand


def test_covariance_command_writes_matching_csv(tmp_path):
    config_path = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["covariance", "--config", str(config_path), "--out", str(out)]) == 0
    full = out / "covariance_r0.csv"
    display = out / "covariance_r0_display.csv"
    assert full.exists() and display.exists()
    parsed, meta = covariance_from_csv(full)
    expected = covariance_at(load_config(config_path), 20.0)
    assert np.array_equal(parsed.matrix, expected.matrix)
    assert parsed.z == 20.0
    assert re.fullmatch(r"[0-9a-f]{64}", meta["config_hash"])
    assert meta["route"] == "auto"


def test_covariance_reruns_are_byte_identical(tmp_path):
    config_path = write_config(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    main(["covariance", "--config", str(config_path), "--out", str(out_a)])
    main(["covariance", "--config", str(config_path), "--out", str(out_b)])
    for name in ("covariance_r0.csv", "covariance_r0_display.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_covariance_display_rn2_keeps_only_mode_blocks(tmp_path):
    """After thresholding, the local-squeezer state has block-diagonal support."""
    config_path = write_config(tmp_path, n_modes=8, pump_profile="rN2")
    out = tmp_path / "out"
    assert main(["covariance", "--config", str(config_path), "--out", str(out)]) == 0
    parsed, _ = covariance_from_csv(out / "covariance_rN2_display.csv")
    for a in range(8):
        for b in range(8):
            blk = parsed.matrix[2 * a : 2 * a + 2, 2 * b : 2 * b + 2]
            if a == b:
                assert np.all(blk != 0.0)
            else:
                assert np.all(blk == 0.0)


def test_covariance_profile_override_changes_label_and_header(tmp_path):
    config_path = write_config(tmp_path, n_modes=8)
    out = tmp_path / "out"
    code = main(
        ["covariance", "--config", str(config_path), "--profile", "general:3", "--out", str(out)]
    )
    assert code == 0
    path = out / "covariance_general-3.csv"  # ':' sanitized for filenames
    assert path.exists()
    _, meta = covariance_from_csv(path)
    assert meta["profile"] == "general:3"


def test_covariance_custom_profile_from_file(tmp_path):
    phases = [0.0, 0.5, -0.25, 1.0]
    phase_file = tmp_path / "phases.json"
    phase_file.write_text(json.dumps({"phases_rad": phases}))
    config_path = write_config(tmp_path)
    out = tmp_path / "out"
    code = main(
        [
            "covariance",
            "--config",
            str(config_path),
            "--profile",
            f"custom:{phase_file}",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    parsed, meta = covariance_from_csv(out / "covariance_custom.csv")
    assert meta["profile"] == "custom"
    cfg = load_config(config_path)
    import dataclasses

    custom_cfg = dataclasses.replace(cfg, pump=PumpProfile.custom(phases))
    assert np.array_equal(parsed.matrix, covariance_at(custom_cfg, 20.0).matrix)


def test_invalid_config_exits_2_with_clean_message(tmp_path, capsys):
    config_path = write_config(tmp_path, n_modes=6, pump_profile="rN4")
    code = main(["covariance", "--config", str(config_path), "--out", str(tmp_path)])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "divisible by 4" in err


@pytest.mark.parametrize(
    "overrides",
    [
        {"coupling_mm": 0.45},  # unknown key
        {"n_modes": "four"},  # malformed value
        {"transmittance": 1.5},  # out of range
    ],
)
def test_bad_config_values_exit_2(tmp_path, capsys, overrides):
    config_path = write_config(tmp_path, **overrides)
    assert main(["covariance", "--config", str(config_path), "--out", str(tmp_path)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_loss_flag_rejects_out_of_range(tmp_path, capsys):
    config_path = write_config(tmp_path)
    code = main(
        ["covariance", "--config", str(config_path), "--loss", "1.5", "--out", str(tmp_path)]
    )
    assert code == 2
    assert "--loss" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# vlf-sweep subcommand


def test_vlf_sweep_grid_and_endpoints(tmp_path):
    config_path = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["vlf-sweep", "--config", str(config_path), "--out", str(out)]) == 0
    meta, rows = read_vlf(out / "vlf_r0.csv")
    assert meta["threshold"] == "4.0"
    assert meta["z_steps"] == "9"
    # 9 z points x 2 parity sets x 1 adjacent pair each for N=4
    assert len(rows) == 18
    z0_rows = [r for r in rows if r["z_mm"] == "0.0"]
    assert len(z0_rows) == 2
    for row in z0_rows:
        assert row["value"] == "4.0"  # exact threshold, not 3.999...
        assert row["fully_inseparable"] == "false"
    for row in rows:
        if row["z_mm"] != "0.0":
            assert float(row["value"]) < 4.0
            assert row["fully_inseparable"] == "true"


def test_vlf_sweep_loss_affine_in_file(tmp_path):
    config_path = write_config(tmp_path)
    out = tmp_path / "out"
    code = main(
        ["vlf-sweep", "--config", str(config_path), "--loss", "0.5", "--out", str(out)]
    )
    assert code == 0
    meta, rows = read_vlf(out / "vlf_r0.csv")
    assert meta["transmittance"] == "0.5"
    for row in rows:
        value, lossless = float(row["value"]), float(row["value_lossless"])
        assert value == pytest.approx(0.5 * lossless + 2.0, abs=AFFINE_TOL)


def test_vlf_sweep_rejects_small_rings(tmp_path, capsys):
    config_path = write_config(tmp_path, n_modes=3)
    assert main(["vlf-sweep", "--config", str(config_path), "--out", str(tmp_path)]) == 2
    assert "at least 4 modes" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# verify subcommand


def test_verify_passes_and_reports_negative_controls(capsys):
    assert run_verify() == 0
    out = capsys.readouterr().out
    assert re.search(r"negative_control_sign_flip\s+PASS", out)
    assert re.search(r"config_rejection_n6_rn4\s+PASS", out)
    assert re.search(r"vacuum_witness_at_threshold\s+PASS", out)
    assert "all" in out and "checks passed" in out
    assert "FAIL" not in out


def test_verify_with_valid_config(tmp_path, capsys):
    config_path = write_config(tmp_path)
    assert main(["verify", "--config", str(config_path)]) == 0
    assert re.search(r"config_validation\s+PASS", capsys.readouterr().out)


def test_verify_with_invalid_config_fails(tmp_path, capsys):
    config_path = write_config(tmp_path, n_modes=6, pump_profile="rN4")
    assert main(["verify", "--config", str(config_path)]) == 1
    assert re.search(r"config_validation\s+FAIL", capsys.readouterr().out)


def test_console_script_entry_point(tmp_path):
    """The installed `ringspdc` script wires through to main()."""
    config_path = write_config(tmp_path)
    proc = subprocess.run(
        [sys.executable, "-m", "ringspdc.cli", "vlf-sweep", "--config", str(config_path),
         "--out", str(tmp_path / "out")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "vlf_r0.csv").exists()


# ---------------------------------------------------------------------------
# figure manifests


@pytest.mark.parametrize("which,command", [(2, "covariance"), (3, "vlf-sweep"), (4, "vlf-sweep")])
def test_manifests_parse_cleanly(which, command):
    manifest = load_figure_manifest(which)
    assert manifest["figure"] == which
    assert manifest["command"] == command
    assert manifest["runs"]
    for run in manifest["runs"]:
        parse_config(run["config"])  # must validate without error
        assert run["label"]


def test_figure_2_replay_is_deterministic(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["figure", "2", "--out", str(out_a)]) == 0
    assert main(["figure", "2", "--out", str(out_b)]) == 0
    names = sorted(p.name for p in out_a.iterdir())
    assert names == [
        "covariance_fig2_r0.csv",
        "covariance_fig2_r0_display.csv",
        "covariance_fig2_rN2.csv",
        "covariance_fig2_rN2_display.csv",
        "covariance_fig2_rN4.csv",
        "covariance_fig2_rN4_display.csv",
    ]
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
