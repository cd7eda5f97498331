import math
from pathlib import Path

import numpy as np
import pytest

import spdcsim as s
from spdcsim import cli
from spdcsim.config import parse_config, serialize_config

SPECTRAL_SMALL = """\
[pump]
variant = planewave
omega0 = 4.8e15

[crystal]
L = 1e-6
pdc_type = I
index_pump = constant 1.6
index_signal = constant 1.6
index_idler = constant 1.6

[windows]
T = 6.283185307179586e-11
W = 1e-5

[grids]
mode = spectral
w_points = 16
w_center = 2.4e15
w_step = 1e11
quad_time_points = 128
quad_z_points = 8
quad_rho_points = 8
"""

SPATIAL_SMALL = """\
[pump]
variant = planewave
omega0 = 4.8e15

[crystal]
L = 1e-5
pdc_type = II
index_pump = constant 1.6
index_signal = constant 1.6
index_idler = constant 1.6

[windows]
T = 1e-12
W = 7.853981633974483e-4

[grids]
mode = spatial
q_points = 16
q_center = 0.0
q_step = 2e3
quad_time_points = 4
quad_z_points = 8
quad_rho_points = 64
"""


def mutate(base: str, key: str, value: str) -> str:
    lines = []
    replaced = False
    for line in base.splitlines():
        if line.startswith(key + " "):
            lines.append(f"{key} = {value}")
            replaced = True
        else:
            lines.append(line)
    assert replaced, f"key {key} not found in base config"
    return "\n".join(lines) + "\n"


class TestParse:
    def test_empty_config_missing_sections(self):
        with pytest.raises(s.ValidationError, match=r"missing required section"):
            parse_config("")

    def test_negative_length_message(self):
        with pytest.raises(s.ValidationError, match=r"crystal\.L must be > 0"):
            parse_config(mutate(SPECTRAL_SMALL, "L", "-1e-3"))

    @pytest.mark.parametrize("key,value,fragment", [
        ("omega0", "-1e15", r"pump\.omega0 must be > 0"),
        ("variant", "banana", "variant"),
        ("pdc_type", "III", "pdc_type"),
        ("index_pump", "constant 0.5", "must be >= 1"),
        ("index_pump", "quartz", "unknown index model"),
        ("index_pump", "sellmeier 2.0 1.0 1.0 0.01", "0 < min < max"),
        ("T", "0", r"windows\.T must be > 0"),
        ("W", "-2", r"windows\.W must be > 0"),
        ("w_points", "1", r"grids\.w_points"),
        ("w_step", "-1e9", r"grids\.w_step must be > 0"),
        ("quad_z_points", "0", r"grids\.quad_z_points"),
        ("mode", "cubic", r"grids\.mode"),
    ])
    def test_single_key_mutations_rejected(self, key, value, fragment):
        with pytest.raises(s.ValidationError, match=fragment):
            parse_config(mutate(SPECTRAL_SMALL, key, value))

    def test_planewave_rejects_gaussian_keys(self):
        text = SPECTRAL_SMALL.replace("omega0 = 4.8e15",
                                      "omega0 = 4.8e15\nsigma_omega = 1e11")
        with pytest.raises(s.ValidationError, match="gaussian variant"):
            parse_config(text)

    def test_unknown_key_reports_line(self):
        text = SPECTRAL_SMALL.replace("[windows]", "[windows]\nbogus = 1")
        with pytest.raises(s.ParseError, match=r"line 1[0-9]+.*bogus"):
            parse_config(text)

    def test_unknown_section_reports_line(self):
        with pytest.raises(s.ParseError, match=r"line 1:.*\[detector\]"):
            parse_config("[detector]\n" + SPECTRAL_SMALL)

    def test_garbage_line_reports_line(self):
        with pytest.raises(s.ParseError, match="line 2"):
            parse_config("[pump]\nnot a key value pair\n")

    def test_duplicate_key_rejected(self):
        text = SPECTRAL_SMALL.replace("L = 1e-6", "L = 1e-6\nL = 2e-6")
        with pytest.raises(s.ParseError, match="duplicate key"):
            parse_config(text)

    def test_non_numeric_value_is_parse_error(self):
        with pytest.raises(s.ParseError, match="not a number"):
            parse_config(mutate(SPECTRAL_SMALL, "omega0", "fast"))

    def test_comments_and_spacing_ignored(self):
        text = "# header\n\n" + SPECTRAL_SMALL.replace(
            "L = 1e-6", "L = 1e-6   # meters")
        cfg = parse_config(text)
        assert cfg.crystal.L == 1e-6

    def test_sellmeier_index_accepted(self):
        text = mutate(SPECTRAL_SMALL, "index_pump",
                      "sellmeier 0.3 1.2 1.25 0.01 0.5 120.0")
        cfg = parse_config(text)
        assert cfg.crystal.index_pump.kind == "sellmeier"
        assert cfg.crystal.index_pump.terms == ((1.25, 0.01), (0.5, 120.0))


class TestRoundTrip:
    @pytest.mark.parametrize("base", [SPECTRAL_SMALL, SPATIAL_SMALL])
    def test_parse_serialize_parse_identity(self, base):
        cfg = parse_config(base)
        text = serialize_config(cfg)
        assert parse_config(text) == cfg

    def test_gaussian_round_trip(self):
        text = (Path(__file__).parent.parent / "configs" /
                "gaussian_spectral.ini").read_text()
        cfg = parse_config(text)
        assert parse_config(serialize_config(cfg)) == cfg

    def test_serialize_is_canonical(self):
        cfg = parse_config(SPECTRAL_SMALL)
        once = serialize_config(cfg)
        twice = serialize_config(parse_config(once))
        assert once == twice


@pytest.fixture
def spectral_config(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(SPECTRAL_SMALL)
    return path


@pytest.fixture
def spatial_config(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(SPATIAL_SMALL)
    return path


class TestCli:
    def test_simulate_writes_expected_files(self, spectral_config, tmp_path):
        out = tmp_path / "out"
        rc = cli.main(["simulate", "--config", str(spectral_config),
                       "--out", str(out)])
        assert rc == 0
        for name in ("jsa.dump", "marginals.csv", "manifest.txt"):
            assert (out / name).exists()
        field = s.read_field_dump(out / "jsa.dump")
        assert field.labels() == ("w1", "w2")

    def test_rerun_is_byte_identical(self, spectral_config, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert cli.main(["simulate", "--config", str(spectral_config),
                         "--out", str(out_a)]) == 0
        assert cli.main(["simulate", "--config", str(spectral_config),
                         "--out", str(out_b)]) == 0
        for name in ("jsa.dump", "marginals.csv", "manifest.txt"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_manifest_lists_checksums(self, spectral_config, tmp_path):
        out = tmp_path / "out"
        cli.main(["simulate", "--config", str(spectral_config), "--out", str(out)])
        manifest = (out / "manifest.txt").read_text()
        assert "config-sha256 = " in manifest
        assert "file = jsa.dump sha256=" in manifest
        assert f"backend = {s.backend_name()}" in manifest

    def test_oracle_reports_small_error(self, spectral_config, tmp_path):
        out = tmp_path / "out"
        rc = cli.main(["oracle", "--config", str(spectral_config),
                       "--out", str(out), "--threads", "2"])
        assert rc == 0
        rows = dict(line.split(",") for line in
                    (out / "comparison.csv").read_text().splitlines()[1:])
        assert float(rows["rel_l2_phase_aligned"]) < 1e-2
        assert (out / "direct.dump").exists()
        assert (out / "analytic.dump").exists()

    def test_schmidt_outputs_weights(self, spectral_config, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["schmidt", "--config", str(spectral_config),
                         "--out", str(out)]) == 0
        lines = (out / "schmidt.csv").read_text().splitlines()
        rows = dict(line.split(",") for line in lines[1:])
        # plane-wave spectral amplitude on a 16x16 grid is maximally
        # anticorrelated: all 16 weights equal, K = 16
        assert float(rows["schmidt_number"]) == pytest.approx(16.0, rel=1e-9)
        assert float(rows["lambda_0000"]) == pytest.approx(1 / 16, rel=1e-9)

    def test_epr_reports_anticorrelation(self, spatial_config, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["epr", "--config", str(spatial_config),
                         "--out", str(out)]) == 0
        rows = dict(line.split(",") for line in
                    (out / "correlation.csv").read_text().splitlines()[1:])
        assert rows["mode"] == "spatial2d"
        assert float(rows["conditional_peak2"]) == -float(rows["conditional_peak1"])
        assert rows["epr_flag"] == "True"

    def test_phasematch_outputs(self, spectral_config, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["phasematch", "--config", str(spectral_config),
                         "--out", str(out)]) == 0
        sweep = (out / "phasematch.csv").read_text().splitlines()
        assert len(sweep) == 1 + 501
        rows = dict(line.split(",") for line in
                    (out / "cone.csv").read_text().splitlines()[1:])
        assert float(rows["alpha"]) == pytest.approx(0.0, abs=1e-6)
        assert rows["collinear_matched"] == "True"
        assert float(rows["degenerate_q"]) == pytest.approx(0.0, abs=1e-2)

    def test_full4d_simulate(self, tmp_path):
        text = """\
[pump]
variant = gaussian
omega0 = 4.8e15
sigma_omega = 5e11
waist = 5e-5

[crystal]
L = 1e-6
pdc_type = I
index_pump = constant 1.6
index_signal = constant 1.6
index_idler = constant 1.6

[windows]
T = 1e-12
W = 1e-4

[grids]
mode = full4d
w_points = 6
w_center = 2.4e15
w_step = 2.5e11
q_points = 6
q_center = 0.0
q_step = 8e3
"""
        path = tmp_path / "run.ini"
        path.write_text(text)
        out = tmp_path / "out"
        assert cli.main(["simulate", "--config", str(path), "--out", str(out)]) == 0
        field = s.read_field_dump(out / "jsa.dump")
        assert field.labels() == ("q1", "w1", "q2", "w2")
        assert field.data.shape == (6, 6, 6, 6)

    def test_bad_config_single_line_error(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text(mutate(SPECTRAL_SMALL, "L", "-1"))
        rc = cli.main(["simulate", "--config", str(path), "--out",
                       str(tmp_path / "out")])
        assert rc == 1
        err = capsys.readouterr().err
        assert err.count("\n") == 1
        assert err.startswith("validation-error: ")

    def test_missing_config_file(self, tmp_path, capsys):
        rc = cli.main(["simulate", "--config", str(tmp_path / "nope.ini")])
        assert rc == 1
        assert capsys.readouterr().err.startswith("io-error: ")

    def test_threads_env_fallback(self, spectral_config, tmp_path, monkeypatch):
        monkeypatch.setenv("SPDC_THREADS", "2")
        out = tmp_path / "out"
        assert cli.main(["oracle", "--config", str(spectral_config),
                         "--out", str(out)]) == 0

    def test_bad_threads_env(self, spectral_config, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("SPDC_THREADS", "many")
        rc = cli.main(["simulate", "--config", str(spectral_config),
                       "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "SPDC_THREADS" in capsys.readouterr().err

    def test_default_out_directory_from_config(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = tmp_path / "run.ini"
        path.write_text(SPECTRAL_SMALL)
        assert cli.main(["simulate", "--config", str(path)]) == 0
        assert (tmp_path / "out" / "jsa.dump").exists()
