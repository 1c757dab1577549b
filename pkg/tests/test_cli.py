import os

import pytest

from holderforms.cli import main


def run(argv, tmp_path, name="out"):
    outdir = tmp_path / name
    code = main(argv + ["--outdir", str(outdir)])
    return code, outdir


FAST_SUBCOMMANDS = ["isoperimetric", "criteria", "pisot"]


class TestSubcommands:
    @pytest.mark.parametrize("sub", FAST_SUBCOMMANDS)
    def test_exit_zero_and_csv_written(self, sub, tmp_path, capsys):
        code, outdir = run([sub], tmp_path)
        assert code == 0
        assert list(outdir.glob("*.csv"))
        out = capsys.readouterr().out
        assert "PASS" in out
        assert "FAIL" not in out

    def test_mollify_check(self, tmp_path, capsys):
        code, outdir = run(["mollify-check"], tmp_path)
        assert code == 0
        assert (outdir / "regularization.csv").exists()

    def test_stokes_check(self, tmp_path):
        code, outdir = run(["stokes-check", "--resolution", "4096"], tmp_path)
        assert code == 0
        assert (outdir / "stokes.csv").exists()

    def test_svg_flag_emits_plot(self, tmp_path):
        code, outdir = run(["inequality", "--svg"], tmp_path)
        assert code == 0
        svg = outdir / "inequality_ratio.svg"
        assert svg.exists()
        assert svg.read_text().startswith("<svg")


class TestDeterminism:
    @pytest.mark.parametrize("sub", FAST_SUBCOMMANDS)
    def test_byte_identical_reruns(self, sub, tmp_path):
        _, a = run([sub, "--seed", "5"], tmp_path, "a")
        _, b = run([sub, "--seed", "5"], tmp_path, "b")
        for fa in sorted(a.glob("*.csv")):
            fb = b / fa.name
            assert fa.read_bytes() == fb.read_bytes()


class TestConfig:
    def test_missing_config_file_is_an_error(self, tmp_path):
        code, _ = run(["pisot", "--config", str(tmp_path / "nope.ini")],
                      tmp_path)
        assert code == 2

    def test_unknown_key_rejected(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[common]\nbogus = 1\n")
        code, _ = run(["pisot", "--config", str(ini)], tmp_path)
        assert code == 2

    def test_unknown_section_rejected(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[nosuch]\nseed = 1\n")
        code, _ = run(["pisot", "--config", str(ini)], tmp_path)
        assert code == 2

    def test_config_value_used_and_flag_overrides(self, tmp_path, capsys):
        ini = tmp_path / "c.ini"
        ini.write_text("[common]\nseed = 9\n")
        code, a = run(["isoperimetric", "--config", str(ini)], tmp_path, "a")
        assert code == 0
        code, b = run(["isoperimetric", "--config", str(ini), "--seed", "9"],
                      tmp_path, "b")
        assert code == 0
        assert (a / "isoperimetric.csv").read_bytes() == \
            (b / "isoperimetric.csv").read_bytes()

    def test_outdir_env_fallback(self, tmp_path, monkeypatch):
        target = tmp_path / "envout"
        monkeypatch.setenv("HOLDERFORMS_OUTDIR", str(target))
        monkeypatch.chdir(tmp_path)
        assert main(["pisot"]) == 0
        assert (target / "pisot.csv").exists()
