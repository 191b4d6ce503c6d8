import json

import pytest

from nls_ist.cli import build_parser, main
from nls_ist.experiments import ConfigError, Report, make_config


def test_config_merge_and_validation():
    cfg = make_config("direct", {"L": 40, "family": "tanh_shift 2"})
    assert cfg["L"] == 40 and cfg["n"] == 4096
    with pytest.raises(ConfigError):
        make_config("direct", {"nope": 1})
    with pytest.raises(ConfigError):
        make_config("direct", {"n": 0})
    with pytest.raises(ConfigError):
        make_config("nope")


def test_pass_row_needs_tolerance():
    rep = Report("x")
    with pytest.raises(ValueError):
        rep.verdict("row", True)


def test_direct_tanh(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["direct", "--output-dir", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["experiment"] == "direct"
    assert all(set(r) == {"label", "measured", "reference", "error", "tolerance", "verdict"}
               for r in report["rows"])
    data = json.loads((out / "scattering_data.json").read_text())
    assert len(data["eigenvalues"]) == 1
    assert (out / "reflection.csv").read_text().startswith("z,re_r,im_r")


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "tanh_shift 3", "output_dir": str(tmp_path / "a")}))
    assert main(["direct", "--config", str(cfg), "--output-dir", str(tmp_path / "b")]) == 0
    assert (tmp_path / "b" / "report.json").exists()
    assert not (tmp_path / "a").exists()


def test_config_errors_exit_2(tmp_path, capsys):
    assert main(["direct", "--L", "-1", "--output-dir", str(tmp_path)]) == 2
    assert "[config]" in capsys.readouterr().err
    assert main(["direct", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["direct", "--family", "wave 3", "--output-dir", str(tmp_path)]) == 2


def test_numerical_error_has_stage(tmp_path, capsys):
    # dip tails are not resolved at L = 30
    assert main(["direct", "--family", "dip_family 2", "--output-dir", str(tmp_path)]) == 1
    assert "[fields]" in capsys.readouterr().err


def test_corrupt_injection_fails(tmp_path):
    code = main(["verify-all", "--inject-corrupt", "true", "--output-dir", str(tmp_path)])
    assert code == 1
    rows = json.loads((tmp_path / "report.json").read_text())["rows"]
    assert any(r["verdict"] == "FAIL" and "|r| < 1" in r["label"] for r in rows)


def test_parser_lists_subcommands():
    text = build_parser().format_help()
    for name in ("direct", "solitonless-search", "theorem13", "theorem11", "continuity",
                 "verify-all"):
        assert name in text
