import json

import pytest
from pydantic import ValidationError

from src import TOOL_NAME, __version__
from src.errors import LddToolkitError
from src.settings import (RunConfig, build_manifest, default_output_dir, file_digest, load_config, split_ints,
                          split_list, write_manifest)


def test_packaged_defaults():
    config = load_config()
    assert config.get("extraction", "thresholds") == "0,1,2,3"
    assert config.getint("sampling", "n_corpora") == 100
    assert "%(asctime)s" in config.get("logging", "log_format")


def test_user_config_overrides(tmp_path):
    user = tmp_path / "run.ini"
    user.write_text("[sampling]\nn_corpora = 7\n", encoding="utf-8")
    config = load_config(user)
    assert config.getint("sampling", "n_corpora") == 7
    assert config.getint("sampling", "tolerance") == 1
    with pytest.raises(LddToolkitError):
        load_config(tmp_path / "missing.ini")


def test_output_dir_from_environment(monkeypatch, tmp_path):
    config = load_config()
    monkeypatch.delenv("LDD_OUTPUT_DIR", raising=False)
    assert default_output_dir(config).name == "ldd_output"
    monkeypatch.setenv("LDD_OUTPUT_DIR", str(tmp_path))
    assert default_output_dir(config) == tmp_path


def test_list_helpers():
    assert split_list(" bleu, ribes ,") == ["bleu", "ribes"]
    assert split_ints("0,1,3") == [0, 1, 3]
    assert split_ints("") == []
    with pytest.raises(LddToolkitError):
        split_ints("1,x")


def test_run_config_validates_paths(tmp_path):
    with pytest.raises(ValidationError, match="does not exist"):
        RunConfig(subcommand="extract", src=tmp_path / "nope.txt", output_dir=tmp_path)


@pytest.mark.parametrize("overrides", [
    {"thresholds": [-1]},
    {"format": "csv"},
    {"metrics": ["ter"]},
    {"phenomena": ["idiom"]},
    {"n_corpora": 0},
    {"seed": -1},
    {"subcommand": "train"},
])
def test_run_config_rejects(tmp_path, overrides):
    values = {"subcommand": "extract", "output_dir": tmp_path, **overrides}
    with pytest.raises(ValidationError):
        RunConfig(**values)


def test_sigma_file_required(tmp_path):
    with pytest.raises(ValidationError, match="sigma-file"):
        RunConfig(subcommand="permute", sigma="file", output_dir=tmp_path)


def test_thresholds_are_sorted_and_unique(tmp_path):
    config = RunConfig(subcommand="extract", thresholds=[3, 0, 1, 1], output_dir=tmp_path)
    assert config.thresholds == [0, 1, 3]


def test_manifest(tmp_path, fixture_paths):
    config = RunConfig(subcommand="extract", src=fixture_paths["src"], tgt=fixture_paths["tgt"],
                       output_dir=tmp_path, seed=5)
    out = tmp_path / "sizes.tsv"
    out.write_text("x\n", encoding="utf-8")
    manifest = build_manifest(config, [out])
    assert manifest["tool"] == TOOL_NAME
    assert manifest["version"] == __version__
    assert manifest["seed"] == 5
    assert manifest["generator"] == "numpy.random.PCG64"
    assert manifest["outputs"] == ["sizes.tsv"]
    assert manifest["inputs"][str(fixture_paths["src"])] == file_digest(fixture_paths["src"])
    assert manifest["config"]["subcommand"] == "extract"
    assert "timestamp" not in json.dumps(manifest)

    path = write_manifest(config, [out])
    first = path.read_bytes()
    write_manifest(config, [out])
    assert path.read_bytes() == first
