import json

import pytest

from momentlab import yaml_utils
from momentlab.exceptions import ConfigError


def test_dict_to_yaml_unicode():
    assert yaml_utils.dict_to_yaml({"가": "나"}) == '"\\uAC00": "\\uB098"\n'
    assert yaml_utils.dict_to_yaml({"가": "나"}, {"allow_unicode": True}) == "가: 나\n"


def test_dict_to_yaml_keys_are_not_sorted_by_default():
    assert yaml_utils.dict_to_yaml({"herp": 1, "derp": 2}) == "herp: 1\nderp: 2\n"


def test_dict_to_yaml_keys_can_be_sorted_with_yaml_dump_kwargs():
    assert (
        yaml_utils.dict_to_yaml(
            {"herp": 1, "derp": 2}, yaml_dump_kwargs={"sort_keys": True}
        )
        == "derp: 2\nherp: 1\n"
    )


def test_load_config_file(tmp_path):
    path = tmp_path / "esd.yaml"
    path.write_text("n-list: [50, 200]\nreplicates: 5\nprefactor_mode: linear\n")
    assert yaml_utils.load_config_file(path) == {
        "n_list": [50, 200],
        "replicates": 5,
        "prefactor_mode": "linear",
    }


def test_load_config_file_empty(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    assert yaml_utils.load_config_file(path) == {}


def test_load_config_file_from_sidecar(tmp_path, monkeypatch):
    monkeypatch.setattr(yaml_utils, "version_string", lambda: "1.2.0")
    path = tmp_path / "run.csv.json"
    path.write_text(
        json.dumps({"command": "esd", "version": "1.0.0", "config": {"n_list": [20], "seed": 9}})
    )
    assert yaml_utils.load_config_file(path) == {"n_list": [20], "seed": 9}


@pytest.mark.parametrize("text", ["- 1\n- 2\n", "just a string\n", "key: [unclosed\n"])
def test_load_config_file_rejects_non_mappings(tmp_path, text):
    path = tmp_path / "bad.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError):
        yaml_utils.load_config_file(path)


def test_load_config_file_missing(tmp_path):
    with pytest.raises(OSError):
        yaml_utils.load_config_file(tmp_path / "missing.yaml")


def test_check_sidecar_version_invalid():
    with pytest.raises(ConfigError, match="Not a valid momentlab version"):
        yaml_utils.check_sidecar_version("not-a-version")


def test_check_sidecar_version_major_mismatch_warns(monkeypatch):
    monkeypatch.setattr(yaml_utils, "version_string", lambda: "1.0.0")
    with pytest.warns(UserWarning, match="results may differ"):
        recorded = yaml_utils.check_sidecar_version("2.1.0")
    assert recorded.major == 2


def test_check_sidecar_version_same_major(monkeypatch, recwarn):
    monkeypatch.setattr(yaml_utils, "version_string", lambda: "1.4.0+g1234")
    yaml_utils.check_sidecar_version("1.0.0")
    assert len(recwarn) == 0
