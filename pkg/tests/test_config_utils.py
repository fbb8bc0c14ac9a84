import json

from config_utils import get_config_path, get_default_config, load_config, save_config


def test_missing_file_is_created_with_defaults(tmp_path, monkeypatch):
    path = tmp_path / "config.ini"
    monkeypatch.setenv("FINDOC_CONFIG", str(path))
    monkeypatch.delenv("FINDOC_BUDGET", raising=False)
    assert get_config_path() == str(path)
    config = load_config()
    assert config == get_default_config()
    assert json.loads(path.read_text(encoding="utf-8")) == config


def test_partial_file_is_back_filled(tmp_path, monkeypatch):
    monkeypatch.delenv("FINDOC_BUDGET", raising=False)
    path = tmp_path / "config.ini"
    save_config({"Window": {"finset_ceiling": 5}}, str(path))
    config = load_config(str(path))
    assert config["Window"]["finset_ceiling"] == 5
    assert config["Window"]["hom_ceiling"] == 65536
    assert config["Search"] == get_default_config()["Search"]
    assert json.loads(path.read_text(encoding="utf-8"))["Search"]["budget"] == 100000


def test_budget_override_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FINDOC_BUDGET", "42")
    assert load_config(str(tmp_path / "c.ini"))["Search"]["budget"] == 42
    monkeypatch.setenv("FINDOC_BUDGET", "lots")
    assert load_config(str(tmp_path / "c.ini"))["Search"]["budget"] == 100000
