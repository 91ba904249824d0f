"""Config loading, validation, and hashing."""

import json

import pytest

from a11y_audit.config import Config, glob_match, load_config
from a11y_audit.errors import AuditError
from a11y_audit.rules import RULES


def _write(tmp_path, data):
    path = tmp_path / "a11y.config.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_defaults():
    cfg = Config()
    assert cfg.thresholds.alt_length == 250
    assert cfg.thresholds.contrast_normal == 4.5
    assert cfg.thresholds.contrast_large == 3.0
    assert cfg.thresholds.band_tolerance == 0.05
    assert cfg.thresholds.ascii_density == 0.3
    assert cfg.fail_on == "error"
    assert ".git/**" in cfg.ignore_globs


def test_load_from_corpus_root(tmp_path):
    _write(tmp_path, {"fail_on": "warning"})
    cfg = load_config(root=tmp_path)
    assert cfg.fail_on == "warning"


def test_missing_explicit_config_is_error(tmp_path):
    with pytest.raises(AuditError, match="not found"):
        load_config(tmp_path / "missing.json")


def test_unknown_top_level_key_rejected(tmp_path):
    path = _write(tmp_path, {"threshholds": {}})
    with pytest.raises(AuditError, match="unknown key"):
        load_config(path)


def test_threshold_validation(tmp_path):
    path = _write(tmp_path, {"thresholds": {"alt_length": -5}})
    with pytest.raises(AuditError, match="positive"):
        load_config(path)
    path = _write(tmp_path, {"thresholds": {"contrast_normal": 2.0}})
    with pytest.raises(AuditError, match="contrast_normal"):
        load_config(path)


def test_threshold_merge(tmp_path):
    path = _write(tmp_path, {"thresholds": {"alt_length": 100}})
    cfg = load_config(path)
    assert cfg.thresholds.alt_length == 100
    assert cfg.thresholds.contrast_normal == 4.5  # untouched default


def test_lexicon_add_remove(tmp_path):
    path = _write(
        tmp_path,
        {
            "lexicons": {
                "visual_language_add": ["pictured here"],
                "visual_language_remove": ["look at the"],
                "link_text_add": ["tap this"],
                "image_of_text_tokens_add": ["capture"],
            }
        },
    )
    cfg = load_config(path)
    assert "pictured here" in cfg.visual_language_phrases
    assert "look at the" not in cfg.visual_language_phrases
    assert "tap this" in cfg.ambiguous_link_text
    assert "capture" in cfg.image_of_text_tokens


def test_platform_map_parsing(tmp_path):
    path = _write(tmp_path, {"platform_map": [{"glob": "ed/**", "label": "ed"}]})
    cfg = load_config(path)
    assert cfg.platform_map == [("ed/**", "ed")]


def test_malformed_platform_map_rejected(tmp_path):
    path = _write(tmp_path, {"platform_map": [{"glob": "x"}]})
    with pytest.raises(AuditError, match="platform_map"):
        load_config(path)


def test_config_hash_changes_with_content(tmp_path):
    base = load_config(_write(tmp_path, {}))
    changed = load_config(_write(tmp_path, {"fail_on": "warning"}))
    assert base.config_hash() != changed.config_hash()
    assert base.config_hash() == Config().config_hash()


def test_rule_settings_validated_against_catalog(tmp_path):
    path = _write(tmp_path, {"rules": {"alt-missing": {"enabled": False}}})
    cfg = load_config(path, rule_catalog=RULES)
    assert cfg.rule_settings("alt-missing").enabled is False
    assert cfg.rule_settings("link-text").enabled is True


@pytest.mark.parametrize(
    "pattern,path,matches",
    [
        ("ed/**", "ed/readings/r3.html", True),
        ("ed/**", "edx/r3.html", False),
        ("*.md", "notes.md", True),
        ("*.md", "a/notes.md", False),
        ("**/*.md", "a/b/notes.md", True),
        (".git/**", ".git/objects/ab", True),
        ("slides/*.json", "slides/deck.slides.json", True),
    ],
)
def test_glob_match(pattern, path, matches):
    assert glob_match(pattern, path) is matches
