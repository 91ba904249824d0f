"""Audit configuration: defaults, file loading, validation, and hashing.

A corpus may carry an ``a11y.config.json`` at its root. The effective
config is defaults deep-merged with that file (and any CLI overrides); its
canonical JSON is hashed into every snapshot for provenance.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import AuditError

DEFAULT_CONFIG_FILENAME = "a11y.config.json"

DEFAULT_IGNORE_GLOBS = [".git/**", "node_modules/**"]

# Double extensions are checked before plain ones.
DEFAULT_MEDIA_KINDS: dict[str, str] = {
    ".slides.json": "slide-manifest",
    ".styles.json": "style-sidecar",
    ".html": "html",
    ".htm": "html",
    ".xhtml": "html",
    ".md": "markdown",
    ".markdown": "markdown",
    ".mdown": "markdown",
}

DEFAULT_VISUAL_LANGUAGE_PHRASES = [
    "as you can see",
    "note the highlighted",
    "you can see below",
    "shown above in",
    "look at the",
]

DEFAULT_AMBIGUOUS_LINK_TEXT = [
    "click here",
    "here",
    "click",
    "link",
    "this",
    "this link",
    "this page",
    "read more",
    "learn more",
    "more",
    "details",
]

DEFAULT_IMAGE_OF_TEXT_TOKENS = [
    "screenshot",
    "screen_shot",
    "code",
    "snippet",
    "terminal",
    "console",
]


@dataclass(frozen=True)
class Thresholds:
    alt_length: int = 250
    contrast_normal: float = 4.5
    contrast_large: float = 3.0
    large_pt: float = 18.0
    large_bold_pt: float = 14.0
    band_tolerance: float = 0.05
    ascii_density: float = 0.3


@dataclass(frozen=True)
class RuleSettings:
    enabled: bool = True
    severity_override: str | None = None


@dataclass
class Config:
    ignore_globs: list[str] = field(default_factory=lambda: list(DEFAULT_IGNORE_GLOBS))
    media_kinds: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_MEDIA_KINDS))
    platform_map: list[tuple[str, str]] = field(default_factory=list)
    course_element_map: list[tuple[str, str]] = field(default_factory=list)
    rules: dict[str, RuleSettings] = field(default_factory=dict)
    visual_language_phrases: list[str] = field(
        default_factory=lambda: list(DEFAULT_VISUAL_LANGUAGE_PHRASES)
    )
    ambiguous_link_text: list[str] = field(
        default_factory=lambda: list(DEFAULT_AMBIGUOUS_LINK_TEXT)
    )
    image_of_text_tokens: list[str] = field(
        default_factory=lambda: list(DEFAULT_IMAGE_OF_TEXT_TOKENS)
    )
    thresholds: Thresholds = field(default_factory=Thresholds)
    fail_on: str = "error"

    def rule_settings(self, rule_id: str) -> RuleSettings:
        return self.rules.get(rule_id, RuleSettings())

    def to_canonical_dict(self) -> dict:
        """Stable dict representation of the effective config, for hashing."""
        return {
            "ignore_globs": list(self.ignore_globs),
            "media_kinds": dict(sorted(self.media_kinds.items())),
            "platform_map": [{"glob": g, "label": l} for g, l in self.platform_map],
            "course_element_map": [{"glob": g, "label": l} for g, l in self.course_element_map],
            "rules": {
                rid: {"enabled": rs.enabled, "severity_override": rs.severity_override}
                for rid, rs in sorted(self.rules.items())
            },
            "lexicons": {
                "visual_language": list(self.visual_language_phrases),
                "ambiguous_link_text": list(self.ambiguous_link_text),
                "image_of_text_tokens": list(self.image_of_text_tokens),
            },
            "thresholds": {
                "alt_length": self.thresholds.alt_length,
                "contrast_normal": self.thresholds.contrast_normal,
                "contrast_large": self.thresholds.contrast_large,
                "large_pt": self.thresholds.large_pt,
                "large_bold_pt": self.thresholds.large_bold_pt,
                "band_tolerance": self.thresholds.band_tolerance,
                "ascii_density": self.thresholds.ascii_density,
            },
            "fail_on": self.fail_on,
        }

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_TOP_LEVEL_KEYS = {
    "ignore_globs",
    "media_kinds",
    "platform_map",
    "course_element_map",
    "rules",
    "lexicons",
    "thresholds",
    "fail_on",
}

_LEXICON_KEYS = {
    "visual_language_add",
    "visual_language_remove",
    "link_text_add",
    "link_text_remove",
    "image_of_text_tokens_add",
}

_THRESHOLD_KEYS = {
    "alt_length",
    "contrast_normal",
    "contrast_large",
    "large_pt",
    "large_bold_pt",
    "band_tolerance",
    "ascii_density",
}


def _str_list(value, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise AuditError(f"config: {where} must be a list of strings")
    return list(value)


def _glob_label_list(value, where: str) -> list[tuple[str, str]]:
    if not isinstance(value, list):
        raise AuditError(f"config: {where} must be a list of {{glob, label}} objects")
    out: list[tuple[str, str]] = []
    for i, entry in enumerate(value):
        if (
            not isinstance(entry, dict)
            or set(entry) != {"glob", "label"}
            or not isinstance(entry.get("glob"), str)
            or not isinstance(entry.get("label"), str)
        ):
            raise AuditError(f"config: {where}[{i}] must be an object with string glob and label")
        out.append((entry["glob"], entry["label"]))
    return out


def load_config(
    path: Path | None = None,
    root: Path | None = None,
    *,
    rule_catalog: dict | None = None,
) -> Config:
    """Build the effective Config.

    ``path`` points at an explicit config file; otherwise ``root`` is probed
    for ``a11y.config.json``. ``rule_catalog`` (id -> Rule) enables rule-id
    validation; pass ``rules.RULES`` from callers that have it.
    """
    data: dict = {}
    source = None
    if path is not None:
        source = Path(path)
        if not source.is_file():
            raise AuditError(f"config file not found: {source}")
    elif root is not None:
        candidate = Path(root) / DEFAULT_CONFIG_FILENAME
        if candidate.is_file():
            source = candidate
    if source is not None:
        try:
            data = json.loads(source.read_text(encoding="utf-8-sig"))
        except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise AuditError(f"cannot read config {source}: {exc}") from exc
        if not isinstance(data, dict):
            raise AuditError(f"config {source}: top level must be a JSON object")

    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise AuditError(f"config: unknown key(s): {', '.join(sorted(unknown))}")

    cfg = Config()

    if "ignore_globs" in data:
        cfg.ignore_globs = _str_list(data["ignore_globs"], "ignore_globs")
    if "media_kinds" in data:
        overrides = data["media_kinds"]
        if not isinstance(overrides, dict):
            raise AuditError("config: media_kinds must be an object of extension -> kind")
        for ext, kind in overrides.items():
            if not isinstance(ext, str) or not ext.startswith("."):
                raise AuditError(f"config: media_kinds key {ext!r} must start with '.'")
            if kind not in ("html", "markdown", "slide-manifest", "style-sidecar", "other"):
                raise AuditError(f"config: media_kinds[{ext!r}]: unknown kind {kind!r}")
            cfg.media_kinds[ext.lower()] = kind
    if "platform_map" in data:
        cfg.platform_map = _glob_label_list(data["platform_map"], "platform_map")
    if "course_element_map" in data:
        cfg.course_element_map = _glob_label_list(data["course_element_map"], "course_element_map")

    if "rules" in data:
        if not isinstance(data["rules"], dict):
            raise AuditError("config: rules must be an object keyed by rule id")
        for rule_id, settings in data["rules"].items():
            if not isinstance(settings, dict) or set(settings) - {"enabled", "severity_override"}:
                raise AuditError(
                    f"config: rules[{rule_id!r}] allows only 'enabled' and 'severity_override'"
                )
            enabled = settings.get("enabled", True)
            override = settings.get("severity_override")
            if not isinstance(enabled, bool):
                raise AuditError(f"config: rules[{rule_id!r}].enabled must be a boolean")
            if override is not None and override not in ("error", "warning"):
                raise AuditError(
                    f"config: rules[{rule_id!r}].severity_override must be 'error' or 'warning'"
                )
            cfg.rules[rule_id] = RuleSettings(enabled=enabled, severity_override=override)

    if "lexicons" in data:
        lex = data["lexicons"]
        if not isinstance(lex, dict) or set(lex) - _LEXICON_KEYS:
            raise AuditError(
                f"config: lexicons allows only {', '.join(sorted(_LEXICON_KEYS))}"
            )
        add = _str_list(lex.get("visual_language_add", []), "lexicons.visual_language_add")
        remove = _str_list(lex.get("visual_language_remove", []), "lexicons.visual_language_remove")
        cfg.visual_language_phrases = [
            p for p in cfg.visual_language_phrases if p not in remove
        ] + [p for p in add if p not in cfg.visual_language_phrases]
        add = _str_list(lex.get("link_text_add", []), "lexicons.link_text_add")
        remove = _str_list(lex.get("link_text_remove", []), "lexicons.link_text_remove")
        cfg.ambiguous_link_text = [
            p for p in cfg.ambiguous_link_text if p not in remove
        ] + [p for p in add if p not in cfg.ambiguous_link_text]
        add = _str_list(
            lex.get("image_of_text_tokens_add", []), "lexicons.image_of_text_tokens_add"
        )
        cfg.image_of_text_tokens = cfg.image_of_text_tokens + [
            t for t in add if t not in cfg.image_of_text_tokens
        ]

    if "thresholds" in data:
        th = data["thresholds"]
        if not isinstance(th, dict) or set(th) - _THRESHOLD_KEYS:
            raise AuditError(f"config: thresholds allows only {', '.join(sorted(_THRESHOLD_KEYS))}")
        merged = {}
        for key in _THRESHOLD_KEYS:
            if key in th:
                value = th[key]
                if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
                    raise AuditError(f"config: thresholds.{key} must be a positive number")
                merged[key] = int(value) if key == "alt_length" else float(value)
        cfg.thresholds = replace(cfg.thresholds, **merged)

    if "fail_on" in data:
        if data["fail_on"] not in ("error", "warning"):
            raise AuditError("config: fail_on must be 'error' or 'warning'")
        cfg.fail_on = data["fail_on"]

    if cfg.thresholds.contrast_normal < cfg.thresholds.contrast_large:
        raise AuditError("config: thresholds.contrast_normal must be >= contrast_large")

    if rule_catalog is not None:
        validate_rules_against_catalog(cfg, rule_catalog)
    return cfg


def validate_rules_against_catalog(cfg: Config, rule_catalog: dict) -> None:
    """Reject config entries for unknown rule ids and overrides that would
    reclassify a human-review rule as machine-gateable (or vice versa)."""
    for rule_id, settings in cfg.rules.items():
        rule = rule_catalog.get(rule_id)
        if rule is None:
            raise AuditError(f"config: unknown rule id {rule_id!r}")
        if settings.severity_override is not None and not rule.machine_decidable:
            raise AuditError(
                f"config: rules[{rule_id!r}]: severity of human-review rules cannot be overridden"
            )


def glob_to_regex(pattern: str) -> re.Pattern[str]:
    """Translate a path glob to a regex: ``**`` crosses slashes, ``*``/``?``
    do not. Matching is anchored over the whole corpus-relative path."""
    out = []
    i = 0
    while i < len(pattern):
        c = pattern[i]
        if c == "*":
            if pattern[i : i + 2] == "**":
                out.append(".*")
                i += 2
                # swallow a following slash so "a/**" also matches "a/x"
                if i < len(pattern) and pattern[i] == "/":
                    out.append("/?")
                    i += 1
                continue
            out.append("[^/]*")
        elif c == "?":
            out.append("[^/]")
        else:
            out.append(re.escape(c))
        i += 1
    return re.compile("".join(out) + r"\Z")


def glob_match(pattern: str, path: str) -> bool:
    return glob_to_regex(pattern).match(path) is not None
