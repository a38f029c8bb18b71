"""Ranking configuration and the flat on-disk config format.

The config file is plain ``key = value`` text, one key per line, with
``#`` comments and blank lines ignored. Recognized keys: alpha, top_n,
dim, clamp_similarity, max_phrase_tokens, provider, endpoint. CLI flags
override file values; file values override defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path


class ConfigError(ValueError):
    """Raised for invalid configuration values or malformed config files."""


@dataclass(frozen=True)
class RankConfig:
    """Knobs of the ranking objective and the extraction stage.

    alpha weighs the pairwise-similarity penalty against total relevance
    and must be >= 0. clamp_similarity floors pairwise similarities at 0,
    which is what makes greedy gains non-increasing; turn it off only for
    raw-cosine experiments.
    """

    alpha: float = 0.5
    top_n: int = 5
    dim: int = 512
    clamp_similarity: bool = True
    max_phrase_tokens: int = 5


def validate_config(cfg: RankConfig) -> RankConfig:
    """Return ``cfg`` unchanged if valid, else raise ConfigError."""
    if not (isinstance(cfg.alpha, (int, float)) and math.isfinite(cfg.alpha)):
        raise ConfigError(f"alpha must be a finite number, got {cfg.alpha!r}")
    if not cfg.alpha >= 0:
        raise ConfigError(f"alpha must be >= 0, got {cfg.alpha}")
    if cfg.top_n < 1:
        raise ConfigError(f"top_n must be >= 1, got {cfg.top_n}")
    if cfg.dim < 1:
        raise ConfigError(f"dim must be >= 1, got {cfg.dim}")
    if cfg.max_phrase_tokens < 1:
        raise ConfigError(
            f"max_phrase_tokens must be >= 1, got {cfg.max_phrase_tokens}")
    return cfg


@dataclass(frozen=True)
class RunSettings:
    """A RankConfig plus the embedding-provider selection."""

    rank: RankConfig = field(default_factory=RankConfig)
    provider: str = "hash"
    endpoint: str = ""


_CONFIG_KEYS = ("alpha", "top_n", "dim", "clamp_similarity",
                "max_phrase_tokens", "provider", "endpoint")


def _parse_bool(key: str, value: str) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise ConfigError(f"{key} must be 'true' or 'false', got {value!r}")


def parse_config(text: str) -> RunSettings:
    """Parse the flat key/value config format into RunSettings."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate config key {key!r}")
        values[key] = value

    cfg = RankConfig()
    try:
        if "alpha" in values:
            cfg = replace(cfg, alpha=float(values["alpha"]))
        if "top_n" in values:
            cfg = replace(cfg, top_n=int(values["top_n"]))
        if "dim" in values:
            cfg = replace(cfg, dim=int(values["dim"]))
        if "max_phrase_tokens" in values:
            cfg = replace(cfg, max_phrase_tokens=int(values["max_phrase_tokens"]))
    except ValueError as exc:
        raise ConfigError(f"bad numeric config value: {exc}") from exc
    if "clamp_similarity" in values:
        cfg = replace(cfg, clamp_similarity=_parse_bool(
            "clamp_similarity", values["clamp_similarity"]))
    validate_config(cfg)
    return RunSettings(
        rank=cfg,
        provider=values.get("provider", "hash"),
        endpoint=values.get("endpoint", ""),
    )


def dump_config(settings: RunSettings) -> str:
    """Render RunSettings in the canonical on-disk form.

    The output is byte-stable: dump(parse(dump(s))) == dump(s).
    """
    cfg = settings.rank
    rendered = {
        "alpha": repr(float(cfg.alpha)),
        "top_n": repr(cfg.top_n),
        "dim": repr(cfg.dim),
        "clamp_similarity": "true" if cfg.clamp_similarity else "false",
        "max_phrase_tokens": repr(cfg.max_phrase_tokens),
        "provider": settings.provider,
        "endpoint": settings.endpoint,
    }
    lines = [f"{key} = {rendered[key]}".rstrip() for key in _CONFIG_KEYS]
    return "\n".join(lines) + "\n"


def load_config(path) -> RunSettings:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def save_config(settings: RunSettings, path) -> None:
    Path(path).write_text(dump_config(settings), encoding="utf-8")
