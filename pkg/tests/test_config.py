import math

import pytest

from keyrank.config import (ConfigError, RankConfig, RunSettings, dump_config,
                            load_config, parse_config, save_config,
                            validate_config)


class TestValidateConfig:
    def test_defaults_accepted(self):
        cfg = RankConfig(alpha=0.5, top_n=5, dim=512)
        assert validate_config(cfg) is cfg

    def test_boundary_accepted(self):
        cfg = RankConfig(alpha=0.0, top_n=1, dim=8)
        assert validate_config(cfg) is cfg

    def test_negative_alpha_rejected(self):
        with pytest.raises(ConfigError):
            validate_config(RankConfig(alpha=-0.1))

    def test_nan_alpha_rejected(self):
        with pytest.raises(ConfigError):
            validate_config(RankConfig(alpha=math.nan))

    def test_infinite_alpha_rejected(self):
        with pytest.raises(ConfigError):
            validate_config(RankConfig(alpha=math.inf))

    def test_bad_top_n_rejected(self):
        with pytest.raises(ConfigError):
            validate_config(RankConfig(top_n=0))

    def test_bad_dim_rejected(self):
        with pytest.raises(ConfigError):
            validate_config(RankConfig(dim=0))

    def test_bad_max_phrase_tokens_rejected(self):
        with pytest.raises(ConfigError):
            validate_config(RankConfig(max_phrase_tokens=0))


class TestConfigFile:
    def test_settings_round_trip(self):
        settings = RunSettings(
            rank=RankConfig(alpha=0.9, top_n=7, dim=64,
                            clamp_similarity=False, max_phrase_tokens=3),
            provider="remote", endpoint="http://localhost:9999")
        assert parse_config(dump_config(settings)) == settings

    def test_dump_is_byte_stable(self):
        settings = RunSettings(rank=RankConfig(alpha=0), provider="hash")
        once = dump_config(settings)
        assert dump_config(parse_config(once)) == once

    def test_file_round_trip(self, tmp_path):
        settings = RunSettings(rank=RankConfig(alpha=0.25, top_n=3))
        path = tmp_path / "run.cfg"
        save_config(settings, path)
        assert load_config(path) == settings
        save_config(load_config(path), tmp_path / "again.cfg")
        assert (tmp_path / "again.cfg").read_bytes() == path.read_bytes()

    def test_comments_and_blanks_ignored(self):
        settings = parse_config("# comment\n\nalpha = 0.1\n")
        assert settings.rank.alpha == 0.1
        assert settings.provider == "hash"

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config("alhpa = 0.5\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("alpha = 0.5\nalpha = 0.9\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config("alpha 0.5\n")

    def test_bad_bool_rejected(self):
        with pytest.raises(ConfigError, match="true"):
            parse_config("clamp_similarity = yes\n")

    def test_invalid_values_rejected_on_parse(self):
        with pytest.raises(ConfigError):
            parse_config("alpha = -1\n")
        with pytest.raises(ConfigError):
            parse_config("top_n = 0\n")

    def test_empty_endpoint_survives(self):
        settings = parse_config(dump_config(RunSettings()))
        assert settings.endpoint == ""
