"""Tests for config.py - run configuration."""

import pytest

from sl2lc.anchors import SUITES
from sl2lc.config import DEFAULT_PRIMES, RunConfig, parse_primes, parse_w_pi
from sl2lc.errors import ConfigurationError


class TestParsers:
    """Tests for the value parsers."""

    def test_parse_primes(self):
        """Test comma-separated primes."""
        assert parse_primes("2, 3,5") == (2, 3, 5)
        assert parse_primes("7,") == (7,)

    def test_parse_primes_invalid(self):
        """Test a non-integer entry is rejected."""
        with pytest.raises(ConfigurationError, match="Invalid prime list"):
            parse_primes("2,three")

    @pytest.mark.parametrize(
        "text,expected", [("both", (1, -1)), ("+1", (1,)), ("1", (1,)), ("-1", (-1,))]
    )
    def test_parse_w_pi(self, text, expected):
        """Test the accepted w_pi values."""
        assert parse_w_pi(text) == expected

    def test_parse_w_pi_invalid(self):
        """Test other w_pi values are rejected."""
        with pytest.raises(ConfigurationError, match="w_pi"):
            parse_w_pi("2")


class TestRunConfig:
    """Tests for RunConfig."""

    def test_defaults(self):
        """Test the default configuration is valid."""
        cfg = RunConfig()
        assert cfg.primes == DEFAULT_PRIMES
        assert cfg.suites == tuple(SUITES)
        cfg.validate()

    def test_from_env(self):
        """Test values are read from SL2LC_ variables."""
        cfg = RunConfig.from_env(
            {
                "SL2LC_PRIMES": "3,5",
                "SL2LC_W_PI": "-1",
                "SL2LC_JOBS": "4",
                "SL2LC_FORMAT": "text",
                "SL2LC_REPRODUCIBLE": "yes",
                "SL2LC_LOG_LEVEL": "debug",
                "OTHER": "ignored",
            }
        )
        assert cfg.primes == (3, 5)
        assert cfg.w_pi == (-1,)
        assert cfg.jobs == 4
        assert cfg.format == "text"
        assert cfg.reproducible
        assert cfg.log_level == "DEBUG"
        assert cfg.seed == 0

    def test_from_env_bad_integer(self):
        """Test an unparsable integer names its variable."""
        with pytest.raises(ConfigurationError, match="SL2LC_JOBS"):
            RunConfig.from_env({"SL2LC_JOBS": "many"})

    def test_with_overrides(self):
        """Test None overrides leave values unchanged."""
        cfg = RunConfig(seed=5).with_overrides(seed=None, jobs=2)
        assert cfg.seed == 5
        assert cfg.jobs == 2

    @pytest.mark.parametrize(
        "overrides,message",
        [
            ({"primes": ()}, "No primes"),
            ({"primes": (4,)}, "not prime"),
            ({"suites": ("nope",)}, "Unknown suite"),
            ({"w_pi": (2,)}, "w_pi"),
            ({"primes": (2,), "shell_depth": 4}, "Shell depth"),
            ({"torus_range": 1}, "Torus range"),
            ({"jobs": 0}, "Jobs"),
            ({"format": "xml"}, "Format"),
        ],
    )
    def test_validate(self, overrides, message):
        """Test each invalid configuration is rejected."""
        cfg = RunConfig(**overrides)
        with pytest.raises(ConfigurationError, match=message):
            cfg.validate()

    def test_shell_depth_for_odd_prime(self):
        """Test a shell depth of level + 2 is accepted at odd p."""
        RunConfig(primes=(3,), shell_depth=3).validate()

    def test_to_dict(self):
        """Test the report header uses plain lists."""
        data = RunConfig(primes=(3,)).to_dict()
        assert data["primes"] == [3]
        assert data["w_pi"] == [1, -1]
        assert data["out"] is None
