"""
Run configuration.

Values come from the dataclass defaults, then ``SL2LC_*`` environment
variables, then command-line flags.
"""

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, replace
from typing import Any, Mapping

from sympy import isprime

from .anchors import SUITES
from .errors import ConfigurationError
from .localfield import ramified_quadratic_chars

log = logging.getLogger(__name__)

ENV_PREFIX = "SL2LC_"
DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)
FORMATS = ("json", "text")


def parse_primes(text: str) -> tuple[int, ...]:
    """
    Parse ``"2,3,5"``.

    Raises:
        ConfigurationError: If an entry is not an integer
    """
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise ConfigurationError(f"Invalid prime list {text!r}") from e


def parse_w_pi(text: str) -> tuple[int, ...]:
    """
    Parse ``"+1"``, ``"-1"`` or ``"both"``.

    Raises:
        ConfigurationError: For any other value
    """
    match text.strip():
        case "both":
            return (1, -1)
        case "+1" | "1":
            return (1,)
        case "-1":
            return (-1,)
    raise ConfigurationError(f"w_pi must be +1, -1 or both, got {text!r}")


def _parse_int(name: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as e:
        raise ConfigurationError(f"{ENV_PREFIX}{name} must be an integer, got {text!r}") from e


def _parse_bool(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class RunConfig:
    """
    Parameters of a verification run.

    Attributes:
        primes: Primes to verify
        w_pi: Values of the extension at the uniformizer
        shell_depth: Truncation depth m, None for level + 4 per character
        torus_range: Torus valuations |k| <= torus_range evaluated by projections
        suites: Suite names from :data:`sl2lc.anchors.SUITES`
        jobs: Configurations run in parallel
        seed: Seed for randomized checks
        format: ``json`` or ``text``
        out: Output path, None for stdout
        reproducible: Zero the elapsed times
        log_level: Logging level name
    """

    primes: tuple[int, ...] = DEFAULT_PRIMES
    w_pi: tuple[int, ...] = (1, -1)
    shell_depth: int | None = None
    torus_range: int = 3
    suites: tuple[str, ...] = tuple(SUITES)
    jobs: int = 1
    seed: int = 0
    format: str = "json"
    out: str | None = None
    reproducible: bool = False
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> RunConfig:
        """
        Build a configuration from ``SL2LC_*`` variables over the defaults.

        Raises:
            ConfigurationError: If a variable cannot be parsed
        """
        env = os.environ if environ is None else environ
        values: dict[str, Any] = {}
        for key in (
            "PRIMES",
            "W_PI",
            "SHELL_DEPTH",
            "TORUS_RANGE",
            "JOBS",
            "SEED",
            "FORMAT",
            "OUT",
            "REPRODUCIBLE",
            "LOG_LEVEL",
        ):
            text = env.get(ENV_PREFIX + key)
            if text is None:
                continue
            match key:
                case "PRIMES":
                    values["primes"] = parse_primes(text)
                case "W_PI":
                    values["w_pi"] = parse_w_pi(text)
                case "SHELL_DEPTH" | "TORUS_RANGE" | "JOBS" | "SEED":
                    values[key.lower()] = _parse_int(key, text)
                case "REPRODUCIBLE":
                    values["reproducible"] = _parse_bool(text)
                case "LOG_LEVEL":
                    values["log_level"] = text.upper()
                case _:
                    values[key.lower()] = text
        return cls(**values)

    def with_overrides(self, **overrides: Any) -> RunConfig:
        """Copy with every override that is not None applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def validate(self) -> None:
        """
        Check the configuration before any computation.

        Raises:
            ConfigurationError: On a non-prime p, an unknown suite or format,
                a shell depth below level + 2, a torus range below 2, or
                fewer than one job
        """
        if not self.primes:
            raise ConfigurationError("No primes selected")
        for p in self.primes:
            if not isprime(p):
                raise ConfigurationError(f"{p} is not prime")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigurationError(f"Unknown suite(s): {', '.join(unknown)}")
        if not self.w_pi or any(w not in (1, -1) for w in self.w_pi):
            raise ConfigurationError(f"w_pi must be drawn from +1, -1, got {self.w_pi}")
        if self.shell_depth is not None:
            for p in self.primes:
                top = max(eta.level for eta in ramified_quadratic_chars(p))
                if self.shell_depth < top + 2:
                    raise ConfigurationError(
                        f"Shell depth {self.shell_depth} is below level + 2 = {top + 2} at p = {p}"
                    )
        if self.torus_range < 2:
            raise ConfigurationError(f"Torus range must be at least 2, got {self.torus_range}")
        if self.jobs < 1:
            raise ConfigurationError(f"Jobs must be at least 1, got {self.jobs}")
        if self.format not in FORMATS:
            raise ConfigurationError(f"Format must be json or text, got {self.format!r}")
        log.debug("Configuration %s is valid", self)

    def to_dict(self) -> dict[str, Any]:
        """Plain JSON values for the report header."""
        data = asdict(self)
        data["primes"] = list(self.primes)
        data["w_pi"] = list(self.w_pi)
        data["suites"] = list(self.suites)
        return data
