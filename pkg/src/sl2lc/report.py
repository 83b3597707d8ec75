"""
Verification reports.

A report is serialised as JSON with a fixed key order:
{version, config, results: [{p, n_eta, w_pi, character, checks: [{name,
status, lhs, rhs, paper_anchor, ms}]}]}. Exact values are cyclotomic strings;
the float approximations next to them are advisory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .cyclo import CycNum
from .laurent import LaurentPoly

REPORT_VERSION = 1


class Status(str, Enum):
    """Outcome of one check."""

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class Value:
    """
    One side of a checked identity.

    Attributes:
        exact: Exact rendering, e.g. ``"-1/3*z^4 + 1/3*z^2"``
        approx: Complex approximation [re, im] when the value is a number
    """

    exact: str
    approx: tuple[float, float] | None = None

    @classmethod
    def of(cls, value: object) -> Value:
        """Render a cyclotomic number, a monomial or anything printable."""
        if isinstance(value, CycNum):
            z = value.embed()
            return cls(str(value), (round(z.real, 12), round(z.imag, 12)))
        if isinstance(value, LaurentPoly) and value.is_monomial():
            z = value.leading.embed()
            return cls(str(value), (round(z.real, 12), round(z.imag, 12)))
        if isinstance(value, Value):
            return value
        return cls(str(value))

    def to_dict(self) -> dict[str, Any]:
        return {"exact": self.exact, "approx": list(self.approx) if self.approx else None}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Value:
        approx = data.get("approx")
        return cls(data["exact"], tuple(approx) if approx else None)


@dataclass(frozen=True)
class CheckRecord:
    """
    Result of one named check.

    Attributes:
        name: Check name from :mod:`sl2lc.anchors`
        status: pass, fail or skipped
        lhs: Computed side
        rhs: Expected side, or the error text of a failed computation
        anchor: The identity the check verifies
        ms: Elapsed milliseconds, 0 in reproducible mode
    """

    name: str
    status: Status
    lhs: Value
    rhs: Value
    anchor: str
    ms: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "paper_anchor": self.anchor,
            "ms": self.ms,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CheckRecord:
        return cls(
            name=data["name"],
            status=Status(data["status"]),
            lhs=Value.from_dict(data["lhs"]),
            rhs=Value.from_dict(data["rhs"]),
            anchor=data["paper_anchor"],
            ms=data["ms"],
        )


@dataclass(frozen=True)
class ConfigResult:
    """
    All checks run for one prime and one extended character.

    Attributes:
        p: The prime
        n_eta: Level of the character
        w_pi: Value of the extension at the uniformizer
        character: Character label, e.g. ``"chi_-4/w=+1"``
        checks: Check records in execution order
    """

    p: int
    n_eta: int
    w_pi: int
    character: str
    checks: tuple[CheckRecord, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.status is not Status.FAIL for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "n_eta": self.n_eta,
            "w_pi": self.w_pi,
            "character": self.character,
            "checks": [c.to_dict() for c in self.checks],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ConfigResult:
        return cls(
            p=data["p"],
            n_eta=data["n_eta"],
            w_pi=data["w_pi"],
            character=data["character"],
            checks=tuple(CheckRecord.from_dict(c) for c in data["checks"]),
        )


@dataclass(frozen=True)
class Report:
    """
    A full verification run.

    Attributes:
        config: The run configuration as plain JSON values
        results: One entry per configuration, sorted by (p, character, w_pi)
        version: Report format version
    """

    config: dict[str, Any] = field(default_factory=dict)
    results: tuple[ConfigResult, ...] = ()
    version: int = REPORT_VERSION

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        """0 if no check failed, 1 otherwise."""
        return 0 if self.all_passed else 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "config": self.config,
            "results": [r.to_dict() for r in self.results],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Report:
        """
        Rebuild a report from its dictionary form.

        Raises:
            ValueError: If the version is not supported
        """
        if data.get("version") != REPORT_VERSION:
            raise ValueError(f"Unsupported report version: {data.get('version')}")
        return cls(
            config=data["config"],
            results=tuple(ConfigResult.from_dict(r) for r in data["results"]),
            version=data["version"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        """Render the report as a fixed-width table."""
        header = f"{'p':>3} {'n':>2} {'w':>3} {'character':<16} {'check':<26} {'status':<7} {'ms':>7}  lhs"
        lines = [header, "-" * len(header)]
        for r in self.results:
            for c in r.checks:
                lines.append(
                    f"{r.p:>3} {r.n_eta:>2} {r.w_pi:>+3d} {r.character:<16} "
                    f"{c.name:<26} {c.status.value:<7} {c.ms:>7}  {c.lhs.exact}"
                )
        failed = sum(c.status is Status.FAIL for r in self.results for c in r.checks)
        total = sum(len(r.checks) for r in self.results)
        lines.append(f"{total - failed}/{total} checks passed")
        return "\n".join(lines) + "\n"
