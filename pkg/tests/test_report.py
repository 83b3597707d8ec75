"""Tests for report.py - report records and serialisation."""

import json

import pytest

from sl2lc.cyclo import CyclotomicField
from sl2lc.laurent import LaurentPoly
from sl2lc.report import CheckRecord, ConfigResult, Report, Status, Value


def make_record(name="plancherel", status=Status.PASS):
    """A check record with simple values."""
    return CheckRecord(name, status, Value("3", (3.0, 0.0)), Value("3", (3.0, 0.0)), "mu = q^n")


def make_report(*statuses):
    """A report with one configuration holding one check per status."""
    checks = tuple(make_record(f"check-{i}", s) for i, s in enumerate(statuses))
    result = ConfigResult(3, 1, 1, "legendre_3/w=+1", checks)
    return Report(config={"primes": [3]}, results=(result,))


class TestValue:
    """Tests for Value."""

    def test_of_cyclotomic(self):
        """Test a cyclotomic number gets its complex approximation."""
        value = Value.of(CyclotomicField(4).zeta())
        assert value.exact == "1*z^1"
        assert value.approx == (0.0, 1.0)

    def test_of_monomial(self):
        """Test a monomial is approximated by its coefficient."""
        field = CyclotomicField(4)
        value = Value.of(LaurentPoly.monomial(field.rational(2), 1))
        assert value.exact == "(2)*X^1"
        assert value.approx == (2.0, 0.0)

    def test_of_other(self):
        """Test anything else is rendered as text only."""
        assert Value.of("3/3 cases") == Value("3/3 cases")
        assert Value.of(Value("x")) == Value("x")

    def test_dict(self):
        """Test the dictionary form."""
        assert Value("1", (1.0, 0.0)).to_dict() == {"exact": "1", "approx": [1.0, 0.0]}
        assert Value("ok").to_dict() == {"exact": "ok", "approx": None}
        assert Value.from_dict({"exact": "1", "approx": [1.0, 0.0]}) == Value("1", (1.0, 0.0))


class TestCheckRecord:
    """Tests for CheckRecord."""

    def test_key_order(self):
        """Test the serialised keys and their order."""
        data = make_record().to_dict()
        assert list(data) == ["name", "status", "lhs", "rhs", "paper_anchor", "ms"]
        assert data["status"] == "pass"

    def test_from_dict(self):
        """Test a record survives its dictionary form."""
        record = make_record(status=Status.FAIL)
        assert CheckRecord.from_dict(record.to_dict()) == record


class TestReport:
    """Tests for Report."""

    def test_empty(self):
        """Test an empty report passes."""
        report = Report()
        assert report.all_passed
        assert report.exit_code == 0
        assert report.to_dict() == {"version": 1, "config": {}, "results": []}

    def test_exit_code(self):
        """Test a failed check gives exit code 1 and skipped checks do not."""
        assert make_report(Status.PASS, Status.SKIPPED).exit_code == 0
        assert make_report(Status.PASS, Status.FAIL).exit_code == 1
        assert not make_report(Status.FAIL).results[0].passed

    def test_json(self):
        """Test the JSON form and its reconstruction."""
        report = make_report(Status.PASS, Status.FAIL)
        text = report.to_json()
        assert text.endswith("\n")
        data = json.loads(text)
        assert list(data) == ["version", "config", "results"]
        assert list(data["results"][0]) == ["p", "n_eta", "w_pi", "character", "checks"]
        assert Report.from_json(text) == report

    def test_unsupported_version(self):
        """Test an unknown version is rejected."""
        with pytest.raises(ValueError, match="Unsupported report version"):
            Report.from_dict({"version": 2, "config": {}, "results": []})

    def test_text(self):
        """Test the fixed-width table."""
        text = make_report(Status.PASS, Status.FAIL).to_text()
        lines = text.splitlines()
        assert lines[0].split()[:4] == ["p", "n", "w", "character"]
        assert "legendre_3/w=+1" in lines[2]
        assert "+1" in lines[2]
        assert lines[-1] == "1/2 checks passed"
