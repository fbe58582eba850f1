"""Test suite for report.py - validation reports."""

from src.curvedalg.gmod import GradedMap, base_module, identity, zero
from src.curvedalg.report import ValidationReport


class TestValidationReport:
    """Test cases for ValidationReport."""

    def test_fresh_report_passes(self):
        """Test the initial state."""
        report = ValidationReport()
        assert report.is_valid
        assert report.violated_eq is None
        assert str(report) == "Validation: PASSED"

    def test_check_records_first_difference(self, fp7):
        """Test that a failed comparison names the equation and the entry."""
        M = base_module(fp7, [0, 0])
        report = ValidationReport()
        assert report.check("same", identity(M), identity(M))
        assert not report.check("swap", identity(M), GradedMap(M, M, 0, rows={0: {1: 1}, 1: {0: 1}}))
        assert report.checked == ["same", "swap"]
        assert report.violated_eq == "swap"
        assert report.witness == [0, 0]

    def test_check_on_rows(self, fp7):
        """Test that a row window hides differences outside it."""
        M = base_module(fp7, [0, 0])
        report = ValidationReport()
        assert report.check("window", identity(M), GradedMap(M, M, 0, rows={0: {0: 1}}), rows=[0])
        assert report.is_valid

    def test_first_violation_kept(self):
        """Test that later failures do not overwrite the first."""
        report = ValidationReport()
        report.require("first", False, [1])
        report.require("second", False, [2])
        assert report.violated_eq == "first"
        assert report.witness == [1]
        assert len(report.errors) == 2

    def test_merge_prefixes(self, fp7):
        """Test that merged reports carry a prefix."""
        M = base_module(fp7, [0])
        inner = ValidationReport()
        inner.check("unit", identity(M), zero(M, M, 0))
        inner.add_warning("vacuous")
        outer = ValidationReport().merge(inner, "f.")
        assert not outer.is_valid
        assert outer.violated_eq == "f.unit"
        assert outer.checked == ["f.unit"]
        assert outer.errors[0].startswith("f.unit")
        assert outer.warnings == ["vacuous"]

    def test_to_dict(self):
        """Test the JSON form."""
        report = ValidationReport()
        report.require("counit", False, [3, 0], "off by one")
        assert report.to_dict() == {
            "pass": False,
            "violated_eq": "counit",
            "witness_word": [3, 0],
            "errors": ["counit: off by one"],
            "checked": ["counit"],
        }

    def test_str_lists_errors(self):
        """Test the text form of a failed report."""
        report = ValidationReport()
        report.require("counit", False)
        text = str(report)
        assert text.startswith("Validation: FAILED")
        assert "counit: does not hold" in text
