"""Tests for standpoint_c2.report module."""

import pytest
from standpoint_c2.report import CaseResult, ReportBuilder, SuiteReport, print_report, print_summary


def sample_report() -> SuiteReport:
    return (
        ReportBuilder("frugal-equisat", seed=3)
        .add_pass("b-case", sentences=2)
        .add_fail("a-case", "lifted model (is not) a model", sentences=1)
        .add_skip("c-case", "budget exceeded")
        .to_report(elapsed=0.5)
    )


class TestReportBuilder:
    """Test accumulating case results."""

    def test_cases_sorted_by_name(self):
        """Test cases come out sorted whatever the insertion order."""
        assert [case.name for case in sample_report().cases] == ["a-case", "b-case", "c-case"]

    def test_duplicate_names(self):
        """Test two cases with the same name are rejected."""
        builder = ReportBuilder("s").add_pass("x").add_pass("x")
        with pytest.raises(ValueError, match="Duplicate case names"):
            builder.to_report()

    def test_extend(self):
        """Test extend adds prebuilt results."""
        report = ReportBuilder("s").extend([CaseResult(name="x", status="pass")]).to_report()
        assert report.passed
        assert report.cases[0].name == "x"


class TestSuiteReport:
    """Test report verdicts and tallies."""

    def test_skip_is_not_failure(self):
        """Test skipped cases do not fail a report."""
        report = ReportBuilder("s").add_pass("a").add_skip("b", "budget").to_report()
        assert report.passed
        assert report.failures == []

    def test_tally(self):
        """Test the tally counts statuses and sums case counts."""
        assert sample_report().tally() == {"cases": 3, "passed": 1, "failed": 1, "skipped": 1, "sentences": 3}

    def test_failures(self):
        """Test failures lists only failed cases."""
        report = sample_report()
        assert not report.passed
        assert [case.name for case in report.failures] == ["a-case"]


class TestRendering:
    """Test report rendering."""

    def test_print_report(self):
        """Test the s-expression report lists every case with a sanitized note."""
        assert print_report(sample_report()) == (
            "(report frugal-equisat\n"
            "  (seed 3)\n"
            "  (verdict fail)\n"
            "  (summary (cases 3) (passed 1) (failed 1) (skipped 1) (sentences 3))\n"
            "  (case a-case fail (sentences 1) (note lifted model is not a model))\n"
            "  (case b-case pass (sentences 2))\n"
            "  (case c-case skip (note budget exceeded)))\n"
        )

    def test_print_summary(self):
        """Test the one-line summary names failures."""
        assert print_summary(sample_report()) == (
            "frugal-equisat: FAIL 1/3 passed, 1 failed, 1 skipped (seed 3) [sentences=3]\n"
            "  FAIL a-case: lifted model (is not) a model\n"
        )
