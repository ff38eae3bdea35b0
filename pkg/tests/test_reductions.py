"""Tests for standpoint_c2.reductions module."""

import pytest
from standpoint_c2.config import SearchConfig
from standpoint_c2.parser import ParseError
from standpoint_c2.reductions import CURATED_CASES, ReductionCase, ReductionReport, parse_cases, print_case, run_case

CASES = {case.name: case for case in CURATED_CASES}
SMALL = SearchConfig(budget=200_000)


class TestRunCase:
    """Test running curated cases."""

    def test_explicit_model(self):
        """Test a tileable case is confirmed by its explicit model."""
        report = run_case(CASES["trivial-1"], SMALL)
        assert report.verdict == "sat-evidence"
        assert report.note == "explicit tiling model"
        assert report.witness_domain == 5
        assert report.gci_count == 23
        assert report.passed

    def test_unknown_case_without_witness(self):
        """Test an unknown case with no bounded witness records bounds, not a verdict."""
        report = run_case(CASES["open-2"], SMALL)
        assert report.verdict is None
        assert report.note == "no witness within bounds (1, 1)"
        assert report.passed

    def test_budget_exceeded(self):
        """Test running out of budget gives no verdict."""
        case = CASES["incompatible-2"]
        report = run_case(case, SearchConfig(budget=1))
        assert report.verdict is None
        assert report.note == "budget exceeded"
        assert not report.passed

    def test_passed(self):
        """Test a report passes when its verdict matches or nothing was expected."""
        assert ReductionReport(name="a", expected="unknown").passed
        assert not ReductionReport(name="a", expected="sat-evidence", verdict="unsat-evidence").passed


class TestCaseFiles:
    """Test reading and printing case files."""

    def test_round_trip(self):
        """Test printed curated cases read back in order."""
        text = "".join(print_case(case) for case in CURATED_CASES)
        assert parse_cases(text) == list(CURATED_CASES)

    def test_defaults(self):
        """Test omitted sections fall back to defaults."""
        (case,) = parse_cases("; one case\n(case tiny (tiles 1) (h (1 1)))")
        assert case == ReductionCase(name="tiny", tiling=case.tiling)
        assert case.tiling.h == frozenset({(1, 1)})
        assert case.tiling.init == (1,)

    @pytest.mark.parametrize(
        "text, message",
        [
            ("", "no case"),
            ("(suite x)", "expected \\(case name"),
            ("(case bad/name)", "case name"),
            ("(case x (tiles 2) (colour 1))", "unknown case section"),
            ("(case x (tiles 1) (init 3))", "invalid case"),
            ("(case x (tiles 1) (h (1)))", "tile pair"),
            ("(case x (tiles 1) (expect maybe))", "sat-evidence"),
            ("(case x (tiles 1) (bounds 0 1))", "two positive integers"),
        ],
    )
    def test_errors(self, text, message):
        """Test malformed case files name the problem."""
        with pytest.raises(ParseError, match=message):
            parse_cases(text)
