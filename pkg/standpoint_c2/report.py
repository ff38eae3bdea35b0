"""Suite results and their rendering.

This module defines:
- CaseResult: outcome of one property check
- SuiteReport: the ordered results of one suite run
- ReportBuilder: ergonomic accumulation of case results
- print_report / print_summary: s-expression and one-line renderings
"""

import re
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

CaseStatus = Literal["pass", "fail", "skip"]

_UNSAFE = re.compile(r"[();\s]+")


class CaseResult(BaseModel):
    """Outcome of one case; skip means the check could not complete within budget."""
    model_config = ConfigDict(frozen=True)

    name: str
    status: CaseStatus
    note: str = ""
    counts: dict[str, int] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "fail"


class SuiteReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    seed: int
    cases: tuple[CaseResult, ...] = ()
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [case for case in self.cases if case.status == "fail"]

    def tally(self) -> dict[str, int]:
        """Number of cases per status plus the summed per-case counts."""
        totals = {"cases": len(self.cases), "passed": 0, "failed": 0, "skipped": 0}
        for case in self.cases:
            totals[{"pass": "passed", "fail": "failed", "skip": "skipped"}[case.status]] += 1
            for key, value in case.counts.items():
                totals[key] = totals.get(key, 0) + value
        return totals


class ReportBuilder:
    """Builder for suite reports.

    Cases may be added in any order; to_report sorts them by name.
    """

    def __init__(self, suite: str, seed: int = 0):
        self.suite = suite
        self.seed = seed
        self._cases: list[CaseResult] = []

    def add(self, case: CaseResult) -> "ReportBuilder":
        self._cases.append(case)
        return self

    def extend(self, cases: list[CaseResult]) -> "ReportBuilder":
        self._cases.extend(cases)
        return self

    def add_pass(self, name: str, note: str = "", **counts: int) -> "ReportBuilder":
        return self.add(CaseResult(name=name, status="pass", note=note, counts=counts))

    def add_fail(self, name: str, note: str, **counts: int) -> "ReportBuilder":
        return self.add(CaseResult(name=name, status="fail", note=note, counts=counts))

    def add_skip(self, name: str, note: str) -> "ReportBuilder":
        return self.add(CaseResult(name=name, status="skip", note=note))

    def to_report(self, elapsed: float = 0.0) -> SuiteReport:
        names = [case.name for case in self._cases]
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate case names in suite '{self.suite}'")
        return SuiteReport(
            suite=self.suite,
            seed=self.seed,
            cases=tuple(sorted(self._cases, key=lambda c: c.name)),
            elapsed=elapsed,
        )


def _words(text: str) -> str:
    return " ".join(w for w in _UNSAFE.split(text) if w)


def print_report(report: SuiteReport) -> str:
    """Render a report in the same s-expression syntax as every other output."""
    tally = report.tally()
    summary = " ".join(f"({key} {value})" for key, value in tally.items())
    lines = [
        f"(report {report.suite}",
        f"  (seed {report.seed})",
        f"  (verdict {'pass' if report.passed else 'fail'})",
        f"  (summary {summary})",
    ]
    for case in report.cases:
        counts = "".join(f" ({key} {value})" for key, value in sorted(case.counts.items()))
        note = f" (note {_words(case.note)})" if case.note.strip() else ""
        lines.append(f"  (case {case.name} {case.status}{counts}{note})")
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def print_summary(report: SuiteReport) -> str:
    tally = report.tally()
    verdict = "PASS" if report.passed else "FAIL"
    extra = ", ".join(f"{k}={v}" for k, v in tally.items() if k not in ("cases", "passed", "failed", "skipped"))
    text = (
        f"{report.suite}: {verdict} {tally['passed']}/{tally['cases']} passed, "
        f"{tally['failed']} failed, {tally['skipped']} skipped (seed {report.seed})"
    )
    lines = [text + (f" [{extra}]" if extra else "")]
    lines += [f"  FAIL {case.name}: {case.note}" for case in report.failures]
    return "\n".join(lines) + "\n"
