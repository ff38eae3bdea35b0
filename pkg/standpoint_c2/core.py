import logging
import time
from typing import Any, Callable

from pydantic import BaseModel, ConfigDict

from .report import ReportBuilder, SuiteReport

logger = logging.getLogger(__name__)


class CaseSchema(BaseModel):
    """Schema for a verification suite that can be run.

    This captures the suite name, the other names it answers to, its
    description and the JSON schema of its keyword parameters, so the CLI
    can find suites and pass them only the flags they accept.
    """
    model_config = ConfigDict(frozen=True)

    name: str
    description: str | None
    parameters: dict[str, Any]
    aliases: tuple[str, ...] = ()

    @property
    def accepted(self) -> frozenset[str]:
        return frozenset(self.parameters.get("properties", {}))

    @classmethod
    def from_func(cls, function: Callable) -> 'CaseSchema':
        """Extract the schema from a decorated or bound suite function"""
        suite_func = getattr(function, '__suite_func__', function)
        case_schema = getattr(suite_func, '_case_schema', None)
        if not case_schema:
            raise ValueError("Function missing @verify.suite _case_schema metadata")
        return case_schema


def report_wrapper_for_func(func: Callable) -> Callable:
    """Returns a wrapped callable that runs a suite and packages a SuiteReport.

    Args:
        func: The suite function to wrap

    Returns:
        Wrapped async function returning a SuiteReport
    """
    schema = CaseSchema.from_func(func)

    async def wrapped(**kwargs) -> SuiteReport:
        started = time.perf_counter()
        results = await func(**kwargs)
        builder = ReportBuilder(schema.name, seed=kwargs.get("seed", 0)).extend(results)
        report = builder.to_report(elapsed=time.perf_counter() - started)
        tally = report.tally()
        logger.info(
            "suite %s: %d cases, %d failed, %d skipped in %.2fs",
            schema.name, tally["cases"], tally["failed"], tally["skipped"], report.elapsed,
        )
        return report

    wrapped.__suite_func__ = func  # type: ignore[attr-defined]
    return wrapped


class VerifyContext:
    """Registry of bound suites, looked up by name or alias."""

    def __init__(self):
        self._name_to_bound_suite: dict[str, Callable] = {}
        self._alias_to_name: dict[str, str] = {}

    def _bind[F](self, suite: F) -> F:
        """Bind a suite function so that calling it returns a SuiteReport.

        Args:
            suite: The suite function decorated with @verify.suite

        Returns:
            The bound suite callable

        Raises:
            ValueError: If the suite's name or an alias is already taken
        """
        case_schema = CaseSchema.from_func(suite)  # type: ignore[arg-type]
        for key in (case_schema.name, *case_schema.aliases):
            if key in self._name_to_bound_suite or key in self._alias_to_name:
                raise ValueError(f"Duplicate suite name '{key}' detected during binding.")
        bound = report_wrapper_for_func(suite)  # type: ignore[arg-type]
        self._name_to_bound_suite[case_schema.name] = bound
        self._alias_to_name.update(dict.fromkeys(case_schema.aliases, case_schema.name))
        return bound  # type: ignore[return-value]

    @property
    def suite_names(self) -> list[str]:
        return sorted(self._name_to_bound_suite)

    def get_suite(self, suite_name: str) -> Callable:
        """Get the bound suite by its registered name or one of its aliases.

        Args:
            suite_name: A name or alias given to @verify.suite

        Returns:
            The bound suite callable

        Raises:
            ValueError: If no suite with that name is bound
        """
        name = self._alias_to_name.get(suite_name, suite_name)
        bound_suite = self._name_to_bound_suite.get(name)
        if not bound_suite:
            raise ValueError(f"Bound suite not found for '{suite_name}'")
        return bound_suite
