import asyncio
import logging
import time
from collections.abc import Callable, Iterable

from .report import CaseResult

logger = logging.getLogger(__name__)

CaseThunk = Callable[[], CaseResult | list[CaseResult]]


async def run_cases_in_parallel(cases: Iterable[CaseThunk]) -> list[CaseResult]:
    """Execute independent case checks in worker threads.

    The checks are pure Python and share the GIL, so threads keep the event
    loop responsive rather than adding CPU parallelism. Results are the same
    in any scheduling order.

    Args:
        cases: Zero-argument callables, each returning one or more CaseResults

    Returns:
        The flattened results ordered by case name
    """

    async def execute_case(case: CaseThunk) -> list[CaseResult]:
        started = time.perf_counter()
        outcome = await asyncio.to_thread(case)
        results = outcome if isinstance(outcome, list) else [outcome]
        for result in results:
            if not isinstance(result, CaseResult):
                raise TypeError(f"Expected CaseResult, got {type(result).__name__}")
            logger.debug("case %s: %s in %.3fs", result.name, result.status, time.perf_counter() - started)
        return results

    # Exceptions propagate
    batches = await asyncio.gather(*[execute_case(case) for case in cases])

    all_results = [result for batch in batches for result in batch]
    return sorted(all_results, key=lambda r: r.name)

