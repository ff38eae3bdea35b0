"""Suite decorator that records suite metadata on the function.

Usage:
    from standpoint_c2 import verify

    @verify.suite(description="Closure evaluation is permutation invariant")
    async def closure_invariance(seed: int = 0, max_domain: int = 3) -> list[CaseResult]:
        ...
"""

import inspect
from typing import Any, Callable

from pydantic import create_model

from .core import CaseSchema


def _parameters_schema(func: Callable) -> dict[str, Any]:
    """JSON schema of the keyword parameters of func."""
    fields: dict[str, Any] = {}
    for param in inspect.signature(func).parameters.values():
        if param.kind in (param.VAR_POSITIONAL, param.VAR_KEYWORD):
            raise ValueError(f"Suite '{func.__name__}' may not take *args or **kwargs")
        annotation = Any if param.annotation is inspect.Parameter.empty else param.annotation
        default = ... if param.default is inspect.Parameter.empty else param.default
        fields[param.name] = (annotation, default)
    return create_model(f"{func.__name__}_parameters", **fields).model_json_schema()


class SuiteDecorators:
    """Namespace for verification-suite decorators"""

    @staticmethod
    def suite(
        name: str | None = None,
        description: str | None = None,
        aliases: tuple[str, ...] = (),
    ) -> Callable:
        """Attach suite metadata without registering the function anywhere.

        Args:
            name: Suite name (defaults to function name)
            description: Suite description (defaults to the docstring)
            aliases: Other names the suite can be run under

        Returns:
            Decorated function with _case_schema attached
        """
        def decorator(func: Callable) -> Callable:
            if not inspect.iscoroutinefunction(func):
                raise TypeError(f"Suite '{func.__name__}' must be an async function")
            func._case_schema = CaseSchema(
                name=name or func.__name__,
                aliases=tuple(aliases),
                description=description or inspect.getdoc(func),
                parameters=_parameters_schema(func),
            )
            return func

        return decorator


# Create singleton instance for import
verify = SuiteDecorators()
