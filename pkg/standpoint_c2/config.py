"""Configuration models: search limits and the CLI invocation."""

import os
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "SPC_BUDGET"


class SearchConfig(BaseModel):
    """Limits for bounded search and closure construction."""
    model_config = ConfigDict(frozen=True)

    budget: int = Field(default=DEFAULT_BUDGET, ge=1)
    max_domain: int = Field(default=3, ge=1)
    max_worlds: int = Field(default=3, ge=1)
    closure_guard_domain: int = Field(default=5, ge=1)
    closure_guard_worlds: int = Field(default=10**4, ge=1)

    @classmethod
    def from_env(cls, budget: int | None = None) -> "SearchConfig":
        """Explicit budget wins over SPC_BUDGET, which wins over the default."""
        if budget is None and os.environ.get(BUDGET_ENV):
            budget = int(os.environ[BUDGET_ENV])
        return cls(budget=budget) if budget is not None else cls()


Command = Literal[
    "check", "frugalize", "translate", "dl2fosl", "eval", "bsat", "verify", "gen-tiling", "gen-grid"
]


class CliConfig(BaseModel):
    """A parsed `spc` invocation."""
    model_config = ConfigDict(frozen=True)

    command: Command
    input: Path | None = None
    output: Path | None = None
    model: Path | None = None
    world: str | None = None
    max_domain: int | None = Field(default=None, ge=1)
    max_worlds: int | None = Field(default=None, ge=1)
    budget: int | None = Field(default=None, ge=1)
    fo: bool = False
    expect: Literal["sat", "unsat"] | None = None
    emit_parts: bool = False
    params: bool = False
    report: bool = False
    mode: Literal["alcoiq", "sroiq"] | None = None
    suite: str | None = None
    seed: int = 0
    cases: Path | None = None
    k: int = Field(default=1, ge=1)
    h: tuple[tuple[int, int], ...] = ()
    v: tuple[tuple[int, int], ...] = ()
    init: tuple[int, ...] = (1,)
    verbose: bool = False

    @model_validator(mode="after")
    def validate_inputs(self) -> "CliConfig":
        needs_input = {"check", "frugalize", "translate", "dl2fosl", "eval", "bsat"}
        if self.command in needs_input and self.input is None:
            raise ValueError(f"'{self.command}' requires an input file")
        if self.command == "eval" and self.model is None:
            raise ValueError("'eval' requires --model")
        if self.command == "verify" and not self.suite:
            raise ValueError("'verify' requires --suite")
        if self.emit_parts and self.output is None:
            raise ValueError("--emit-parts requires --output")
        return self

    @property
    def search(self) -> SearchConfig:
        """Search limits: flags first, then SPC_BUDGET, then defaults."""
        base = SearchConfig.from_env(self.budget)
        return base.model_copy(update={
            "max_domain": self.max_domain or base.max_domain,
            "max_worlds": self.max_worlds or base.max_worlds,
        })

    def suite_overrides(self) -> dict[str, int | str]:
        """Explicitly given flags that a suite may accept as keyword parameters."""
        overrides: dict[str, int | str] = {"seed": self.seed}
        for key in ("max_domain", "max_worlds"):
            if getattr(self, key) is not None:
                overrides[key] = getattr(self, key)
        if self.budget is not None or os.environ.get(BUDGET_ENV):
            overrides["budget"] = SearchConfig.from_env(self.budget).budget
        if self.cases is not None:
            overrides["cases_file"] = str(self.cases)
        return overrides
