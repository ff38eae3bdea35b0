"""The `spc` command line.

Usage:
    spc check e.spf
    spc translate e.spf -o e-fo.spf --emit-parts
    spc bsat e.spf --max-domain 2 --max-worlds 2 --expect sat
    spc verify --suite closure-invariance --seed 7

Exit status is 0 on success, 1 when a property or an --expect check fails,
and 2 on usage, parse and search-limit errors.
"""

import argparse
import asyncio
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import TypeVar

from .config import CliConfig
from .core import CaseSchema
from .dl import dl_to_fosl
from .dl_normalize import dl_pipeline
from .errors import StandpointError
from .frugalizer import frugalize
from .gadgets import TilingSystem, gen_exp_tiling_tbox, gen_und_grid_gcis
from .parser import (
    ParseError,
    document_for,
    parse_dl,
    parse_formula,
    parse_structure,
    print_document,
    print_dl,
    print_formula,
    print_interpretation,
    print_ledger,
    print_structure,
)
from .reductions import parse_cases
from .removal import RemovalResult, removal_parts
from .report import print_report, print_summary
from .search import bounded_sat, bounded_sat_fo
from .semantics import eval, satisfies
from .suites import SuiteContext
from .syntax import fragment_report, is_c2, is_monodic

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

T = TypeVar("T")


class CliError(Exception):
    """A failure that has already been rendered for the terminal."""


# ============================================================================
# Input and Output
# ============================================================================

def _parse(path: Path, parse: Callable[[str], T]) -> T:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse(text)
    except ParseError as exc:
        raise CliError(f"{path}: {exc.render(text)}") from None


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}") from None
    logger.debug("wrote %s", path)


def _emit(config: CliConfig, text: str) -> None:
    if config.output is not None:
        _write(config.output, text)
    else:
        sys.stdout.write(text)


def _sibling(path: Path, suffix: str) -> Path:
    """e.spf with suffix '.stack.spf' becomes e.stack.spf"""
    return path.with_name(path.stem + suffix)


def _flag(value: bool) -> str:
    return "true" if value else "false"


# ============================================================================
# Subcommands
# ============================================================================

def _check(config: CliConfig) -> int:
    doc = _parse(config.input, parse_formula)
    report = fragment_report(doc.formula)
    fields = [
        ("c2", _flag(report.is_c2)),
        ("monodic", _flag(report.is_monodic)),
        ("s5", _flag(report.is_s5)),
        ("nullary-free", _flag(report.nullary_free)),
        ("constant-free", _flag(report.constant_free)),
        ("frugal", _flag(report.is_frugal)),
        ("needs-frugalize", _flag(not report.is_frugal)),
        ("size", report.size),
        ("standpoint-size", report.standpoint_size),
        ("dia", report.dia_count),
        ("free-dia", report.free_dia_count),
    ]
    body = "\n".join(f"  ({key} {value})" for key, value in fields)
    _emit(config, f"(fragment\n{body})\n")
    return EXIT_OK


def _frugalize(config: CliConfig) -> int:
    doc = _parse(config.input, parse_formula)
    g, ledger = frugalize(doc.formula)
    formula_text = print_document(document_for(g, doc.rigid))
    if config.output is None:
        sys.stdout.write(formula_text + print_ledger(ledger))
        return EXIT_OK
    _write(config.output, formula_text)
    _write(config.output.with_suffix(".ledger"), print_ledger(ledger))
    return EXIT_OK


def _print_params(result: RemovalResult) -> str:
    params = result.params
    lines = [f"(params\n  (ell {params.ell})\n  (m {params.m})\n  (dia {params.dia_count})"]
    for d, e in params.free_dia_index:
        lines.append(f"  (free-dia {e} {print_formula(d)})")
    return "\n".join(lines) + ")\n"


def _translate(config: CliConfig) -> int:
    doc = _parse(config.input, parse_formula)
    g, _ = frugalize(doc.formula)
    result = removal_parts(g)
    if config.params:
        sys.stdout.write(_print_params(result))
    _emit(config, print_document(document_for(result.formula)))
    if config.emit_parts:
        for suffix, part in ((".stack.spf", result.stack), (".rigid.spf", result.rigidity), (".trans.spf", result.trans)):
            _write(_sibling(config.output, suffix), print_document(document_for(part)))
    return EXIT_OK


def _dl2fosl(config: CliConfig) -> int:
    doc = _parse(config.input, lambda text: parse_dl(text, config.mode))
    _, _, compiled = dl_pipeline(doc)
    f = dl_to_fosl(compiled.sentence)
    if not (is_c2(f) and is_monodic(f)):
        raise StandpointError("not C2: translation left the monodic two-variable fragment")
    _emit(config, print_document(document_for(f, doc.rigid)))
    return EXIT_OK


def _eval(config: CliConfig) -> int:
    doc = _parse(config.input, parse_formula)
    M = _parse(config.model, parse_structure)
    holds = satisfies(M, doc.formula) if config.world is None else eval(M, config.world, {}, doc.formula)
    _emit(config, _flag(holds) + "\n")
    return EXIT_OK


def _expectation(config: CliConfig, found: bool) -> int:
    if config.expect is None or (config.expect == "sat") == found:
        return EXIT_OK
    logger.warning("expected %s, got %s", config.expect, "sat" if found else "unsat")
    return EXIT_FAILED


def _bsat(config: CliConfig) -> int:
    doc = _parse(config.input, parse_formula)
    search = config.search
    if config.fo:
        I = bounded_sat_fo(doc.formula, search.max_domain, signature=doc.signature, config=search)
        text = print_interpretation(I) if I is not None else f"(no-model (max-domain {search.max_domain}))\n"
        _emit(config, text)
        return _expectation(config, I is not None)
    M = bounded_sat(
        doc.formula,
        search.max_domain,
        search.max_worlds,
        rigid=doc.rigid,
        signature=doc.signature,
        config=search,
    )
    if M is None:
        _emit(config, f"(no-model (max-domain {search.max_domain}) (max-worlds {search.max_worlds}))\n")
    else:
        _emit(config, print_structure(M))
    return _expectation(config, M is not None)


def _verify(config: CliConfig) -> int:
    ctx = SuiteContext()
    try:
        suite = ctx.get_suite(config.suite)
    except ValueError:
        raise CliError(f"unknown suite '{config.suite}'; choose from: {', '.join(ctx.suite_names)}") from None
    if config.cases is not None:
        _parse(config.cases, parse_cases)
    accepted = CaseSchema.from_func(suite).accepted
    kwargs = {key: value for key, value in config.suite_overrides().items() if key in accepted}
    report = asyncio.run(suite(**kwargs))
    _emit(config, print_report(report) if config.report else print_summary(report))
    return EXIT_OK if report.passed else EXIT_FAILED


def _gen_tiling(config: CliConfig) -> int:
    T = TilingSystem(k=config.k, h=frozenset(config.h), v=frozenset(config.v), init=config.init)
    _emit(config, print_dl(gen_exp_tiling_tbox(T)))
    return EXIT_OK


def _gen_grid(config: CliConfig) -> int:
    _emit(config, print_dl(gen_und_grid_gcis()))
    return EXIT_OK


_COMMANDS: dict[str, Callable[[CliConfig], int]] = {
    "check": _check,
    "frugalize": _frugalize,
    "translate": _translate,
    "dl2fosl": _dl2fosl,
    "eval": _eval,
    "bsat": _bsat,
    "verify": _verify,
    "gen-tiling": _gen_tiling,
    "gen-grid": _gen_grid,
}


def run(config: CliConfig) -> int:
    """Run one subcommand and map failures to exit codes.

    Args:
        config: The validated invocation

    Returns:
        0 on success, 1 on a failed property or expectation, 2 on errors
    """
    try:
        return _COMMANDS[config.command](config)
    except (CliError, ValueError) as exc:
        print(f"spc: {exc}", file=sys.stderr)
    return EXIT_USAGE


# ============================================================================
# Argument Parsing
# ============================================================================

def _pair(text: str) -> tuple[int, int]:
    left, sep, right = text.partition(":")
    try:
        if not sep:
            raise ValueError(text)
        return int(left), int(right)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a tile pair a:b, got '{text}'") from None


def _add_bounds(parser: argparse.ArgumentParser, *, worlds: bool = True) -> None:
    parser.add_argument("--max-domain", type=int, help="largest domain size to search")
    if worlds:
        parser.add_argument("--max-worlds", type=int, help="largest number of precisifications to search")
    parser.add_argument("--budget", type=int, help="search node budget (overrides SPC_BUDGET)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spc", description="Monodic standpoint C2 compiler and bounded verifier")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, *, needs_input: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        if needs_input:
            sub.add_argument("input", type=Path)
        sub.add_argument("-o", "--output", type=Path)
        return sub

    command("check", "report fragment membership and size measures")
    command("frugalize", "rewrite into a frugal sentence and write its ledger")

    translate = command("translate", "frugalize, then remove standpoints")
    translate.add_argument("--params", action="store_true", help="print ell, m and the free-diamond map")
    translate.add_argument("--emit-parts", action="store_true", help="also write the three conjuncts")

    dl2fosl = command("dl2fosl", "translate a DL document into standpoint C2")
    dl2fosl.add_argument("--mode", choices=("alcoiq", "sroiq"), help="override the document's grammar mode")

    evaluate = command("eval", "evaluate a sentence in a structure")
    evaluate.add_argument("--model", type=Path, required=True)
    evaluate.add_argument("--world", help="evaluate at one precisification instead of all")

    bsat = command("bsat", "bounded satisfiability search")
    bsat.add_argument("--fo", action="store_true", help="search single first-order interpretations")
    bsat.add_argument("--expect", choices=("sat", "unsat"), help="exit 1 when the outcome differs")
    _add_bounds(bsat)

    verify = command("verify", "run a property suite", needs_input=False)
    verify.add_argument("--suite", required=True, help="suite name or alias")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--report", action="store_true", help="print the full s-expression report")
    verify.add_argument("--cases", type=Path, help="reduction case file")
    _add_bounds(verify)

    tiling = command("gen-tiling", "emit the exponential tiling TBox", needs_input=False)
    tiling.add_argument("--k", type=int, required=True, help="number of tiles")
    tiling.add_argument("--horizontal", type=_pair, nargs="*", default=[], metavar="A:B")
    tiling.add_argument("--vertical", type=_pair, nargs="*", default=[], metavar="A:B")
    tiling.add_argument("--init", type=int, nargs="+", default=[1])

    command("gen-grid", "emit the undecidability grid gadget", needs_input=False)
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    """Build a CliConfig from parsed arguments; raises ValidationError on bad values."""
    values = {key: value for key, value in vars(args).items() if value is not None}
    if "horizontal" in values:
        values["h"] = tuple(values.pop("horizontal"))
    if "vertical" in values:
        values["v"] = tuple(values.pop("vertical"))
    if "init" in values:
        values["init"] = tuple(values["init"])
    return CliConfig(**values)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
    except ValueError as exc:
        print(f"spc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
