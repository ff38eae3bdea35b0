from .errors import StandpointError
from .syntax import (
    Formula,
    FormulaDocument,
    FragmentReport,
    Signature,
    fragment_report,
    is_frugal,
)
from .semantics import FOInterpretation, StandpointStructure, satisfies, structures_isomorphic
from .config import SearchConfig, CliConfig
from .search import bounded_sat, bounded_sat_fo, enumerate_structures, structure_count
from .parser import ParseError, parse_dl, parse_formula, parse_structure, print_formula
from .frugalizer import RenameLedger, frugalize, lift_model, restore_model
from .constructions import permutational_closure, stacked_interpretation, extract_structure, witness_selection
from .removal import RemovalParams, compute_params, remove_standpoints, translation_witness, standpoint_witness
from .dl import DLDocument, dl_to_fosl, eval_dl, dl_satisfies
from .dl_normalize import nnf, separate_rias, compile_sh_rias, dl_pipeline
from .gadgets import TilingSystem, gen_exp_tiling_tbox, gen_und_grid_gcis
from .core import CaseSchema, VerifyContext
from .report import CaseResult, SuiteReport, ReportBuilder
from .suite_decorators import verify

__all__ = [
    "StandpointError",
    "Formula",
    "FormulaDocument",
    "FragmentReport",
    "Signature",
    "fragment_report",
    "is_frugal",
    "FOInterpretation",
    "StandpointStructure",
    "satisfies",
    "structures_isomorphic",
    "SearchConfig",
    "CliConfig",
    "bounded_sat",
    "bounded_sat_fo",
    "enumerate_structures",
    "structure_count",
    "ParseError",
    "parse_dl",
    "parse_formula",
    "parse_structure",
    "print_formula",
    "RenameLedger",
    "frugalize",
    "lift_model",
    "restore_model",
    "permutational_closure",
    "stacked_interpretation",
    "extract_structure",
    "witness_selection",
    "RemovalParams",
    "compute_params",
    "remove_standpoints",
    "translation_witness",
    "standpoint_witness",
    "DLDocument",
    "dl_to_fosl",
    "eval_dl",
    "dl_satisfies",
    "nnf",
    "separate_rias",
    "compile_sh_rias",
    "dl_pipeline",
    "TilingSystem",
    "gen_exp_tiling_tbox",
    "gen_und_grid_gcis",
    "CaseSchema",
    "VerifyContext",
    "CaseResult",
    "SuiteReport",
    "ReportBuilder",
    "verify",
]
