"""Standpoint removal: frugal monodic standpoint C2 into plain C2.

The output is stack ∧ rigidity ∧ translate_tr(f): the stack formula forces the
domain to split into 2^m F-chained layers indexed by the level predicates,
the rigidity formula keeps the E-predicates constant along chains, and
translate_tr evaluates f layer by layer with diamonds jumping to any element of
the same E-type.
"""

import logging
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from .config import SearchConfig
from .constructions import (
    extract_structure,
    pad_precisifications,
    permutational_closure,
    removal_names,
    stacked_interpretation,
    witness_selection,
)
from .errors import NotFrugalError, StandpointError
from .semantics import FOInterpretation, StandpointStructure, satisfies
from .syntax import (
    And,
    Atom,
    CountExists,
    Dia,
    Eq,
    Formula,
    Not,
    Top,
    atom,
    conj,
    count,
    dia_sets,
    disj,
    eq,
    exists,
    forall,
    fragment_report,
    free_vars,
    iff,
    implies,
    infer_signature,
    neg,
    subformulas,
)

logger = logging.getLogger(__name__)


# ============================================================================
# Parameters
# ============================================================================

def layer_count_exponent(dia_count: int) -> int:
    """m = |Dia| + ceil(log2 |Dia|), and 0 when there are no diamonds."""
    if dia_count == 0:
        return 0
    return dia_count + (dia_count - 1).bit_length()


class RemovalParams(BaseModel):
    """Sizes and fresh names shared by the three parts of the translation."""
    model_config = ConfigDict(frozen=True)

    ell: int
    m: int
    dia_count: int = 0
    free_dia_index: tuple[tuple[Dia, str], ...] = ()
    level_preds: tuple[str, ...] = ()
    chain_pred: str = "_F"

    @model_validator(mode="after")
    def validate_params(self) -> "RemovalParams":
        if self.ell != len(self.free_dia_index):
            raise ValueError("ell must equal the number of indexed free diamonds")
        if self.m != len(self.level_preds):
            raise ValueError("m must equal the number of level predicates")
        if self.dia_count and 2**self.m < self.dia_count * 2**self.dia_count:
            raise ValueError(f"2^{self.m} layers cannot host {self.dia_count} diamonds")
        names = [e for _, e in self.free_dia_index] + list(self.level_preds) + [self.chain_pred]
        if len(set(names)) != len(names):
            raise ValueError("Introduced predicate names must be distinct")
        return self

    @property
    def e_preds(self) -> list[str]:
        return [e for _, e in self.free_dia_index]


def compute_params(f: Formula) -> RemovalParams:
    """Removal parameters for a frugal sentence.

    Raises:
        NotFrugalError: If f is not a frugal sentence
    """
    report = fragment_report(f)
    if not report.is_frugal or free_vars(f):
        raise NotFrugalError("not frugal: standpoint removal needs a frugal monodic C2 sentence")
    dias, free = dia_sets(f)
    m = layer_count_exponent(len(dias))
    e_preds, levels, chain = removal_names(infer_signature(f).all_names, len(free), m)
    return RemovalParams(
        ell=len(free),
        m=m,
        dia_count=len(dias),
        free_dia_index=tuple(zip(free, e_preds)),
        level_preds=tuple(levels),
        chain_pred=chain,
    )


# ============================================================================
# Stack and Rigidity Formulas
# ============================================================================

def agree(preds: Sequence[str]) -> Formula:
    """x and y agree on every predicate in preds; true when preds is empty."""
    return conj(*(iff(atom(p, "x"), atom(p, "y")) for p in preds))


def stack_formula(level_preds: Sequence[str], chain_pred: str, binary_preds: Sequence[str]) -> Formula:
    """Layer structure over level predicates L_0..L_{m-1} and chain F."""
    levels = list(level_preds)
    F = lambda a, b: atom(chain_pred, a, b)  # noqa: E731
    L = lambda j, v: atom(levels[j], v)  # noqa: E731
    m = len(levels)

    last_has_no_next = forall("x", implies(conj(*(L(j, "x") for j in range(m))), count("=", 0, "y", F("x", "y"))))
    first_has_no_prev = forall("x", implies(conj(*(neg(L(j, "x")) for j in range(m))), count("=", 0, "y", F("y", "x"))))
    if m == 0:
        return conj(last_has_no_next, first_has_no_prev)

    has_next = forall("x", implies(disj(*(neg(L(j, "x")) for j in range(m))), count("=", 1, "y", F("x", "y"))))
    has_prev = forall("x", implies(disj(*(L(j, "x") for j in range(m))), count("=", 1, "y", F("y", "x"))))
    increment = forall("x", forall("y", implies(
        F("x", "y"),
        conj(*(iff(iff(L(j, "x"), L(j, "y")), disj(*(neg(L(k, "x")) for k in range(j)))) for j in range(m))),
    )))
    same_layer = [
        forall("x", forall("y", implies(atom(p, "x", "y"), agree(levels))))
        for p in binary_preds
        if p != chain_pred
    ]
    return conj(has_next, last_has_no_next, has_prev, first_has_no_prev, increment, *same_layer)


def build_stack_formula(params: RemovalParams, binary_preds: Sequence[str]) -> Formula:
    return stack_formula(params.level_preds, params.chain_pred, binary_preds)


def build_rigidity_formula(params: RemovalParams) -> Formula:
    """F-related elements agree on every E-predicate."""
    return forall("x", forall("y", implies(atom(params.chain_pred, "x", "y"), agree(params.e_preds))))


# ============================================================================
# Translation
# ============================================================================

def _exposed_binders(f: Formula) -> set[str]:
    """Variables bound by quantifiers reachable from f through not/and only."""
    match f:
        case Not(body=body):
            return _exposed_binders(body)
        case And(left=left, right=right):
            return _exposed_binders(left) | _exposed_binders(right)
        case CountExists(var=var):
            return {var}
        case _:
            return set()


def _tr(f: Formula, phi_l: Formula, phi_e: Formula) -> Formula:
    match f:
        case Top() | Atom() | Eq():
            return f
        case Not(body=body):
            return Not(body=_tr(body, phi_l, phi_e))
        case And(left=left, right=right):
            return And(left=_tr(left, phi_l, phi_e), right=_tr(right, phi_l, phi_e))
        case CountExists(comparator=cmp, count=n, var=var, body=body):
            return count(cmp, n, var, And(left=phi_l, right=_tr(body, phi_l, phi_e)))
        case Dia(body=body):
            z_nf, z_mf = ("y", "x") if free_vars(body) == {"x"} else ("x", "y")
            inner = _tr(body, phi_l, phi_e)
            if z_mf in _exposed_binders(body):
                # Quantifiers over z_mf anchor on z_nf, so move z_nf onto the new layer first.
                inner = exists(z_nf, And(left=eq("x", "y"), right=inner))
            return forall(z_nf, implies(eq("x", "y"), exists(z_mf, And(left=phi_e, right=inner))))
    raise TypeError(f"Unknown formula node {f!r}")


def tr(f: Formula, params: RemovalParams) -> Formula:
    """Layer-wise translation of a frugal formula, without the outer guard."""
    return _tr(f, agree(params.level_preds), agree(params.e_preds))


def translate_tr(f: Formula, params: RemovalParams) -> Formula:
    """translate_tr(f) = forall x forall y (x = y -> tr(f)).

    Raises:
        NotFrugalError: If f is not a frugal sentence
    """
    if not fragment_report(f).is_frugal or free_vars(f):
        raise NotFrugalError("not frugal: translate_tr needs a frugal monodic C2 sentence")
    return forall("x", forall("y", implies(eq("x", "y"), tr(f, params))))


class RemovalResult(BaseModel):
    """The three conjuncts of a standpoint removal and the parameters that produced them."""
    model_config = ConfigDict(frozen=True)

    params: RemovalParams
    stack: Formula
    rigidity: Formula
    trans: Formula

    @property
    def formula(self) -> Formula:
        return conj(self.stack, self.rigidity, self.trans)


def removal_parts(f: Formula) -> RemovalResult:
    params = compute_params(f)
    binary = infer_signature(f).binary_preds
    result = RemovalResult(
        params=params,
        stack=build_stack_formula(params, binary),
        rigidity=build_rigidity_formula(params),
        trans=translate_tr(f, params),
    )
    logger.debug("standpoint removal: ell=%d m=%d |Sub|=%d", params.ell, params.m, len(subformulas(result.formula)))
    return result


def remove_standpoints(f: Formula) -> Formula:
    """Equisatisfiable plain C2 sentence stack ∧ rigidity ∧ translate_tr(f).

    Raises:
        NotFrugalError: If f is not a frugal sentence
    """
    return removal_parts(f).formula


def removal_size_bound(f: Formula, params: RemovalParams) -> int:
    """Linear bound on |Sub(remove_standpoints(f))| checked over the corpus."""
    binary = len(infer_signature(f).binary_preds)
    return 16 * len(subformulas(f)) + 64 * (params.m + params.ell + binary + 1)


# ============================================================================
# Witnesses across the translation
# ============================================================================

def translation_witness(
    M: StandpointStructure,
    f: Formula,
    params: RemovalParams | None = None,
    config: SearchConfig | None = None,
) -> FOInterpretation:
    """Model of remove_standpoints(f) built from a model M of f.

    Selects few worlds, pads them to 2^m and stacks the result.
    """
    params = params or compute_params(f)
    selected = witness_selection(M, f, params.e_preds, config=config)
    padded = pad_precisifications(selected, 2**params.m)
    return stacked_interpretation(padded, params.level_preds, params.chain_pred)


def standpoint_witness(
    I: FOInterpretation,
    f: Formula,
    params: RemovalParams | None = None,
    config: SearchConfig | None = None,
    *,
    verify: bool = True,
) -> StandpointStructure:
    """Model of f built from a model I of remove_standpoints(f).

    Extracts the layered structure, closes it under E-type preserving
    permutations and forgets the introduced predicates.
    """
    params = params or compute_params(f)
    extracted = extract_structure(I, params.m, params.level_preds, params.chain_pred)
    closure = permutational_closure(extracted, params.e_preds, config)
    result = closure.with_signature(infer_signature(f))
    if verify and not satisfies(result, f):
        raise StandpointError("extracted closure does not model the sentence")
    return result
