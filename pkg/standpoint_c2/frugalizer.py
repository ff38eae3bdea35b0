"""Equisatisfiable normalizations into the frugal fragment.

The pipeline runs to_s5, then remove_nullary, then remove_constants. Every
stage records the names it introduces in a RenameLedger and comes with a
model lift (input model to output model) and a restore (output model to
input model).
"""

import logging
from collections.abc import Iterable

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import NotAModel, NotC2Error
from .semantics import StandpointStructure
from .syntax import (
    STAR,
    STAR_EXPR,
    TRUE,
    And,
    Atom,
    Const,
    CountExists,
    Dia,
    Diff,
    Eq,
    Formula,
    Inter,
    Not,
    Signature,
    StandpointExpr,
    Symbol,
    Top,
    Union,
    Var,
    atom,
    box,
    conj,
    constants_of,
    count,
    disj,
    exists,
    forall,
    fresh_name,
    infer_signature,
    is_c2,
    standpoint_size,
    subformulas,
)

logger = logging.getLogger(__name__)


class RenameLedger(BaseModel):
    """Names introduced by the frugalizer, keyed by what they replace."""
    model_config = ConfigDict(frozen=True)

    standpoint_to_nullary: dict[str, str] = Field(default_factory=dict)
    nullary_to_unary: dict[str, str] = Field(default_factory=dict)
    constant_to_unary: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_injective(self) -> "RenameLedger":
        for table in (self.standpoint_to_nullary, self.nullary_to_unary, self.constant_to_unary):
            if len(set(table.values())) != len(table):
                raise ValueError("RenameLedger maps must be injective")
        return self

    def merge(self, other: "RenameLedger") -> "RenameLedger":
        return RenameLedger(
            standpoint_to_nullary={**self.standpoint_to_nullary, **other.standpoint_to_nullary},
            nullary_to_unary={**self.nullary_to_unary, **other.nullary_to_unary},
            constant_to_unary={**self.constant_to_unary, **other.constant_to_unary},
        )

    @property
    def introduced(self) -> set[str]:
        return (
            set(self.standpoint_to_nullary.values())
            | set(self.nullary_to_unary.values())
            | set(self.constant_to_unary.values())
        )


def _fresh_map(names: Iterable[str], prefix: str, taken: set[str]) -> dict[str, str]:
    result = {}
    for name in sorted(names):
        result[name] = fresh_name(f"{prefix}{name}", taken)
        taken.add(result[name])
    return result


def _map_formula(f: Formula, leaf) -> Formula:
    """Rebuild f bottom-up, replacing atoms and equalities through leaf."""
    match f:
        case Top():
            return f
        case Atom() | Eq():
            return leaf(f)
        case Not(body=body):
            return Not(body=_map_formula(body, leaf))
        case And(left=left, right=right):
            return And(left=_map_formula(left, leaf), right=_map_formula(right, leaf))
        case CountExists():
            return f.model_copy(update={"body": _map_formula(f.body, leaf)})
        case Dia():
            return f.model_copy(update={"body": _map_formula(f.body, leaf)})
    raise TypeError(f"Unknown formula node {f!r}")


def _rebuild(M: StandpointStructure, **changes) -> StandpointStructure:
    data = {
        "domain": M.domain,
        "worlds": M.worlds,
        "signature": M.signature,
        "sigma": {s: ws for s, ws in M.sigma.items() if s != STAR},
        "gamma": M.gamma,
        "const_map": M.const_map,
    }
    data.update(changes)
    return StandpointStructure(**data)


def _signature(base: Signature, add: dict[str, int], drop: Iterable[str] = (), **fields) -> Signature:
    dropped = set(drop)
    predicates = {p: a for p, a in base.predicates.items() if p not in dropped}
    predicates.update(add)
    data = {"constants": base.constants, "standpoints": base.standpoints, **fields}
    return Signature(predicates=predicates, **data)


# ============================================================================
# S5
# ============================================================================

def trans_standpoint(e: StandpointExpr, nullary: dict[str, str]) -> Formula:
    match e:
        case Symbol(name=name):
            return TRUE if name == STAR else atom(nullary[name])
        case Union(left=left, right=right):
            return disj(trans_standpoint(left, nullary), trans_standpoint(right, nullary))
        case Inter(left=left, right=right):
            return And(left=trans_standpoint(left, nullary), right=trans_standpoint(right, nullary))
        case Diff(left=left, right=right):
            return And(left=trans_standpoint(left, nullary), right=Not(body=trans_standpoint(right, nullary)))
    raise TypeError(f"Unknown standpoint expression {e!r}")


def to_s5(f: Formula) -> tuple[Formula, RenameLedger]:
    """Replace every diamond by a diamond over '*' guarded by nullary standpoint atoms."""
    sig = infer_signature(f)
    nullary = _fresh_map(sig.standpoints - {STAR}, "_S_", sig.all_names)

    def rewrite(g: Formula) -> Formula:
        match g:
            case Dia(standpoint=e, body=body):
                inner = rewrite(body)
                if e == STAR_EXPR:
                    return Dia(standpoint=STAR_EXPR, body=inner)
                return Dia(standpoint=STAR_EXPR, body=And(left=trans_standpoint(e, nullary), right=inner))
            case Not(body=body):
                return Not(body=rewrite(body))
            case And(left=left, right=right):
                return And(left=rewrite(left), right=rewrite(right))
            case CountExists():
                return g.model_copy(update={"body": rewrite(g.body)})
            case _:
                return g

    return rewrite(f), RenameLedger(standpoint_to_nullary=nullary)


def lift_s5_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    """Standpoint nullaries hold exactly at the worlds of their standpoint; sigma keeps only '*'."""
    table = ledger.standpoint_to_nullary
    return _rebuild(
        M,
        signature=_signature(M.signature, {n: 0 for n in table.values()}, standpoints=frozenset({STAR})),
        sigma={},
        gamma={
            w: ext.model_copy(update={"nullary": ext.nullary | {n for s, n in table.items() if w in M.members(s)}})
            for w, ext in M.gamma.items()
        },
    )


def restore_s5_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    table = ledger.standpoint_to_nullary
    introduced = set(table.values())
    return _rebuild(
        M,
        signature=_signature(
            M.signature, {}, introduced, standpoints=M.signature.standpoints | set(table)
        ),
        sigma={s: frozenset(w for w in M.worlds if n in M.gamma[w].nullary) for s, n in table.items()},
        gamma={w: ext.model_copy(update={"nullary": ext.nullary - introduced}) for w, ext in M.gamma.items()},
    )


# ============================================================================
# Nullary Predicates
# ============================================================================

def remove_nullary(f: Formula) -> tuple[Formula, RenameLedger]:
    """Replace every nullary atom N by forall x P_N(x)."""
    sig = infer_signature(f)
    unary = _fresh_map(sig.preds_of_arity(0), "_N_", sig.all_names)

    def leaf(g: Formula) -> Formula:
        if isinstance(g, Atom) and not g.terms:
            return forall("x", atom(unary[g.pred], "x"))
        return g

    return _map_formula(f, leaf), RenameLedger(nullary_to_unary=unary)


def lift_nullary_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    table = ledger.nullary_to_unary
    everything = frozenset(M.domain)
    gamma = {}
    for w, ext in M.gamma.items():
        unary = dict(ext.unary)
        unary.update({p: everything if n in ext.nullary else frozenset() for n, p in table.items()})
        gamma[w] = ext.model_copy(update={"unary": unary, "nullary": ext.nullary - set(table)})
    return _rebuild(M, signature=_signature(M.signature, {p: 1 for p in table.values()}, table), gamma=gamma)


def restore_nullary_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    table = ledger.nullary_to_unary
    everything = frozenset(M.domain)
    gamma = {}
    for w, ext in M.gamma.items():
        holding = {n for n, p in table.items() if ext.unary.get(p, frozenset()) == everything}
        unary = {p: e for p, e in ext.unary.items() if p not in set(table.values())}
        gamma[w] = ext.model_copy(update={"unary": unary, "nullary": ext.nullary | holding})
    signature = _signature(M.signature, {n: 0 for n in table}, table.values())
    return _rebuild(M, signature=signature, gamma=gamma)


# ============================================================================
# Constants
# ============================================================================

def _rewrite_constant_leaf(g: Atom | Eq, unary: dict[str, str]) -> Formula:
    match g:
        case Eq(left=Const(name=a), right=Const(name=b)):
            return exists("x", And(left=atom(unary[a], "x"), right=atom(unary[b], "x")))
        case Eq(left=Const(name=a), right=Var() as v) | Eq(left=Var() as v, right=Const(name=a)):
            return atom(unary[a], v)
        case Atom(pred=pred, terms=terms):
            consts = list(dict.fromkeys(t.name for t in terms if isinstance(t, Const)))
            if not consts:
                return g
            used = {t.name for t in terms if isinstance(t, Var)}
            spare = [v for v in ("x", "y") if v not in used]
            bound = dict(zip(consts, spare))
            body: Formula = Atom(
                pred=pred, terms=tuple(Var(name=bound[t.name]) if isinstance(t, Const) else t for t in terms)
            )
            for c in reversed(consts):
                body = exists(bound[c], And(left=atom(unary[c], bound[c]), right=body))
            return body
    return g


def remove_constants(f: Formula) -> tuple[Formula, RenameLedger]:
    """Replace every constant a by a rigid singleton predicate P_a.

    Raises:
        NotC2Error: If f uses variables other than x and y
    """
    if not is_c2(f):
        raise NotC2Error("not C2: constant removal rewrites over the variables x and y only")
    consts = constants_of(f)
    if not consts:
        return f, RenameLedger()
    sig = infer_signature(f)
    unary = _fresh_map(consts, "_A_", sig.all_names)
    rewritten = _map_formula(f, lambda g: _rewrite_constant_leaf(g, unary))
    uniqueness = []
    for c in sorted(consts):
        uniqueness.append(count("=", 1, "x", atom(unary[c], "x")))
        uniqueness.append(count("=", 1, "x", box(STAR, atom(unary[c], "x"))))
    return conj(*uniqueness, rewritten), RenameLedger(constant_to_unary=unary)


def lift_constants_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    table = ledger.constant_to_unary
    installed = {p: frozenset({M.const_map[c]}) for c, p in table.items()}
    return _rebuild(
        M,
        signature=_signature(
            M.signature, {p: 1 for p in table.values()}, constants=M.signature.constants - set(table)
        ),
        gamma={w: ext.model_copy(update={"unary": {**ext.unary, **installed}}) for w, ext in M.gamma.items()},
        const_map={c: d for c, d in M.const_map.items() if c not in table},
    )


def restore_constants_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    """Read each constant back from its singleton predicate.

    Raises:
        NotAModel: If some P_a is not a singleton
    """
    table = ledger.constant_to_unary
    first = M.gamma[M.worlds[0]]
    const_map = dict(M.const_map)
    for c, p in table.items():
        members = first.unary.get(p, frozenset())
        if len(members) != 1:
            raise NotAModel(f"input not a model: '{p}' must hold of exactly one element")
        (const_map[c],) = members
    introduced = set(table.values())
    return _rebuild(
        M,
        signature=_signature(M.signature, {}, introduced, constants=M.signature.constants | set(table)),
        gamma={
            w: ext.model_copy(update={"unary": {p: e for p, e in ext.unary.items() if p not in introduced}})
            for w, ext in M.gamma.items()
        },
        const_map=const_map,
    )


# ============================================================================
# Pipeline
# ============================================================================

def frugalize(f: Formula) -> tuple[Formula, RenameLedger]:
    """remove_constants(remove_nullary(to_s5(f))) with the merged ledger.

    Raises:
        NotC2Error: If f uses variables other than x and y
    """
    s5, first = to_s5(f)
    nullary_free, second = remove_nullary(s5)
    frugal, third = remove_constants(nullary_free)
    ledger = first.merge(second).merge(third)
    logger.debug(
        "frugalize: |Sub| %d -> %d, introduced %s",
        len(subformulas(f)),
        len(subformulas(frugal)),
        sorted(ledger.introduced),
    )
    return frugal, ledger


def lift_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    """Model of frugalize(f) from a model of f."""
    return lift_constants_model(lift_nullary_model(lift_s5_model(M, ledger), ledger), ledger)


def restore_model(M: StandpointStructure, ledger: RenameLedger) -> StandpointStructure:
    """Model of f from a model of frugalize(f)."""
    return restore_s5_model(restore_nullary_model(restore_constants_model(M, ledger), ledger), ledger)


def frugal_size_bound(f: Formula) -> int:
    """Bound on |Sub(frugalize(f))| checked over the corpus."""
    sig = infer_signature(f)
    return 6 * (len(subformulas(f)) + standpoint_size(f)) + 8 * (len(sig.constants) + len(sig.standpoints - {STAR}))
