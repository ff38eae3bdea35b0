"""Formula and standpoint-expression ASTs for monodic standpoint C2.

This module defines:
- Term models (Var, Const)
- Standpoint expressions (Symbol, Union, Inter, Diff)
- Formula core nodes (Top, Atom, Eq, Not, And, CountExists, Dia)
- Signature and FragmentReport
- Builders that elaborate the derived connectives into the core
- Structural analyses: subformulas, free_vars, fragment_report, dia_sets
"""

from collections.abc import Iterable, Iterator
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import FreeVariableError, SignatureError

STAR = "*"
C2_VARIABLES = frozenset({"x", "y"})


# ============================================================================
# Terms
# ============================================================================

class Var(BaseModel):
    """Variable term."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["var"] = "var"
    name: str


class Const(BaseModel):
    """Constant term; the name is stored without its leading '#'."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["const"] = "const"
    name: str


Term = Annotated[Var | Const, Field(discriminator="kind")]


# ============================================================================
# Standpoint Expressions
# ============================================================================

class Symbol(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["symbol"] = "symbol"
    name: str


class Union(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["union"] = "union"
    left: "StandpointExpr"
    right: "StandpointExpr"


class Inter(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["inter"] = "inter"
    left: "StandpointExpr"
    right: "StandpointExpr"


class Diff(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["diff"] = "diff"
    left: "StandpointExpr"
    right: "StandpointExpr"


StandpointExpr = Annotated[Symbol | Union | Inter | Diff, Field(discriminator="kind")]

for _model in (Union, Inter, Diff):
    _model.model_rebuild()


# ============================================================================
# Formula Core
# ============================================================================

class Top(BaseModel):
    """The constant-true proposition."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["top"] = "top"


class Atom(BaseModel):
    """Predicate atom; nullary atoms have an empty term tuple."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["atom"] = "atom"
    pred: str
    terms: tuple[Term, ...] = ()

    @model_validator(mode="after")
    def validate_arity(self) -> "Atom":
        if len(self.terms) > 2:
            raise ValueError(f"Predicate '{self.pred}' used with arity {len(self.terms)}; at most 2 allowed")
        return self


class Eq(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["eq"] = "eq"
    left: Term
    right: Term


class Not(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["not"] = "not"
    body: "Formula"


class And(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["and"] = "and"
    left: "Formula"
    right: "Formula"


Comparator = Literal["<=", "=", ">="]


class CountExists(BaseModel):
    """Counting quantifier: the number of values of var satisfying body compares to count."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["count"] = "count"
    comparator: Comparator
    count: int = Field(ge=0)
    var: str
    body: "Formula"


class Dia(BaseModel):
    """Standpoint diamond: body holds at some precisification of the standpoint."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["dia"] = "dia"
    standpoint: StandpointExpr
    body: "Formula"


Formula = Annotated[
    Top | Atom | Eq | Not | And | CountExists | Dia,
    Field(discriminator="kind"),
]

for _model in (Not, And, CountExists, Dia):
    _model.model_rebuild()


# ============================================================================
# Signature
# ============================================================================

class Signature(BaseModel):
    """Predicates with arities, constants, and standpoint symbols.

    The three name sets are disjoint and standpoints always contain '*'.
    """
    model_config = ConfigDict(frozen=True)

    predicates: dict[str, int] = Field(default_factory=dict)
    constants: frozenset[str] = frozenset()
    standpoints: frozenset[str] = frozenset({STAR})

    @model_validator(mode="after")
    def validate_names(self) -> "Signature":
        if STAR not in self.standpoints:
            raise ValueError("Signature standpoints must contain '*'")
        for name, arity in self.predicates.items():
            if arity not in (0, 1, 2):
                raise ValueError(f"Predicate '{name}' has arity {arity}; must be 0, 1 or 2")
        preds = set(self.predicates)
        if preds & self.constants or preds & self.standpoints or self.constants & self.standpoints:
            raise ValueError("Predicate, constant and standpoint names must be pairwise disjoint")
        return self

    def preds_of_arity(self, arity: int) -> list[str]:
        return sorted(name for name, a in self.predicates.items() if a == arity)

    @property
    def binary_preds(self) -> list[str]:
        return self.preds_of_arity(2)

    @property
    def all_names(self) -> set[str]:
        return set(self.predicates) | set(self.constants) | set(self.standpoints)

    def merge(self, other: "Signature") -> "Signature":
        """Union of two signatures.

        Raises:
            SignatureError: If a predicate carries two different arities
        """
        predicates = dict(self.predicates)
        for name, arity in other.predicates.items():
            if predicates.setdefault(name, arity) != arity:
                raise SignatureError(f"arity conflict for predicate '{name}': {predicates[name]} vs {arity}")
        return Signature(
            predicates=predicates,
            constants=self.constants | other.constants,
            standpoints=self.standpoints | other.standpoints,
        )


class FormulaDocument(BaseModel):
    """A parsed formula together with its signature and rigid-predicate declarations."""
    model_config = ConfigDict(frozen=True)

    formula: Formula
    signature: Signature
    rigid: frozenset[str] = frozenset()


# ============================================================================
# Builders
# ============================================================================

TRUE = Top()
FALSE = Not(body=TRUE)
X = Var(name="x")
Y = Var(name="y")
STAR_EXPR = Symbol(name=STAR)


def term(value: str | Var | Const) -> Var | Const:
    """Coerce '#a' to a constant and any other string to a variable."""
    if isinstance(value, (Var, Const)):
        return value
    if value.startswith("#"):
        return Const(name=value[1:])
    return Var(name=value)


def atom(pred: str, *terms: str | Var | Const) -> Atom:
    return Atom(pred=pred, terms=tuple(term(t) for t in terms))


def eq(left: str | Var | Const, right: str | Var | Const) -> Eq:
    return Eq(left=term(left), right=term(right))


def neg(body: Formula) -> Not:
    return Not(body=body)


def conj(*parts: Formula) -> Formula:
    """Left-folded conjunction; the empty conjunction is true."""
    if not parts:
        return TRUE
    result = parts[0]
    for part in parts[1:]:
        result = And(left=result, right=part)
    return result


def disj(*parts: Formula) -> Formula:
    """Left-folded disjunction elaborated to not/and; the empty disjunction is false."""
    if not parts:
        return FALSE
    result = parts[0]
    for part in parts[1:]:
        result = Not(body=And(left=Not(body=result), right=Not(body=part)))
    return result


def implies(antecedent: Formula, consequent: Formula) -> Formula:
    return Not(body=And(left=antecedent, right=Not(body=consequent)))


def iff(left: Formula, right: Formula) -> Formula:
    return And(left=implies(left, right), right=implies(right, left))


def count(comparator: Comparator, n: int, var: str, body: Formula) -> CountExists:
    return CountExists(comparator=comparator, count=n, var=var, body=body)


def exists(var: str, body: Formula) -> CountExists:
    return count(">=", 1, var, body)


def forall(var: str, body: Formula) -> CountExists:
    return count("=", 0, var, Not(body=body))


def sym(name: str) -> Symbol:
    return Symbol(name=name)


def _standpoint(e: str | StandpointExpr) -> StandpointExpr:
    return Symbol(name=e) if isinstance(e, str) else e


def dia(standpoint: str | StandpointExpr, body: Formula) -> Dia:
    return Dia(standpoint=_standpoint(standpoint), body=body)


def box(standpoint: str | StandpointExpr, body: Formula) -> Formula:
    return Not(body=Dia(standpoint=_standpoint(standpoint), body=Not(body=body)))


def fresh_name(base: str, taken: Iterable[str]) -> str:
    """Return base, or base_1, base_2, ... whichever is first not in taken."""
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


# ============================================================================
# Structural Analyses
# ============================================================================

def children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Not(body=b) | CountExists(body=b) | Dia(body=b):
            return (b,)
        case And(left=left, right=right):
            return (left, right)
        case _:
            return ()


def iter_postorder(f: Formula) -> Iterator[Formula]:
    for child in children(f):
        yield from iter_postorder(child)
    yield f


def subformulas(f: Formula) -> list[Formula]:
    """Sub(f) in post-order, deduplicated by structural equality, f included."""
    return list(dict.fromkeys(iter_postorder(f)))


def term_vars(terms: Iterable[Var | Const]) -> frozenset[str]:
    return frozenset(t.name for t in terms if isinstance(t, Var))


def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Atom(terms=ts):
            return term_vars(ts)
        case Eq(left=left, right=right):
            return term_vars((left, right))
        case CountExists(var=v, body=b):
            return free_vars(b) - {v}
        case _:
            result: frozenset[str] = frozenset()
            for child in children(f):
                result |= free_vars(child)
            return result


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def variables(f: Formula) -> frozenset[str]:
    """All variable names occurring free or bound."""
    names: set[str] = set()
    for g in iter_postorder(f):
        match g:
            case Atom(terms=ts):
                names |= term_vars(ts)
            case Eq(left=left, right=right):
                names |= term_vars((left, right))
            case CountExists(var=v):
                names.add(v)
    return frozenset(names)


def standpoint_symbols(e: StandpointExpr) -> frozenset[str]:
    match e:
        case Symbol(name=name):
            return frozenset({name})
        case Union(left=left, right=right) | Inter(left=left, right=right) | Diff(left=left, right=right):
            return standpoint_symbols(left) | standpoint_symbols(right)
    raise TypeError(f"Unknown standpoint expression {e!r}")


def standpoint_nodes(e: StandpointExpr) -> int:
    match e:
        case Symbol():
            return 1
        case Union(left=left, right=right) | Inter(left=left, right=right) | Diff(left=left, right=right):
            return 1 + standpoint_nodes(left) + standpoint_nodes(right)
    raise TypeError(f"Unknown standpoint expression {e!r}")


def standpoint_size(f: Formula) -> int:
    """Number of standpoint-expression nodes over the distinct diamonds of f."""
    return sum(standpoint_nodes(g.standpoint) for g in subformulas(f) if isinstance(g, Dia))


def constants_of(f: Formula) -> frozenset[str]:
    names: set[str] = set()
    for g in iter_postorder(f):
        match g:
            case Atom(terms=ts):
                names |= {t.name for t in ts if isinstance(t, Const)}
            case Eq(left=left, right=right):
                names |= {t.name for t in (left, right) if isinstance(t, Const)}
    return frozenset(names)


def infer_signature(f: Formula, base: Signature | None = None) -> Signature:
    """Signature of everything occurring in f, merged into base.

    Raises:
        SignatureError: If a predicate occurs with two arities
    """
    predicates = dict(base.predicates) if base else {}
    standpoints = set(base.standpoints) if base else {STAR}
    for g in iter_postorder(f):
        match g:
            case Atom(pred=p, terms=ts):
                if predicates.setdefault(p, len(ts)) != len(ts):
                    raise SignatureError(f"arity conflict for predicate '{p}': {predicates[p]} vs {len(ts)}")
            case Dia(standpoint=e):
                standpoints |= standpoint_symbols(e)
    constants = (base.constants if base else frozenset()) | constants_of(f)
    try:
        return Signature(predicates=predicates, constants=constants, standpoints=frozenset(standpoints))
    except ValueError as exc:
        raise SignatureError(str(exc)) from exc


class FragmentReport(BaseModel):
    """Fragment membership flags and size measures of a formula."""
    model_config = ConfigDict(frozen=True)

    is_c2: bool
    is_monodic: bool
    is_s5: bool
    nullary_free: bool
    constant_free: bool
    is_frugal: bool
    size: int
    standpoint_size: int = 0
    dia_count: int = 0
    free_dia_count: int = 0

    @model_validator(mode="after")
    def validate_frugal(self) -> "FragmentReport":
        expected = self.is_c2 and self.is_monodic and self.is_s5 and self.nullary_free and self.constant_free
        if self.is_frugal != expected:
            raise ValueError("is_frugal must equal the conjunction of the fragment flags")
        return self


def is_c2(f: Formula) -> bool:
    return variables(f) <= C2_VARIABLES


def is_monodic(f: Formula) -> bool:
    return all(len(free_vars(g.body)) <= 1 for g in subformulas(f) if isinstance(g, Dia))


def is_s5(f: Formula) -> bool:
    return all(g.standpoint == STAR_EXPR for g in subformulas(f) if isinstance(g, Dia))


def is_frugal(f: Formula) -> bool:
    return fragment_report(f).is_frugal


def fragment_report(f: Formula) -> FragmentReport:
    subs = subformulas(f)
    dias = [g for g in subs if isinstance(g, Dia)]
    c2, monodic, s5 = is_c2(f), is_monodic(f), is_s5(f)
    nullary_free = not any(isinstance(g, Atom) and not g.terms for g in subs)
    constant_free = not constants_of(f)
    return FragmentReport(
        is_c2=c2,
        is_monodic=monodic,
        is_s5=s5,
        nullary_free=nullary_free,
        constant_free=constant_free,
        is_frugal=c2 and monodic and s5 and nullary_free and constant_free,
        size=len(subs),
        standpoint_size=standpoint_size(f),
        dia_count=len(dias),
        free_dia_count=sum(1 for g in dias if len(free_vars(g.body)) == 1),
    )


def dia_sets(f: Formula) -> tuple[list[Dia], list[Dia]]:
    """Diamond subformulae and those whose body has exactly one free variable.

    Both lists follow the leftmost-innermost order of subformulas(); the
    FreeDia order is the canonical E-predicate indexing.

    Raises:
        FreeVariableError: If f is not a sentence
    """
    if not is_sentence(f):
        raise FreeVariableError(f"dia_sets expects a sentence; free variables {sorted(free_vars(f))}")
    dias = [g for g in subformulas(f) if isinstance(g, Dia)]
    free = [g for g in dias if len(free_vars(g.body)) == 1]
    return dias, free
