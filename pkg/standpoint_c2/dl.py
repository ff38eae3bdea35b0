"""Standpoint description logic front end.

This module defines:
- Role, concept and sentence ASTs plus the DLDocument wrapper
- RoleBox: simplicity and the role order used by RIA regularity
- rtrans / ctrans / dl_to_fosl into monodic standpoint C2
- ria_formula for arbitrary role chains and dl_to_fol for whole sentences
- A direct model-theoretic evaluator (eval_dl, eval_dl_sentence, dl_satisfies)
"""

import itertools
import logging
from collections.abc import Iterator
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import UntranslatableRIA
from .semantics import StandpointStructure, StructureValuation, eval_standpoint
from .syntax import (
    TRUE,
    And,
    Formula,
    Signature,
    StandpointExpr,
    atom,
    box,
    conj,
    count,
    dia,
    disj,
    eq,
    forall,
    implies,
    neg,
    standpoint_symbols,
)

logger = logging.getLogger(__name__)

DLMode = Literal["alcoiq", "sroiq"]


# ============================================================================
# Roles
# ============================================================================

class RoleName(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["role"] = "role"
    name: str


class Inverse(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["inv"] = "inv"
    role: RoleName


class RoleNot(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["rnot"] = "rnot"
    role: "RoleExpr"


class RoleAnd(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["rand"] = "rand"
    left: "RoleExpr"
    right: "RoleExpr"


class RoleOr(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["ror"] = "ror"
    left: "RoleExpr"
    right: "RoleExpr"


RoleExpr = Annotated[RoleName | Inverse | RoleNot | RoleAnd | RoleOr, Field(discriminator="kind")]

for _model in (RoleNot, RoleAnd, RoleOr):
    _model.model_rebuild()


# ============================================================================
# Concepts
# ============================================================================

class Atomic(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["atomic"] = "atomic"
    name: str


class Nominal(BaseModel):
    """Singleton concept {o}; the name is stored without its leading '#'."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["nominal"] = "nominal"
    name: str


class TopC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["top"] = "top"


class NotC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["not"] = "not"
    body: "ConceptExpr"


class AndC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["and"] = "and"
    left: "ConceptExpr"
    right: "ConceptExpr"


class OrC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["or"] = "or"
    left: "ConceptExpr"
    right: "ConceptExpr"


class AtLeast(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["atleast"] = "atleast"
    count: int = Field(ge=0)
    role: RoleExpr
    body: "ConceptExpr"


class AtMost(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["atmost"] = "atmost"
    count: int = Field(ge=0)
    role: RoleExpr
    body: "ConceptExpr"


class ForallC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["forall"] = "forall"
    role: RoleExpr
    body: "ConceptExpr"


class SelfC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["self"] = "self"
    role: RoleExpr


class DiaC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["dia"] = "dia"
    standpoint: StandpointExpr
    body: "ConceptExpr"


class BoxC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["box"] = "box"
    standpoint: StandpointExpr
    body: "ConceptExpr"


ConceptExpr = Annotated[
    Atomic | Nominal | TopC | NotC | AndC | OrC | AtLeast | AtMost | ForallC | SelfC | DiaC | BoxC,
    Field(discriminator="kind"),
]

for _model in (NotC, AndC, OrC, AtLeast, AtMost, ForallC, DiaC, BoxC):
    _model.model_rebuild()

TOP = TopC()
BOTTOM = NotC(body=TOP)


def exists_role(role: RoleExpr, body: ConceptExpr) -> AtLeast:
    return AtLeast(count=1, role=role, body=body)


def exactly(n: int, role: RoleExpr, body: ConceptExpr) -> AndC:
    return AndC(left=AtLeast(count=n, role=role, body=body), right=AtMost(count=n, role=role, body=body))


def and_c(*parts: ConceptExpr) -> ConceptExpr:
    """Left-folded concept conjunction; the empty conjunction is Top."""
    if not parts:
        return TOP
    result = parts[0]
    for part in parts[1:]:
        result = AndC(left=result, right=part)
    return result


def or_c(*parts: ConceptExpr) -> ConceptExpr:
    """Left-folded concept disjunction; the empty disjunction is Bottom."""
    if not parts:
        return BOTTOM
    result = parts[0]
    for part in parts[1:]:
        result = OrC(left=result, right=part)
    return result


# ============================================================================
# Sentences
# ============================================================================

class GCI(BaseModel):
    """General concept inclusion sub ⊑ sup."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["gci"] = "gci"
    sub: ConceptExpr
    sup: ConceptExpr


class RIA(BaseModel):
    """Role inclusion S1 ∘ ... ∘ Sn ⊑ head."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["ria"] = "ria"
    chain: tuple[RoleExpr, ...]
    head: RoleName

    @model_validator(mode="after")
    def validate_chain(self) -> "RIA":
        if not self.chain:
            raise ValueError("RIA chain must contain at least one role")
        return self


class NotS(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["not"] = "not"
    body: "DLSentence"


class AndS(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["and"] = "and"
    left: "DLSentence"
    right: "DLSentence"


class OrS(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["or"] = "or"
    left: "DLSentence"
    right: "DLSentence"


class DiaS(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["dia"] = "dia"
    standpoint: StandpointExpr
    body: "DLSentence"


class BoxS(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["box"] = "box"
    standpoint: StandpointExpr
    body: "DLSentence"


DLSentence = Annotated[GCI | RIA | NotS | AndS | OrS | DiaS | BoxS, Field(discriminator="kind")]

for _model in (NotS, AndS, OrS, DiaS, BoxS):
    _model.model_rebuild()


def and_s(*parts: DLSentence) -> DLSentence:
    """Left-folded sentence conjunction; the empty conjunction is ⊤ ⊑ ⊤."""
    if not parts:
        return GCI(sub=TOP, sup=TOP)
    result = parts[0]
    for part in parts[1:]:
        result = AndS(left=result, right=part)
    return result


def func(role: RoleExpr) -> GCI:
    """func(R) = ⊤ ⊑ ¬(≥2 R.⊤)."""
    return GCI(sub=TOP, sup=NotC(body=AtLeast(count=2, role=role, body=TOP)))


def conjuncts(s: DLSentence) -> list[DLSentence]:
    """Flatten the top-level conjunction spine of s."""
    if isinstance(s, AndS):
        return conjuncts(s.left) + conjuncts(s.right)
    return [s]


# ============================================================================
# Role Box and Documents
# ============================================================================

class RoleBox(BaseModel):
    """Non-simple role names and the declared strict order on roles."""
    model_config = ConfigDict(frozen=True)

    nonsimple: frozenset[str] = frozenset()
    order: frozenset[tuple[str, str]] = frozenset()

    def is_simple(self, role: RoleExpr) -> bool:
        return not (role_names(role) & self.nonsimple)

    def precedes(self, smaller: str, larger: str) -> bool:
        """smaller ≺ larger: declared (transitively) or smaller simple and larger not."""
        if smaller not in self.nonsimple and larger in self.nonsimple:
            return True
        seen, frontier = set(), {smaller}
        while frontier:
            step = {b for a, b in self.order if a in frontier} - seen
            if larger in step:
                return True
            seen |= step
            frontier = step
        return False


class DLDocument(BaseModel):
    """A DL sentence with its grammar mode and header declarations."""
    model_config = ConfigDict(frozen=True)

    sentence: DLSentence
    mode: DLMode = "sroiq"
    simple: frozenset[str] = frozenset()
    nonsimple: frozenset[str] = frozenset()
    order: tuple[tuple[str, str], ...] = ()
    rigid: frozenset[str] = frozenset()

    @property
    def role_box(self) -> RoleBox:
        return RoleBox(nonsimple=nonsimple_roles(self.sentence, self.nonsimple), order=frozenset(self.order))


def role_names(role: RoleExpr) -> frozenset[str]:
    match role:
        case RoleName(name=name) | Inverse(role=RoleName(name=name)):
            return frozenset({name})
        case RoleNot(role=inner):
            return role_names(inner)
        case RoleAnd(left=left, right=right) | RoleOr(left=left, right=right):
            return role_names(left) | role_names(right)
    raise TypeError(f"Unknown role expression {role!r}")


def iter_sentences(s: DLSentence) -> Iterator[DLSentence]:
    yield s
    match s:
        case NotS(body=body) | DiaS(body=body) | BoxS(body=body):
            yield from iter_sentences(body)
        case AndS(left=left, right=right) | OrS(left=left, right=right):
            yield from iter_sentences(left)
            yield from iter_sentences(right)


def iter_concepts(c: ConceptExpr) -> Iterator[ConceptExpr]:
    yield c
    match c:
        case NotC(body=body) | AtLeast(body=body) | AtMost(body=body) | ForallC(body=body) | DiaC(body=body) | BoxC(body=body):
            yield from iter_concepts(body)
        case AndC(left=left, right=right) | OrC(left=left, right=right):
            yield from iter_concepts(left)
            yield from iter_concepts(right)


def sentence_concepts(s: DLSentence) -> Iterator[ConceptExpr]:
    for g in iter_sentences(s):
        if isinstance(g, GCI):
            yield from iter_concepts(g.sub)
            yield from iter_concepts(g.sup)


def rias(s: DLSentence) -> list[RIA]:
    return [g for g in iter_sentences(s) if isinstance(g, RIA)]


def nonsimple_roles(s: DLSentence, declared: frozenset[str] = frozenset()) -> frozenset[str]:
    """Declared non-simple roles plus every role heading a RIA."""
    return frozenset(declared) | {r.head.name for r in rias(s)}


def dl_signature(s: DLSentence) -> Signature:
    """Concept names as unary, role names as binary predicates, nominals as constants."""
    predicates: dict[str, int] = {}
    constants: set[str] = set()
    standpoints: set[str] = {"*"}

    def add_role(role: RoleExpr) -> None:
        predicates.update({name: 2 for name in role_names(role)})

    for g in iter_sentences(s):
        match g:
            case RIA(chain=chain, head=head):
                for role in chain:
                    add_role(role)
                add_role(head)
            case DiaS(standpoint=e) | BoxS(standpoint=e):
                standpoints |= standpoint_symbols(e)
    for c in sentence_concepts(s):
        match c:
            case Atomic(name=name):
                predicates[name] = 1
            case Nominal(name=name):
                constants.add(name)
            case AtLeast(role=role) | AtMost(role=role) | ForallC(role=role) | SelfC(role=role):
                add_role(role)
            case DiaC(standpoint=e) | BoxC(standpoint=e):
                standpoints |= standpoint_symbols(e)
    return Signature(predicates=predicates, constants=frozenset(constants), standpoints=frozenset(standpoints))


# ============================================================================
# Translation into standpoint C2
# ============================================================================

def _other(z: str) -> str:
    return "y" if z == "x" else "x"


def rtrans(z: str, z2: str, role: RoleExpr) -> Formula:
    match role:
        case RoleName(name=name):
            return atom(name, z, z2)
        case Inverse(role=RoleName(name=name)):
            return atom(name, z2, z)
        case RoleNot(role=inner):
            return neg(rtrans(z, z2, inner))
        case RoleAnd(left=left, right=right):
            return And(left=rtrans(z, z2, left), right=rtrans(z, z2, right))
        case RoleOr(left=left, right=right):
            return disj(rtrans(z, z2, left), rtrans(z, z2, right))
    raise TypeError(f"Unknown role expression {role!r}")


def ctrans(z: str, c: ConceptExpr) -> Formula:
    """Concept c as a formula with the single free variable z."""
    other = _other(z)
    match c:
        case Atomic(name=name):
            return atom(name, z)
        case Nominal(name=name):
            return eq(z, f"#{name}")
        case TopC():
            return TRUE
        case NotC(body=body):
            return neg(ctrans(z, body))
        case AndC(left=left, right=right):
            return And(left=ctrans(z, left), right=ctrans(z, right))
        case OrC(left=left, right=right):
            return disj(ctrans(z, left), ctrans(z, right))
        case AtLeast(count=n, role=role, body=body):
            return count(">=", n, other, And(left=rtrans(z, other, role), right=ctrans(other, body)))
        case AtMost(count=n, role=role, body=body):
            return neg(count(">=", n + 1, other, And(left=rtrans(z, other, role), right=ctrans(other, body))))
        case ForallC(role=role, body=body):
            return neg(count(">=", 1, other, And(left=rtrans(z, other, role), right=neg(ctrans(other, body)))))
        case SelfC(role=role):
            return rtrans(z, z, role)
        case DiaC(standpoint=e, body=body):
            return dia(e, ctrans(z, body))
        case BoxC(standpoint=e, body=body):
            return box(e, ctrans(z, body))
    raise TypeError(f"Unknown concept expression {c!r}")


def ria_formula(ria: RIA) -> Formula:
    """∀x0..xk (S1(x0,x1) ∧ .. ∧ Sk(x_{k-1},xk) → R(x0,xk)); two-variable only when k = 1."""
    k = len(ria.chain)
    names = ["x", "y"] if k == 1 else [f"x{i}" for i in range(k + 1)]
    body = implies(
        conj(*(rtrans(names[i], names[i + 1], role) for i, role in enumerate(ria.chain))),
        atom(ria.head.name, names[0], names[-1]),
    )
    for name in reversed(names):
        body = forall(name, body)
    return body


def _translate(s: DLSentence, ria_rule) -> Formula:
    match s:
        case GCI(sub=sub, sup=sup):
            return forall("x", implies(ctrans("x", sub), ctrans("x", sup)))
        case RIA():
            return ria_rule(s)
        case NotS(body=body):
            return neg(_translate(body, ria_rule))
        case AndS(left=left, right=right):
            return And(left=_translate(left, ria_rule), right=_translate(right, ria_rule))
        case OrS(left=left, right=right):
            return disj(_translate(left, ria_rule), _translate(right, ria_rule))
        case DiaS(standpoint=e, body=body):
            return dia(e, _translate(body, ria_rule))
        case BoxS(standpoint=e, body=body):
            return box(e, _translate(body, ria_rule))
    raise TypeError(f"Unknown DL sentence {s!r}")


def _c2_ria(ria: RIA) -> Formula:
    if len(ria.chain) > 1:
        raise UntranslatableRIA(f"untranslatable RIA: chain of length {len(ria.chain)} into '{ria.head.name}'")
    return ria_formula(ria)


def dl_to_fosl(s: DLSentence) -> Formula:
    """Monodic standpoint C2 rendering of s.

    Raises:
        UntranslatableRIA: If s contains a role chain of length >= 2
    """
    return _translate(s, _c2_ria)


def dl_to_fol(s: DLSentence) -> Formula:
    """Like dl_to_fosl but renders long role chains with extra variables."""
    return _translate(s, ria_formula)


# ============================================================================
# Direct Semantics
# ============================================================================

def role_holds(M: StandpointStructure, world: str, role: RoleExpr, a: str, b: str) -> bool:
    ext = M.gamma[world]
    match role:
        case RoleName(name=name):
            return ext.holds(name, (a, b))
        case Inverse(role=RoleName(name=name)):
            return ext.holds(name, (b, a))
        case RoleNot(role=inner):
            return not role_holds(M, world, inner, a, b)
        case RoleAnd(left=left, right=right):
            return role_holds(M, world, left, a, b) and role_holds(M, world, right, a, b)
        case RoleOr(left=left, right=right):
            return role_holds(M, world, left, a, b) or role_holds(M, world, right, a, b)
    raise TypeError(f"Unknown role expression {role!r}")


def role_extension(M: StandpointStructure, world: str, role: RoleExpr) -> frozenset[tuple[str, str]]:
    return frozenset(
        (a, b) for a, b in itertools.product(M.domain, repeat=2) if role_holds(M, world, role, a, b)
    )


def standpoint_worlds(M: StandpointStructure, e: StandpointExpr) -> list[str]:
    val = StructureValuation(M)
    return [w for w in M.worlds if eval_standpoint(val, e, w)]


def _successors(M: StandpointStructure, world: str, elem: str, role: RoleExpr, body: ConceptExpr) -> int:
    return sum(
        1 for e in M.domain if role_holds(M, world, role, elem, e) and eval_dl(M, world, e, body)
    )


def eval_dl(M: StandpointStructure, world: str, elem: str, c: ConceptExpr) -> bool:
    """Whether elem belongs to concept c at world."""
    match c:
        case Atomic(name=name):
            return M.gamma[world].holds(name, (elem,))
        case Nominal(name=name):
            return M.const_map[name] == elem
        case TopC():
            return True
        case NotC(body=body):
            return not eval_dl(M, world, elem, body)
        case AndC(left=left, right=right):
            return eval_dl(M, world, elem, left) and eval_dl(M, world, elem, right)
        case OrC(left=left, right=right):
            return eval_dl(M, world, elem, left) or eval_dl(M, world, elem, right)
        case AtLeast(count=n, role=role, body=body):
            return _successors(M, world, elem, role, body) >= n
        case AtMost(count=n, role=role, body=body):
            return _successors(M, world, elem, role, body) <= n
        case ForallC(role=role, body=body):
            return all(
                eval_dl(M, world, e, body) for e in M.domain if role_holds(M, world, role, elem, e)
            )
        case SelfC(role=role):
            return role_holds(M, world, role, elem, elem)
        case DiaC(standpoint=e, body=body):
            return any(eval_dl(M, w, elem, body) for w in standpoint_worlds(M, e))
        case BoxC(standpoint=e, body=body):
            return all(eval_dl(M, w, elem, body) for w in standpoint_worlds(M, e))
    raise TypeError(f"Unknown concept expression {c!r}")


def _compose(left: frozenset, right: frozenset) -> frozenset[tuple[str, str]]:
    return frozenset((a, c) for a, b in left for b2, c in right if b == b2)


def chain_extension(M: StandpointStructure, world: str, chain: tuple[RoleExpr, ...]) -> frozenset[tuple[str, str]]:
    result = role_extension(M, world, chain[0])
    for role in chain[1:]:
        result = _compose(result, role_extension(M, world, role))
    return result


def eval_dl_sentence(M: StandpointStructure, world: str, s: DLSentence) -> bool:
    match s:
        case GCI(sub=sub, sup=sup):
            return all(not eval_dl(M, world, d, sub) or eval_dl(M, world, d, sup) for d in M.domain)
        case RIA(chain=chain, head=head):
            return chain_extension(M, world, chain) <= role_extension(M, world, head)
        case NotS(body=body):
            return not eval_dl_sentence(M, world, body)
        case AndS(left=left, right=right):
            return eval_dl_sentence(M, world, left) and eval_dl_sentence(M, world, right)
        case OrS(left=left, right=right):
            return eval_dl_sentence(M, world, left) or eval_dl_sentence(M, world, right)
        case DiaS(standpoint=e, body=body):
            return any(eval_dl_sentence(M, w, body) for w in standpoint_worlds(M, e))
        case BoxS(standpoint=e, body=body):
            return all(eval_dl_sentence(M, w, body) for w in standpoint_worlds(M, e))
    raise TypeError(f"Unknown DL sentence {s!r}")


def dl_satisfies(M: StandpointStructure, s: DLSentence) -> bool:
    """s holds at every precisification of M."""
    return all(eval_dl_sentence(M, w, s) for w in M.worlds)
