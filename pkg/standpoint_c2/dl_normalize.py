"""Normal forms and RIA elimination for standpoint DL sentences.

The pipeline used by `spc dl2fosl` is nnf -> separate_rias -> compile_sh_rias
-> dl_to_fosl. Model maps in both directions live next to each step so the
suites can check equisatisfiability constructively:

- extend_separation_model: model of the NNF sentence -> model of the separation
- close_roles: model of the separation -> model of the NNF sentence
- extend_compiled_model: model of the separation -> model of the compilation
"""

import logging
from collections.abc import Iterable

from pydantic import BaseModel, ConfigDict, Field

from .dl import (
    BOTTOM,
    GCI,
    RIA,
    TOP,
    AndC,
    AndS,
    AtLeast,
    AtMost,
    Atomic,
    BoxC,
    BoxS,
    ConceptExpr,
    DiaC,
    DiaS,
    DLDocument,
    DLSentence,
    ForallC,
    Inverse,
    Nominal,
    NotC,
    NotS,
    OrC,
    OrS,
    RoleAnd,
    RoleBox,
    RoleExpr,
    RoleName,
    RoleNot,
    RoleOr,
    SelfC,
    TopC,
    and_c,
    and_s,
    dl_signature,
    eval_dl,
    eval_dl_sentence,
    nonsimple_roles,
)
from .errors import IrregularRIA, NotSHShaped
from .semantics import StandpointStructure, WorldExtension
from .syntax import Signature, fresh_name

logger = logging.getLogger(__name__)


# ============================================================================
# Negation Normal Form
# ============================================================================

def nnf_concept(c: ConceptExpr) -> ConceptExpr:
    """Push concept negation down to names, nominals, Self and Top."""
    match c:
        case Atomic() | Nominal() | TopC() | SelfC():
            return c
        case NotC(body=body):
            return _negated_concept(body)
        case AndC(left=left, right=right):
            return AndC(left=nnf_concept(left), right=nnf_concept(right))
        case OrC(left=left, right=right):
            return OrC(left=nnf_concept(left), right=nnf_concept(right))
        case AtLeast(count=n, role=role, body=body):
            return AtLeast(count=n, role=role, body=nnf_concept(body))
        case AtMost(count=n, role=role, body=body):
            return AtMost(count=n, role=role, body=nnf_concept(body))
        case ForallC(role=role, body=body):
            return ForallC(role=role, body=nnf_concept(body))
        case DiaC(standpoint=e, body=body):
            return DiaC(standpoint=e, body=nnf_concept(body))
        case BoxC(standpoint=e, body=body):
            return BoxC(standpoint=e, body=nnf_concept(body))
    raise TypeError(f"Unknown concept expression {c!r}")


def _negated_concept(c: ConceptExpr) -> ConceptExpr:
    match c:
        case Atomic() | Nominal() | TopC() | SelfC():
            return NotC(body=c)
        case NotC(body=body):
            return nnf_concept(body)
        case AndC(left=left, right=right):
            return OrC(left=_negated_concept(left), right=_negated_concept(right))
        case OrC(left=left, right=right):
            return AndC(left=_negated_concept(left), right=_negated_concept(right))
        case AtLeast(count=0):
            return BOTTOM
        case AtLeast(count=1, role=role, body=body):
            return ForallC(role=role, body=_negated_concept(body))
        case AtLeast(count=n, role=role, body=body):
            return AtMost(count=n - 1, role=role, body=nnf_concept(body))
        case AtMost(count=n, role=role, body=body):
            return AtLeast(count=n + 1, role=role, body=nnf_concept(body))
        case ForallC(role=role, body=body):
            return AtLeast(count=1, role=role, body=_negated_concept(body))
        case DiaC(standpoint=e, body=body):
            return BoxC(standpoint=e, body=_negated_concept(body))
        case BoxC(standpoint=e, body=body):
            return DiaC(standpoint=e, body=_negated_concept(body))
    raise TypeError(f"Unknown concept expression {c!r}")


def is_nnf_concept(c: ConceptExpr) -> bool:
    match c:
        case NotC(body=body):
            return isinstance(body, (Atomic, Nominal, TopC, SelfC))
        case AndC(left=left, right=right) | OrC(left=left, right=right):
            return is_nnf_concept(left) and is_nnf_concept(right)
        case AtLeast(body=body) | AtMost(body=body) | ForallC(body=body) | DiaC(body=body) | BoxC(body=body):
            return is_nnf_concept(body)
    return True


def is_nnf(s: DLSentence) -> bool:
    """No sentence negation and concept negation only on literals."""
    match s:
        case GCI(sub=sub, sup=sup):
            return is_nnf_concept(sub) and is_nnf_concept(sup)
        case RIA():
            return True
        case NotS():
            return False
        case AndS(left=left, right=right) | OrS(left=left, right=right):
            return is_nnf(left) and is_nnf(right)
        case DiaS(body=body) | BoxS(body=body):
            return is_nnf(body)
    raise TypeError(f"Unknown DL sentence {s!r}")


class _NNF:
    def __init__(self, s: DLSentence, simple_roles: Iterable[str]):
        self.taken = set(dl_signature(s).all_names)
        self.heavy = nonsimple_roles(s)
        self.simple_roles = sorted(simple_roles)
        self.binary = sorted(p for p, a in dl_signature(s).predicates.items() if a == 2 and p not in self.heavy)
        self.gadgets = 0
        self._universal: RoleExpr | None = None

    def fresh(self, base: str) -> str:
        name = fresh_name(base, self.taken)
        self.taken.add(name)
        return name

    def universal(self) -> RoleExpr:
        """U = r ∪ ¬r over the first declared simple role, else any simple role, else a fresh one."""
        if self._universal is None:
            candidates = self.simple_roles or self.binary
            r = RoleName(name=candidates[0] if candidates else self.fresh("_U"))
            self._universal = RoleOr(left=r, right=RoleNot(role=r))
        return self._universal

    def positive(self, s: DLSentence) -> DLSentence:
        match s:
            case GCI(sub=sub, sup=sup):
                return GCI(sub=TOP, sup=nnf_concept(OrC(left=NotC(body=sub), right=sup)))
            case RIA():
                return s
            case NotS(body=body):
                return self.negative(body)
            case AndS(left=left, right=right):
                return AndS(left=self.positive(left), right=self.positive(right))
            case OrS(left=left, right=right):
                return OrS(left=self.positive(left), right=self.positive(right))
            case DiaS(standpoint=e, body=body):
                return DiaS(standpoint=e, body=self.positive(body))
            case BoxS(standpoint=e, body=body):
                return BoxS(standpoint=e, body=self.positive(body))
        raise TypeError(f"Unknown DL sentence {s!r}")

    def negative(self, s: DLSentence) -> DLSentence:
        match s:
            case GCI(sub=sub, sup=sup):
                witness = nnf_concept(AndC(left=sub, right=NotC(body=sup)))
                return GCI(sub=TOP, sup=AtLeast(count=1, role=self.universal(), body=witness))
            case RIA():
                return self.violated(s)
            case NotS(body=body):
                return self.positive(body)
            case AndS(left=left, right=right):
                return OrS(left=self.negative(left), right=self.negative(right))
            case OrS(left=left, right=right):
                return AndS(left=self.negative(left), right=self.negative(right))
            case DiaS(standpoint=e, body=body):
                return BoxS(standpoint=e, body=self.negative(body))
            case BoxS(standpoint=e, body=body):
                return DiaS(standpoint=e, body=self.negative(body))
        raise TypeError(f"Unknown DL sentence {s!r}")

    def violated(self, ria: RIA) -> DLSentence:
        """A functional F-edge from a fresh o into a chain whose ends are not head-related."""
        self.gadgets += 1
        f = RoleName(name=self.fresh(f"_F{self.gadgets}"))
        o = self.fresh(f"_o{self.gadgets}")
        target: ConceptExpr = ForallC(
            role=Inverse(role=ria.head),
            body=ForallC(role=Inverse(role=f), body=NotC(body=Nominal(name=o))),
        )
        for role in reversed(ria.chain):
            target = AtLeast(count=1, role=role, body=target)
        return AndS(
            left=GCI(sub=TOP, sup=AtMost(count=1, role=f, body=TOP)),
            right=GCI(sub=Nominal(name=o), sup=AtLeast(count=1, role=f, body=target)),
        )


def nnf(s: DLSentence, simple_roles: Iterable[str] = ()) -> DLSentence:
    """Negation normal form; negated RIAs become fresh-symbol gadgets.

    Args:
        s: Sentence to normalize
        simple_roles: Declared simple roles; the first one builds the universal role

    Returns:
        An equisatisfiable sentence, equivalent when s negates no RIA
    """
    return _NNF(s, simple_roles).positive(s)


def nnf_document(doc: DLDocument) -> DLDocument:
    return doc.model_copy(update={"sentence": nnf(doc.sentence, doc.simple)})


# ============================================================================
# RIA Separation
# ============================================================================

class Separation(BaseModel):
    """ria_part ∧ rest, with the copy and switch names that link it to its input."""
    model_config = ConfigDict(frozen=True)

    ria_part: tuple[RIA, ...]
    rest: DLSentence
    copies: dict[str, str] = Field(default_factory=dict)
    switches: dict[str, RIA] = Field(default_factory=dict)
    role_box: RoleBox = Field(default_factory=RoleBox)

    @property
    def sentence(self) -> DLSentence:
        return and_s(*self.ria_part, self.rest)

    @property
    def added_roles(self) -> list[str]:
        return sorted(set(self.copies.values()) | set(self.switches))


def _rias_in(s: DLSentence) -> list[RIA]:
    match s:
        case RIA():
            return [s]
        case NotS(body=body) | DiaS(body=body) | BoxS(body=body):
            return _rias_in(body)
        case AndS(left=left, right=right) | OrS(left=left, right=right):
            return _rias_in(left) + _rias_in(right)
    return []


def _precedes(box: RoleBox, role: RoleExpr, head: str) -> bool:
    if box.is_simple(role):
        return head in box.nonsimple
    match role:
        case RoleName(name=name) | Inverse(role=RoleName(name=name)):
            return box.precedes(name, head)
    return False


def _check_regular(box: RoleBox, ria: RIA) -> None:
    head = ria.head
    chain = list(ria.chain)
    if chain == [head, head]:
        return
    if len(chain) > 1 and chain[0] == head:
        chain = chain[1:]
    elif len(chain) > 1 and chain[-1] == head:
        chain = chain[:-1]
    for role in chain:
        if not _precedes(box, role, head.name):
            raise IrregularRIA(f"irregular RIA: a chain role does not precede '{head.name}'")


def _bg_row(ria: RIA, switch: RoleName, copy: RoleName) -> RIA:
    head, chain = ria.head, ria.chain
    if list(chain) == [head, head]:
        return RIA(chain=(switch, copy, head), head=head)
    if len(chain) > 1 and chain[0] == head:
        return RIA(chain=(copy, *chain[1:], switch), head=copy)
    if len(chain) > 1 and chain[-1] == head:
        return RIA(chain=(switch, *chain[:-1], copy), head=copy)
    return RIA(chain=(switch, *chain), head=copy)


class _Separator:
    def __init__(self, s: DLSentence, box: RoleBox):
        self.box = box
        taken = set(dl_signature(s).all_names)
        self.copies: dict[str, str] = {}
        for r in sorted(box.nonsimple):
            self.copies[r] = fresh_name(f"_Copy_{r}", taken)
            taken.add(self.copies[r])
        self.switches: dict[str, RIA] = {}
        self.taken = taken

    def copied(self, role: RoleExpr) -> RoleExpr:
        match role:
            case RoleName(name=name) if name in self.copies:
                return RoleName(name=self.copies[name])
            case Inverse(role=RoleName(name=name)) if name in self.copies:
                return Inverse(role=RoleName(name=self.copies[name]))
        return role

    def concept(self, c: ConceptExpr) -> ConceptExpr:
        match c:
            case AtLeast(count=n, role=role, body=body):
                return AtLeast(count=n, role=self.copied(role) if n >= 1 else role, body=self.concept(body))
            case AtMost(count=n, role=role, body=body):
                return AtMost(count=n, role=role, body=self.concept(body))
            case ForallC(role=role, body=body):
                return ForallC(role=role, body=self.concept(body))
            case NotC(body=body):
                return NotC(body=self.concept(body))
            case AndC(left=left, right=right):
                return AndC(left=self.concept(left), right=self.concept(right))
            case OrC(left=left, right=right):
                return OrC(left=self.concept(left), right=self.concept(right))
            case DiaC(standpoint=e, body=body):
                return DiaC(standpoint=e, body=self.concept(body))
            case BoxC(standpoint=e, body=body):
                return BoxC(standpoint=e, body=self.concept(body))
        return c

    def sentence(self, s: DLSentence) -> DLSentence:
        match s:
            case GCI(sub=sub, sup=sup):
                return GCI(sub=self.concept(sub), sup=self.concept(sup))
            case RIA():
                _check_regular(self.box, s)
                switch = fresh_name(f"_Switch{len(self.switches) + 1}", self.taken)
                self.taken.add(switch)
                self.switches[switch] = s
                return GCI(sub=TOP, sup=SelfC(role=RoleName(name=switch)))
            case NotS(body=body):
                return NotS(body=self.sentence(body))
            case AndS(left=left, right=right):
                return AndS(left=self.sentence(left), right=self.sentence(right))
            case OrS(left=left, right=right):
                return OrS(left=self.sentence(left), right=self.sentence(right))
            case DiaS(standpoint=e, body=body):
                return DiaS(standpoint=e, body=self.sentence(body))
            case BoxS(standpoint=e, body=body):
                return BoxS(standpoint=e, body=self.sentence(body))
        raise TypeError(f"Unknown DL sentence {s!r}")


def separate_rias(s: DLSentence, role_box: RoleBox | None = None) -> Separation:
    """Pull every RIA out of its boolean and modal context behind a switch role.

    Args:
        s: Sentence in negation normal form
        role_box: Non-simple roles and their order; defaults to RIA heads, unordered

    Raises:
        IrregularRIA: If a chain role does not precede the RIA head
    """
    box = role_box or RoleBox(nonsimple=nonsimple_roles(s))
    box = box.model_copy(update={"nonsimple": box.nonsimple | nonsimple_roles(s)})
    separator = _Separator(s, box)
    rest = separator.sentence(s)
    rows = [RIA(chain=(RoleName(name=copy),), head=RoleName(name=r)) for r, copy in separator.copies.items()]
    for switch, ria in separator.switches.items():
        rows.append(_bg_row(ria, RoleName(name=switch), RoleName(name=separator.copies[ria.head.name])))
    extended = RoleBox(
        nonsimple=box.nonsimple | set(separator.copies.values()),
        order=box.order | {(copy, r) for r, copy in separator.copies.items()},
    )
    logger.debug("separated %d RIAs over %d non-simple roles", len(separator.switches), len(separator.copies))
    return Separation(
        ria_part=tuple(rows),
        rest=rest,
        copies=separator.copies,
        switches=separator.switches,
        role_box=extended,
    )


# ============================================================================
# SH Compilation
# ============================================================================

def invert_role(role: RoleExpr) -> RoleExpr:
    match role:
        case RoleName():
            return Inverse(role=role)
        case Inverse(role=inner):
            return inner
        case RoleNot(role=inner):
            return RoleNot(role=invert_role(inner))
        case RoleAnd(left=left, right=right):
            return RoleAnd(left=invert_role(left), right=invert_role(right))
        case RoleOr(left=left, right=right):
            return RoleOr(left=invert_role(left), right=invert_role(right))
    raise TypeError(f"Unknown role expression {role!r}")


class Compilation(BaseModel):
    """RIA-free rendering of a separation plus the meaning of each marker concept."""
    model_config = ConfigDict(frozen=True)

    sentence: DLSentence
    markers: dict[str, tuple[RoleExpr, ConceptExpr]] = Field(default_factory=dict)


class _Compiler:
    def __init__(self, sep: Separation):
        self.sep = sep
        self.box = sep.role_box
        self.taken = set(dl_signature(sep.sentence).all_names)
        self.memo: dict[tuple, str] = {}
        self.markers: dict[str, tuple[RoleExpr, ConceptExpr]] = {}
        self.gcis: list[GCI] = []

    def rows_for(self, role: RoleExpr) -> list[tuple[RoleExpr, ...]]:
        match role:
            case RoleName(name=name):
                return [r.chain for r in self.sep.ria_part if r.head.name == name]
            case Inverse(role=RoleName(name=name)):
                return [
                    tuple(invert_role(u) for u in reversed(r.chain))
                    for r in self.sep.ria_part
                    if r.head.name == name
                ]
        return []

    def universal(self, role: RoleExpr, body: ConceptExpr) -> ConceptExpr:
        if self.box.is_simple(role):
            return ForallC(role=role, body=body)
        return Atomic(name=self.marker(role, body))

    def marker(self, role: RoleExpr, body: ConceptExpr) -> str:
        key = (role, body)
        if key in self.memo:
            return self.memo[key]
        name = fresh_name(f"_M{len(self.memo) + 1}", self.taken)
        self.taken.add(name)
        self.memo[key] = name
        self.markers[name] = (role, body)
        parts: list[ConceptExpr] = [ForallC(role=role, body=body)]
        for chain in self.rows_for(role):
            target = body
            for step in reversed(chain):
                target = self.universal(step, target)
            parts.append(target)
        self.gcis.append(GCI(sub=Atomic(name=name), sup=and_c(*parts)))
        return name

    def concept(self, c: ConceptExpr) -> ConceptExpr:
        match c:
            case ForallC(role=role, body=body):
                return self.universal(role, self.concept(body))
            case AtLeast(count=n, role=role, body=body):
                return AtLeast(count=n, role=role, body=self.concept(body))
            case AtMost(count=n, role=role, body=body):
                return AtMost(count=n, role=role, body=self.concept(body))
            case NotC(body=body):
                return NotC(body=self.concept(body))
            case AndC(left=left, right=right):
                return AndC(left=self.concept(left), right=self.concept(right))
            case OrC(left=left, right=right):
                return OrC(left=self.concept(left), right=self.concept(right))
            case DiaC(standpoint=e, body=body):
                return DiaC(standpoint=e, body=self.concept(body))
            case BoxC(standpoint=e, body=body):
                return BoxC(standpoint=e, body=self.concept(body))
        return c

    def sentence(self, s: DLSentence) -> DLSentence:
        match s:
            case GCI(sub=sub, sup=sup):
                return GCI(sub=self.concept(sub), sup=self.concept(sup))
            case NotS(body=body):
                return NotS(body=self.sentence(body))
            case AndS(left=left, right=right):
                return AndS(left=self.sentence(left), right=self.sentence(right))
            case OrS(left=left, right=right):
                return OrS(left=self.sentence(left), right=self.sentence(right))
            case DiaS(standpoint=e, body=body):
                return DiaS(standpoint=e, body=self.sentence(body))
            case BoxS(standpoint=e, body=body):
                return BoxS(standpoint=e, body=self.sentence(body))
        raise TypeError(f"Unexpected sentence in separated rest: {s!r}")


def compile_sh_rias(sep: Separation) -> Compilation:
    """Replace ∀ over non-simple roles by marker concepts that follow the role rows.

    Only the unguarded copy links R̲ ⊑ R survive as RIAs, all of chain length 1.

    Raises:
        NotSHShaped: If a separated RIA is neither S ⊑ R nor R ∘ R ⊑ R
    """
    for ria in sep.switches.values():
        if len(ria.chain) != 1 and list(ria.chain) != [ria.head, ria.head]:
            raise NotSHShaped(f"not SH-shaped: chain of length {len(ria.chain)} into '{ria.head.name}'")
    compiler = _Compiler(sep)
    rest = compiler.sentence(sep.rest)
    links = [r for r in sep.ria_part if len(r.chain) == 1]
    logger.debug("compiled %d marker concepts", len(compiler.markers))
    return Compilation(
        sentence=and_s(*links, rest, *compiler.gcis),
        markers=compiler.markers,
    )


def dl_pipeline(doc: DLDocument) -> tuple[DLSentence, Separation, Compilation]:
    """nnf, then separate_rias, then compile_sh_rias."""
    normal = nnf(doc.sentence, doc.simple)
    sep = separate_rias(normal, doc.role_box)
    return normal, sep, compile_sh_rias(sep)


# ============================================================================
# Model Maps
# ============================================================================

def _add_binary(M: StandpointStructure, names: Iterable[str]) -> Signature:
    return M.signature.merge(Signature(predicates={n: 2 for n in names}))


def _relation(binary: dict[str, set], domain: tuple[str, ...], role: RoleExpr) -> set[tuple[str, str]]:
    match role:
        case RoleName(name=name):
            return set(binary.get(name, ()))
        case Inverse(role=RoleName(name=name)):
            return {(b, a) for a, b in binary.get(name, ())}
        case RoleNot(role=inner):
            return {(a, b) for a in domain for b in domain} - _relation(binary, domain, inner)
        case RoleAnd(left=left, right=right):
            return _relation(binary, domain, left) & _relation(binary, domain, right)
        case RoleOr(left=left, right=right):
            return _relation(binary, domain, left) | _relation(binary, domain, right)
    raise TypeError(f"Unknown role expression {role!r}")


def _chain(binary: dict[str, set], domain: tuple[str, ...], chain: tuple[RoleExpr, ...]) -> set[tuple[str, str]]:
    result = _relation(binary, domain, chain[0])
    for role in chain[1:]:
        step = _relation(binary, domain, role)
        result = {(a, c) for a, b in result for b2, c in step if b == b2}
    return result


def _with_binary(M: StandpointStructure, signature: Signature, tables: dict[str, dict[str, set]]) -> StandpointStructure:
    gamma = {
        w: WorldExtension(
            unary=M.gamma[w].unary,
            binary={p: frozenset(pairs) for p, pairs in sorted(tables[w].items()) if pairs},
            nullary=M.gamma[w].nullary,
        )
        for w in M.worlds
    }
    return StandpointStructure(
        domain=M.domain,
        worlds=M.worlds,
        signature=signature,
        sigma=M.sigma,
        gamma=gamma,
        const_map=M.const_map,
    )


def extend_separation_model(M: StandpointStructure, sep: Separation) -> StandpointStructure:
    """Copies equal their originals; a switch is the identity where its RIA holds."""
    diagonal = {(d, d) for d in M.domain}
    tables: dict[str, dict[str, set]] = {}
    for w in M.worlds:
        binary = {p: set(pairs) for p, pairs in M.gamma[w].binary.items()}
        for r, copy in sep.copies.items():
            binary[copy] = set(binary.get(r, ()))
        for switch, ria in sep.switches.items():
            binary[switch] = set(diagonal) if eval_dl_sentence(M, w, ria) else set()
        tables[w] = binary
    return _with_binary(M, _add_binary(M, sep.added_roles), tables)


def close_roles(M: StandpointStructure, sep: Separation) -> StandpointStructure:
    """Least role interpretation satisfying ria_part below what M already provides.

    Switches shrink to the diagonal, originals with copies restart empty, and
    every row is applied until nothing changes.
    """
    tables: dict[str, dict[str, set]] = {}
    for w in M.worlds:
        binary = {p: set(pairs) for p, pairs in M.gamma[w].binary.items()}
        for switch in sep.switches:
            binary[switch] = {(a, b) for a, b in binary.get(switch, ()) if a == b}
        for r in sep.copies:
            binary[r] = set()
        changed = True
        while changed:
            changed = False
            for ria in sep.ria_part:
                head = binary.setdefault(ria.head.name, set())
                new = _chain(binary, M.domain, ria.chain) - head
                if new:
                    head |= new
                    changed = True
        tables[w] = binary
    return _with_binary(M, _add_binary(M, sep.added_roles), tables)


def extend_compiled_model(M: StandpointStructure, compiled: Compilation) -> StandpointStructure:
    """Give every marker the extension of ∀R.C it stands for, in creation order."""
    result = M.model_copy()
    for name, (role, body) in compiled.markers.items():
        meaning = ForallC(role=role, body=body)
        gamma = {
            w: result.gamma[w].model_copy(update={
                "unary": {**result.gamma[w].unary, name: frozenset(d for d in M.domain if eval_dl(result, w, d, meaning))},
            })
            for w in M.worlds
        }
        result = StandpointStructure(
            domain=M.domain,
            worlds=M.worlds,
            signature=result.signature.merge(Signature(predicates={name: 1})),
            sigma=M.sigma,
            gamma=gamma,
            const_map=M.const_map,
        )
    return result
