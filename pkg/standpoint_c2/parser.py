"""Text formats: s-expression parsers and printers.

This module defines:
- SourceSpan / ParseError with caret rendering
- A lark-based s-expression reader shared by every format
- Formula documents (.spf), structures (.sps), FO interpretations,
  rename ledgers, and DL documents (.spd)

Every printer emits a canonical form that its parser reads back to an
equal value.
"""

import logging
import re
from collections.abc import Iterable, Sequence
from typing import NoReturn

import lark
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken
from pydantic import BaseModel, ConfigDict

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
    DLMode,
    DLSentence,
    ForallC,
    Inverse,
    Nominal,
    NotC,
    NotS,
    OrC,
    OrS,
    RoleAnd,
    RoleExpr,
    RoleName,
    RoleNot,
    RoleOr,
    SelfC,
    TopC,
    and_c,
    and_s,
    exactly,
    func,
    nonsimple_roles,
    or_c,
    role_names,
)
from .errors import StandpointError
from .frugalizer import RenameLedger
from .semantics import FOInterpretation, StandpointStructure, WorldExtension, build_extension
from .syntax import (
    FALSE,
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
    FormulaDocument,
    Inter,
    Not,
    Signature,
    StandpointExpr,
    Symbol,
    Top,
    Union,
    Var,
    conj,
    disj,
    iff,
    implies,
    infer_signature,
)

logger = logging.getLogger(__name__)

PRED_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*")
NAME_RE = re.compile(r"[a-z_][A-Za-z0-9_]*")
CONST_RE = re.compile(r"#[A-Za-z0-9_]+")
ID_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.]*")
COUNT_RE = re.compile(r"exists(<=|>=|=)([0-9]+)")
INT_RE = re.compile(r"[0-9]+")


# ============================================================================
# Spans and Errors
# ============================================================================

class SourceSpan(BaseModel):
    """Half-open byte range [start, end) in the source text."""
    model_config = ConfigDict(frozen=True)

    start: int
    end: int


class ParseError(StandpointError):
    """Malformed input, carrying the offending span and what was expected."""

    def __init__(self, span: SourceSpan, message: str, expected: Sequence[str] = ()):
        super().__init__(message)
        self.span = span
        self.message = message
        self.expected = tuple(expected)

    def render(self, text: str) -> str:
        """Message plus the offending source line with carets under the span."""
        data = text.encode("utf-8")
        start = len(data[: self.span.start].decode("utf-8", errors="ignore"))
        end = max(start + 1, len(data[: self.span.end].decode("utf-8", errors="ignore")))
        line_start = text.rfind("\n", 0, start) + 1
        line_end = text.find("\n", start)
        line_end = len(text) if line_end == -1 else line_end
        line_no = text.count("\n", 0, start) + 1
        column = start - line_start + 1
        width = max(1, min(end, line_end) - start)
        rendered = f"line {line_no}, column {column}: {self.message}\n{text[line_start:line_end]}\n{' ' * (start - line_start)}{'^' * width}"
        if self.expected:
            rendered += f"\nexpected one of: {', '.join(self.expected)}"
        return rendered


# ============================================================================
# S-expression Reader
# ============================================================================

class SAtom(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    span: SourceSpan


class SList(BaseModel):
    model_config = ConfigDict(frozen=True)

    items: tuple["SAtom | SList", ...]
    span: SourceSpan


SList.model_rebuild()
SNode = SAtom | SList

_SEXPR_GRAMMAR = r"""
    start: _item*
    _item: list | SYMBOL
    list: LPAR _item* RPAR
    LPAR: "("
    RPAR: ")"
    SYMBOL: /[^\s();]+/
    COMMENT: /;[^\n]*/
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_sexpr_parser = lark.Lark(_SEXPR_GRAMMAR, start="start", parser="lalr")


class _ByteOffsets:
    """Maps character positions to UTF-8 byte offsets."""

    def __init__(self, text: str):
        self._ascii = text.isascii()
        if not self._ascii:
            self._table = [0]
            for ch in text:
                self._table.append(self._table[-1] + len(ch.encode("utf-8")))

    def __call__(self, pos: int) -> int:
        return pos if self._ascii else self._table[pos]


class _SExprBuilder(lark.Transformer):
    def __init__(self, offsets: _ByteOffsets):
        super().__init__()
        self._offsets = offsets

    def _span(self, start: int, end: int) -> SourceSpan:
        return SourceSpan(start=self._offsets(start), end=self._offsets(end))

    def SYMBOL(self, token):
        return SAtom(text=str(token), span=self._span(token.start_pos, token.end_pos))

    def list(self, children):
        lpar, *items, rpar = children
        return SList(items=tuple(items), span=self._span(lpar.start_pos, rpar.end_pos))

    def start(self, children):
        return list(children)


def read_sexprs(text: str) -> list[SNode]:
    """Top-level s-expressions of text.

    Raises:
        ParseError: On unbalanced parentheses
    """
    offsets = _ByteOffsets(text)
    end = offsets(len(text))
    try:
        tree = _sexpr_parser.parse(text)
    except UnexpectedEOF as exc:
        raise ParseError(SourceSpan(start=end, end=end), "unexpected end of input: unclosed '('", sorted(exc.expected)) from None
    except UnexpectedToken as exc:
        pos = exc.token.start_pos
        if exc.token.type == "$END" or pos is None:
            raise ParseError(SourceSpan(start=end, end=end), "unexpected end of input: unclosed '('", sorted(exc.expected)) from None
        raise ParseError(
            SourceSpan(start=offsets(pos), end=offsets(exc.token.end_pos)),
            f"unexpected '{exc.token}'",
            sorted(exc.expected),
        ) from None
    except UnexpectedCharacters as exc:
        pos = offsets(exc.pos_in_stream)
        raise ParseError(SourceSpan(start=pos, end=pos + 1), "unexpected character", sorted(exc.allowed or ())) from None
    except UnexpectedInput as exc:
        raise ParseError(SourceSpan(start=end, end=end), str(exc)) from None
    return _SExprBuilder(offsets).transform(tree)


def _whole(text: str) -> SourceSpan:
    return SourceSpan(start=0, end=len(text.encode("utf-8")))


# ============================================================================
# Shared Reader Helpers
# ============================================================================

class _Reader:
    """Helpers for turning s-expressions into typed values."""

    def fail(self, node: SNode, message: str, expected: Sequence[str] = ()) -> NoReturn:
        raise ParseError(node.span, message, expected)

    def head(self, node: SNode) -> str | None:
        if isinstance(node, SList) and node.items and isinstance(node.items[0], SAtom):
            return node.items[0].text
        return None

    def args(self, node: SList, n: int | None = None, at_least: int | None = None) -> tuple[SNode, ...]:
        args = node.items[1:]
        if n is not None and len(args) != n:
            self.fail(node, f"'{self.head(node)}' takes {n} argument(s), got {len(args)}")
        if at_least is not None and len(args) < at_least:
            self.fail(node, f"'{self.head(node)}' takes at least {at_least} arguments, got {len(args)}")
        return args

    def symbol(self, node: SNode, pattern: re.Pattern, what: str) -> str:
        if not isinstance(node, SAtom) or not pattern.fullmatch(node.text):
            self.fail(node, f"expected {what}")
        return node.text

    def integer(self, node: SNode) -> int:
        return int(self.symbol(node, INT_RE, "a non-negative integer"))

    def standpoint(self, node: SNode) -> StandpointExpr:
        if isinstance(node, SAtom):
            if node.text == STAR:
                return STAR_EXPR
            return Symbol(name=self.symbol(node, NAME_RE, "a standpoint expression"))
        ops = {"union": Union, "inter": Inter, "diff": Diff}
        head = self.head(node)
        if head not in ops:
            self.fail(node, "expected a standpoint expression", sorted(ops))
        left, right = self.args(node, 2)
        return ops[head](left=self.standpoint(left), right=self.standpoint(right))

    def names(self, node: SList, pattern: re.Pattern, what: str) -> list[str]:
        return [self.symbol(arg, pattern, what) for arg in node.items[1:]]


def _print_standpoint(e: StandpointExpr) -> str:
    match e:
        case Symbol(name=name):
            return name
        case Union(left=left, right=right):
            return f"(union {_print_standpoint(left)} {_print_standpoint(right)})"
        case Inter(left=left, right=right):
            return f"(inter {_print_standpoint(left)} {_print_standpoint(right)})"
        case Diff(left=left, right=right):
            return f"(diff {_print_standpoint(left)} {_print_standpoint(right)})"
    raise TypeError(f"Unknown standpoint expression {e!r}")


# ============================================================================
# Formula Documents
# ============================================================================

class _FormulaReader(_Reader):
    def __init__(self) -> None:
        self.arities: dict[str, int] = {}

    def note_arity(self, node: SNode, pred: str, arity: int) -> None:
        known = self.arities.setdefault(pred, arity)
        if known != arity:
            self.fail(node, f"arity conflict for predicate '{pred}': {known} vs {arity}")

    def term(self, node: SNode) -> Var | Const:
        if isinstance(node, SAtom) and CONST_RE.fullmatch(node.text):
            return Const(name=node.text[1:])
        return Var(name=self.symbol(node, NAME_RE, "a variable or #constant"))

    def formula(self, node: SNode) -> Formula:
        if isinstance(node, SAtom):
            if node.text == "true":
                return TRUE
            if node.text == "false":
                return FALSE
            pred = self.symbol(node, PRED_RE, "a formula")
            self.note_arity(node, pred, 0)
            return Atom(pred=pred)
        head = self.head(node)
        if head is None:
            self.fail(node, "expected a formula")
        if PRED_RE.fullmatch(head):
            terms = tuple(self.term(arg) for arg in node.items[1:])
            if len(terms) > 2:
                self.fail(node, f"predicate '{head}' used with arity {len(terms)}; at most 2 allowed")
            self.note_arity(node, head, len(terms))
            return Atom(pred=head, terms=terms)
        if match := COUNT_RE.fullmatch(head):
            var, body = self.args(node, 2)
            return CountExists(
                comparator=match.group(1),
                count=int(match.group(2)),
                var=self.symbol(var, NAME_RE, "a variable"),
                body=self.formula(body),
            )
        match head:
            case "=":
                left, right = self.args(node, 2)
                return Eq(left=self.term(left), right=self.term(right))
            case "not":
                (body,) = self.args(node, 1)
                return Not(body=self.formula(body))
            case "and":
                return conj(*(self.formula(arg) for arg in self.args(node, at_least=2)))
            case "or":
                return disj(*(self.formula(arg) for arg in self.args(node, at_least=2)))
            case "implies" | "iff":
                left, right = self.args(node, 2)
                build = implies if head == "implies" else iff
                return build(self.formula(left), self.formula(right))
            case "forall" | "exists":
                var, body = self.args(node, 2)
                name = self.symbol(var, NAME_RE, "a variable")
                if head == "exists":
                    return CountExists(comparator=">=", count=1, var=name, body=self.formula(body))
                return CountExists(comparator="=", count=0, var=name, body=Not(body=self.formula(body)))
            case "dia" | "box":
                e, body = self.args(node, 2)
                inner = self.formula(body)
                if head == "dia":
                    return Dia(standpoint=self.standpoint(e), body=inner)
                return Not(body=Dia(standpoint=self.standpoint(e), body=Not(body=inner)))
        self.fail(node, f"unknown form '{head}'")


def parse_formula(text: str) -> FormulaDocument:
    """Parse a formula document: declarations followed by one or more formulas.

    Several formulas are conjoined left to right.

    Raises:
        ParseError: On syntax errors, unknown forms or arity conflicts
    """
    reader = _FormulaReader()
    formulas: list[Formula] = []
    constants: set[str] = set()
    standpoints: set[str] = {STAR}
    rigid: set[str] = set()
    for node in read_sexprs(text):
        match reader.head(node):
            case "declare-pred":
                name, arity = reader.args(node, 2)
                pred = reader.symbol(name, PRED_RE, "a predicate name")
                n = reader.integer(arity)
                if n > 2:
                    reader.fail(arity, "predicate arity must be 0, 1 or 2")
                reader.note_arity(node, pred, n)
            case "declare-const":
                constants |= {c[1:] for c in reader.names(node, CONST_RE, "a #constant")}
            case "declare-standpoint":
                standpoints |= set(reader.names(node, NAME_RE, "a standpoint name"))
            case "declare-rigid":
                rigid |= set(reader.names(node, PRED_RE, "a predicate name"))
            case _:
                formulas.append(reader.formula(node))
    if not formulas:
        raise ParseError(_whole(text), "document contains no formula")
    formula = conj(*formulas)
    try:
        declared = Signature(
            predicates=reader.arities, constants=frozenset(constants), standpoints=frozenset(standpoints)
        )
        signature = infer_signature(formula, declared)
    except ValueError as exc:
        raise ParseError(_whole(text), f"signature conflict: {exc}") from None
    logger.debug("parsed formula with %d predicates", len(signature.predicates))
    return FormulaDocument(formula=formula, signature=signature, rigid=frozenset(rigid))


def _print_term(t: Var | Const) -> str:
    return f"#{t.name}" if isinstance(t, Const) else t.name


def print_formula(f: Formula) -> str:
    """Canonical single-line rendering using only core forms."""
    match f:
        case Top():
            return "true"
        case Atom(pred=pred, terms=terms):
            return f"({' '.join([pred, *map(_print_term, terms)])})"
        case Eq(left=left, right=right):
            return f"(= {_print_term(left)} {_print_term(right)})"
        case Not(body=body):
            return f"(not {print_formula(body)})"
        case And(left=left, right=right):
            return f"(and {print_formula(left)} {print_formula(right)})"
        case CountExists(comparator=cmp, count=n, var=var, body=body):
            return f"(exists{cmp}{n} {var} {print_formula(body)})"
        case Dia(standpoint=e, body=body):
            return f"(dia {_print_standpoint(e)} {print_formula(body)})"
    raise TypeError(f"Unknown formula node {f!r}")


def print_document(doc: FormulaDocument) -> str:
    """Declarations for the whole signature followed by the formula."""
    sig = doc.signature
    lines = [f"(declare-pred {p} {a})" for p, a in sorted(sig.predicates.items())]
    if sig.constants:
        lines.append(f"(declare-const {' '.join('#' + c for c in sorted(sig.constants))})")
    if sig.standpoints - {STAR}:
        lines.append(f"(declare-standpoint {' '.join(sorted(sig.standpoints - {STAR}))})")
    if doc.rigid:
        lines.append(f"(declare-rigid {' '.join(sorted(doc.rigid))})")
    lines.append(print_formula(doc.formula))
    return "\n".join(lines) + "\n"


def document_for(f: Formula, rigid: Iterable[str] = ()) -> FormulaDocument:
    """Wrap a formula with its inferred signature."""
    return FormulaDocument(formula=f, signature=infer_signature(f), rigid=frozenset(rigid))


# ============================================================================
# Structures and Interpretations
# ============================================================================

class _StructureReader(_Reader):
    def __init__(self) -> None:
        self.arities: dict[str, int] = {}
        self.domain: list[str] = []
        self.worlds: list[str] = []

    def element(self, node: SNode) -> str:
        name = self.symbol(node, ID_RE, "an element")
        if name not in self.domain:
            self.fail(node, f"unknown element '{name}'")
        return name

    def world(self, node: SNode) -> str:
        name = self.symbol(node, ID_RE, "a world")
        if name not in self.worlds:
            self.fail(node, f"unknown world '{name}'")
        return name

    def note_arity(self, node: SNode, pred: str, arity: int) -> None:
        known = self.arities.setdefault(pred, arity)
        if known != arity:
            self.fail(node, f"arity conflict for predicate '{pred}': {known} vs {arity}")

    def fact(self, node: SNode) -> tuple[str, tuple[str, ...]]:
        if isinstance(node, SAtom):
            pred = self.symbol(node, PRED_RE, "a fact")
            self.note_arity(node, pred, 0)
            return pred, ()
        head = self.head(node)
        if head is None or not PRED_RE.fullmatch(head):
            self.fail(node, "expected a fact (P d...)")
        args = tuple(self.element(arg) for arg in node.items[1:])
        if len(args) > 2:
            self.fail(node, f"predicate '{head}' used with arity {len(args)}; at most 2 allowed")
        self.note_arity(node, head, len(args))
        return head, args


def _unique(reader: _Reader, node: SList, pattern: re.Pattern, what: str) -> list[str]:
    names = reader.names(node, pattern, what)
    if len(set(names)) != len(names):
        reader.fail(node, f"duplicate {what}")
    return names


def parse_structure(text: str) -> StandpointStructure:
    """Parse a `(structure ...)` form into a canonical StandpointStructure.

    Raises:
        ParseError: On unknown elements or worlds, non-rigid constants and arity conflicts
    """
    nodes = read_sexprs(text)
    reader = _StructureReader()
    if len(nodes) != 1 or reader.head(nodes[0]) != "structure":
        raise ParseError(_whole(text), "expected a single (structure ...) form")
    sections = nodes[0].items[1:]
    by_head: dict[str, list[SList]] = {}
    for section in sections:
        head = reader.head(section)
        if head not in {"domain", "worlds", "signature", "sigma", "const", "world"}:
            reader.fail(section, f"unknown structure section '{head}'")
        by_head.setdefault(head, []).append(section)
    for required in ("domain", "worlds"):
        if len(by_head.get(required, [])) != 1:
            raise ParseError(nodes[0].span, f"structure needs exactly one ({required} ...) section")
    reader.domain = _unique(reader, by_head["domain"][0], ID_RE, "element")
    reader.worlds = _unique(reader, by_head["worlds"][0], ID_RE, "world")
    if not reader.domain or not reader.worlds:
        raise ParseError(nodes[0].span, "domain and worlds must be non-empty")

    for section in by_head.get("signature", []):
        for entry in section.items[1:]:
            if not isinstance(entry, SList) or len(entry.items) != 2:
                reader.fail(entry, "expected (P arity)")
            pred = reader.symbol(entry.items[0], PRED_RE, "a predicate name")
            n = reader.integer(entry.items[1])
            if n > 2:
                reader.fail(entry.items[1], "predicate arity must be 0, 1 or 2")
            reader.note_arity(entry, pred, n)

    sigma: dict[str, frozenset[str]] = {}
    for section in by_head.get("sigma", []):
        for entry in section.items[1:]:
            if not isinstance(entry, SList) or not entry.items:
                reader.fail(entry, "expected (standpoint world...)")
            name = entry.items[0]
            symbol = STAR if isinstance(name, SAtom) and name.text == STAR else reader.symbol(name, NAME_RE, "a standpoint name")
            sigma[symbol] = sigma.get(symbol, frozenset()) | {reader.world(w) for w in entry.items[1:]}

    const_map: dict[str, str] = {}
    for section in by_head.get("const", []):
        for entry in section.items[1:]:
            if not isinstance(entry, SList) or len(entry.items) != 2:
                reader.fail(entry, "expected (#constant element)")
            name = reader.symbol(entry.items[0], CONST_RE, "a #constant")[1:]
            elem = reader.element(entry.items[1])
            if const_map.setdefault(name, elem) != elem:
                reader.fail(entry, f"non-rigid constant '#{name}'")

    facts: dict[str, list[tuple[str, tuple[str, ...]]]] = {w: [] for w in reader.worlds}
    for section in by_head.get("world", []):
        if len(section.items) < 2:
            reader.fail(section, "expected (world name fact...)")
        w = reader.world(section.items[1])
        facts[w].extend(reader.fact(f) for f in section.items[2:])

    try:
        signature = Signature(
            predicates=reader.arities,
            constants=frozenset(const_map),
            standpoints=frozenset(sigma) | {STAR},
        )
        structure = StandpointStructure(
            domain=tuple(reader.domain),
            worlds=tuple(reader.worlds),
            signature=signature,
            sigma=sigma,
            gamma={w: build_extension(fs) for w, fs in facts.items()},
            const_map=const_map,
        )
    except ValueError as exc:
        raise ParseError(nodes[0].span, f"invalid structure: {exc}") from None
    return structure.canonical()


def _print_facts(ext: WorldExtension) -> list[str]:
    facts = [f"({p})" for p in sorted(ext.nullary)]
    for p, elems in sorted(ext.unary.items()):
        facts.extend(f"({p} {d})" for d in sorted(elems))
    for p, pairs in sorted(ext.binary.items()):
        facts.extend(f"({p} {a} {b})" for a, b in sorted(pairs))
    return facts


def print_structure(M: StandpointStructure) -> str:
    """Canonical `(structure ...)` text; parse_structure reads it back to M.canonical()."""
    M = M.canonical()
    lines = [
        "(structure",
        f"  (domain {' '.join(M.domain)})",
        f"  (worlds {' '.join(M.worlds)})",
    ]
    if M.signature.predicates:
        lines.append(f"  (signature {' '.join(f'({p} {a})' for p, a in sorted(M.signature.predicates.items()))})")
    symbols = sorted(s for s in M.sigma if s != STAR)
    if symbols:
        entries = " ".join(
            f"({' '.join([s, *(w for w in M.worlds if w in M.sigma[s])])})" for s in symbols
        )
        lines.append(f"  (sigma {entries})")
    if M.const_map:
        lines.append(f"  (const {' '.join(f'(#{c} {d})' for c, d in sorted(M.const_map.items()))})")
    for w in M.worlds:
        lines.append(f"  (world {' '.join([w, *_print_facts(M.gamma[w])])})")
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def parse_interpretation(text: str) -> FOInterpretation:
    """Parse a single-world structure as a first-order interpretation."""
    M = parse_structure(text)
    if len(M.worlds) != 1:
        raise ParseError(_whole(text), "an interpretation must have exactly one world")
    return M.to_fo()


def print_interpretation(I: FOInterpretation) -> str:
    return print_structure(I.as_structure("w"))


# ============================================================================
# Rename Ledgers
# ============================================================================

_LEDGER_KINDS = {
    "standpoint": "standpoint_to_nullary",
    "nullary": "nullary_to_unary",
    "constant": "constant_to_unary",
}


def print_ledger(ledger: RenameLedger) -> str:
    lines = ["(ledger"]
    for kind, field in _LEDGER_KINDS.items():
        for old, new in sorted(getattr(ledger, field).items()):
            lines.append(f"  ({kind} {'#' + old if kind == 'constant' else old} {new})")
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def parse_ledger(text: str) -> RenameLedger:
    nodes = read_sexprs(text)
    reader = _Reader()
    if len(nodes) != 1 or reader.head(nodes[0]) != "ledger":
        raise ParseError(_whole(text), "expected a single (ledger ...) form")
    tables: dict[str, dict[str, str]] = {field: {} for field in _LEDGER_KINDS.values()}
    for entry in nodes[0].items[1:]:
        kind = reader.head(entry)
        if kind not in _LEDGER_KINDS:
            reader.fail(entry, "expected a ledger entry", sorted(_LEDGER_KINDS))
        old, new = reader.args(entry, 2)
        if kind == "constant":
            old_name = reader.symbol(old, CONST_RE, "a #constant")[1:]
        else:
            old_name = reader.symbol(old, NAME_RE if kind == "standpoint" else PRED_RE, "a name")
        tables[_LEDGER_KINDS[kind]][old_name] = reader.symbol(new, PRED_RE, "a predicate name")
    return RenameLedger(**tables)


# ============================================================================
# DL Documents
# ============================================================================

class _DLReader(_Reader):
    def __init__(self) -> None:
        # Names used where only simple roles are allowed, with the span to blame.
        self.restricted: list[tuple[frozenset[str], SourceSpan]] = []
        self.ria_spans: list[SourceSpan] = []

    def restrict(self, node: SNode, role: RoleExpr) -> None:
        self.restricted.append((role_names(role), node.span))

    def role(self, node: SNode) -> RoleExpr:
        if isinstance(node, SAtom):
            return RoleName(name=self.symbol(node, PRED_RE, "a role"))
        head = self.head(node)
        match head:
            case "inv":
                (inner,) = self.args(node, 1)
                return Inverse(role=RoleName(name=self.symbol(inner, PRED_RE, "a role name")))
            case "rnot":
                (inner,) = self.args(node, 1)
                role = RoleNot(role=self.role(inner))
            case "rand" | "ror":
                left, right = self.args(node, 2)
                build = RoleAnd if head == "rand" else RoleOr
                role = build(left=self.role(left), right=self.role(right))
            case _:
                self.fail(node, "expected a role", ["inv", "rnot", "rand", "ror"])
        self.restrict(node, role)
        return role

    def concept(self, node: SNode) -> ConceptExpr:
        if isinstance(node, SAtom):
            if node.text in ("top", "Top"):
                return TOP
            if node.text in ("bot", "Bot"):
                return BOTTOM
            return Atomic(name=self.symbol(node, PRED_RE, "a concept"))
        head = self.head(node)
        match head:
            case "nom":
                (name,) = self.args(node, 1)
                return Nominal(name=self.symbol(name, CONST_RE, "a #nominal")[1:])
            case "not":
                (body,) = self.args(node, 1)
                return NotC(body=self.concept(body))
            case "and":
                return and_c(*(self.concept(arg) for arg in self.args(node, at_least=2)))
            case "or":
                return or_c(*(self.concept(arg) for arg in self.args(node, at_least=2)))
            case "atleast" | "atmost" | "exactly":
                n, role, body = self.args(node, 3)
                count, r, c = self.integer(n), self.role(role), self.concept(body)
                if head != "atleast" or count >= 2:
                    self.restrict(node, r)
                if head == "atleast":
                    return AtLeast(count=count, role=r, body=c)
                if head == "atmost":
                    return AtMost(count=count, role=r, body=c)
                return exactly(count, r, c)
            case "exists":
                role, body = self.args(node, 2)
                return AtLeast(count=1, role=self.role(role), body=self.concept(body))
            case "forall":
                role, body = self.args(node, 2)
                return ForallC(role=self.role(role), body=self.concept(body))
            case "self":
                (role,) = self.args(node, 1)
                r = self.role(role)
                self.restrict(node, r)
                return SelfC(role=r)
            case "dia" | "box":
                e, body = self.args(node, 2)
                build = DiaC if head == "dia" else BoxC
                return build(standpoint=self.standpoint(e), body=self.concept(body))
        self.fail(node, f"unknown concept form '{head}'")

    def sentence(self, node: SNode) -> DLSentence:
        head = self.head(node)
        match head:
            case "gci":
                sub, sup = self.args(node, 2)
                return GCI(sub=self.concept(sub), sup=self.concept(sup))
            case "ria":
                chain, target = self.args(node, 2)
                self.ria_spans.append(node.span)
                if self.head(chain) == "chain":
                    roles = tuple(self.role(r) for r in self.args(chain, at_least=1))
                else:
                    roles = (self.role(chain),)
                return RIA(chain=roles, head=RoleName(name=self.symbol(target, PRED_RE, "a role name")))
            case "func":
                (role,) = self.args(node, 1)
                r = self.role(role)
                self.restrict(node, r)
                return func(r)
            case "not":
                (body,) = self.args(node, 1)
                return NotS(body=self.sentence(body))
            case "and" | "or":
                parts = [self.sentence(arg) for arg in self.args(node, at_least=2)]
                if head == "and":
                    return and_s(*parts)
                result = parts[0]
                for part in parts[1:]:
                    result = OrS(left=result, right=part)
                return result
            case "dia" | "box":
                e, body = self.args(node, 2)
                build = DiaS if head == "dia" else BoxS
                return build(standpoint=self.standpoint(e), body=self.sentence(body))
        self.fail(node, f"unknown sentence form '{head}'", ["gci", "ria", "func", "not", "and", "or", "dia", "box"])


def parse_dl(text: str, mode_override: DLMode | None = None) -> DLDocument:
    """Parse a DL document: mode and role declarations followed by sentences.

    A mode_override replaces any (declare-mode ...) header.

    Raises:
        ParseError: On syntax errors, RIAs in alcoiq mode, or non-simple roles
            in positions that need simple roles
    """
    reader = _DLReader()
    mode, simple, nonsimple, order, rigid = "sroiq", set(), set(), [], set()
    sentences: list[DLSentence] = []
    for node in read_sexprs(text):
        match reader.head(node):
            case "declare-mode":
                (value,) = reader.args(node, 1)
                if not isinstance(value, SAtom) or value.text not in ("alcoiq", "sroiq"):
                    reader.fail(value, "unknown mode", ["alcoiq", "sroiq"])
                mode = value.text
            case "declare-simple":
                simple |= set(reader.names(node, PRED_RE, "a role name"))
            case "declare-nonsimple":
                nonsimple |= set(reader.names(node, PRED_RE, "a role name"))
            case "declare-order":
                smaller, larger = reader.args(node, 2)
                order.append((reader.symbol(smaller, PRED_RE, "a role name"), reader.symbol(larger, PRED_RE, "a role name")))
            case "declare-rigid":
                rigid |= set(reader.names(node, PRED_RE, "a predicate name"))
            case _:
                sentences.append(reader.sentence(node))
    if not sentences:
        raise ParseError(_whole(text), "document contains no sentence")
    sentence = and_s(*sentences)
    mode = mode_override or mode

    if mode == "alcoiq":
        if reader.ria_spans:
            raise ParseError(reader.ria_spans[0], "role inclusions are not allowed in alcoiq mode")
        if nonsimple:
            raise ParseError(_whole(text), "non-simple roles are not allowed in alcoiq mode")
    heavy = nonsimple_roles(sentence, frozenset(nonsimple))
    if clash := sorted(heavy & simple):
        raise ParseError(_whole(text), f"role declared simple but non-simple: {', '.join(clash)}")
    for names, span in reader.restricted:
        if names & heavy:
            raise ParseError(span, "non-simple role in restricted position")
    return DLDocument(
        sentence=sentence,
        mode=mode,
        simple=frozenset(simple),
        nonsimple=frozenset(nonsimple),
        order=tuple(order),
        rigid=frozenset(rigid),
    )


def print_role(r: RoleExpr) -> str:
    match r:
        case RoleName(name=name):
            return name
        case Inverse(role=RoleName(name=name)):
            return f"(inv {name})"
        case RoleNot(role=inner):
            return f"(rnot {print_role(inner)})"
        case RoleAnd(left=left, right=right):
            return f"(rand {print_role(left)} {print_role(right)})"
        case RoleOr(left=left, right=right):
            return f"(ror {print_role(left)} {print_role(right)})"
    raise TypeError(f"Unknown role expression {r!r}")


def print_concept(c: ConceptExpr) -> str:
    match c:
        case Atomic(name=name):
            return name
        case Nominal(name=name):
            return f"(nom #{name})"
        case TopC():
            return "top"
        case NotC(body=body):
            return f"(not {print_concept(body)})"
        case AndC(left=left, right=right):
            return f"(and {print_concept(left)} {print_concept(right)})"
        case OrC(left=left, right=right):
            return f"(or {print_concept(left)} {print_concept(right)})"
        case AtLeast(count=n, role=role, body=body):
            return f"(atleast {n} {print_role(role)} {print_concept(body)})"
        case AtMost(count=n, role=role, body=body):
            return f"(atmost {n} {print_role(role)} {print_concept(body)})"
        case ForallC(role=role, body=body):
            return f"(forall {print_role(role)} {print_concept(body)})"
        case SelfC(role=role):
            return f"(self {print_role(role)})"
        case DiaC(standpoint=e, body=body):
            return f"(dia {_print_standpoint(e)} {print_concept(body)})"
        case BoxC(standpoint=e, body=body):
            return f"(box {_print_standpoint(e)} {print_concept(body)})"
    raise TypeError(f"Unknown concept expression {c!r}")


def print_sentence(s: DLSentence) -> str:
    match s:
        case GCI(sub=sub, sup=sup):
            return f"(gci {print_concept(sub)} {print_concept(sup)})"
        case RIA(chain=chain, head=head):
            return f"(ria (chain {' '.join(map(print_role, chain))}) {head.name})"
        case NotS(body=body):
            return f"(not {print_sentence(body)})"
        case AndS(left=left, right=right):
            return f"(and {print_sentence(left)} {print_sentence(right)})"
        case OrS(left=left, right=right):
            return f"(or {print_sentence(left)} {print_sentence(right)})"
        case DiaS(standpoint=e, body=body):
            return f"(dia {_print_standpoint(e)} {print_sentence(body)})"
        case BoxS(standpoint=e, body=body):
            return f"(box {_print_standpoint(e)} {print_sentence(body)})"
    raise TypeError(f"Unknown DL sentence {s!r}")


def print_dl(doc: DLDocument) -> str:
    lines = [f"(declare-mode {doc.mode})"]
    if doc.simple:
        lines.append(f"(declare-simple {' '.join(sorted(doc.simple))})")
    if doc.nonsimple:
        lines.append(f"(declare-nonsimple {' '.join(sorted(doc.nonsimple))})")
    lines.extend(f"(declare-order {a} {b})" for a, b in doc.order)
    if doc.rigid:
        lines.append(f"(declare-rigid {' '.join(sorted(doc.rigid))})")
    lines.append(print_sentence(doc.sentence))
    return "\n".join(lines) + "\n"
