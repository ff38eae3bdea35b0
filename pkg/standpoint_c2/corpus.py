"""Hand-written and seeded random corpora for the suites and tests.

Every generator takes a `random.Random` so a suite run is reproducible from
its seed. Random formulas are monodic C2 sentences over a small vocabulary;
random structures and DL sentences are sized for exhaustive checking.
"""

import random
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from .dl import (
    GCI,
    RIA,
    TOP,
    AndC,
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
    RoleAnd,
    RoleExpr,
    RoleName,
    RoleNot,
    SelfC,
    and_s,
    exactly,
    func,
)
from .semantics import StandpointStructure, build_extension
from .syntax import (
    FALSE,
    STAR,
    TRUE,
    Comparator,
    Diff,
    Formula,
    Inter,
    Signature,
    StandpointExpr,
    Union,
    atom,
    box,
    conj,
    count,
    dia,
    disj,
    eq,
    exists,
    forall,
    iff,
    implies,
    neg,
    subformulas,
    sym,
)

MAX_SUBFORMULAS = 12


class Vocabulary(BaseModel):
    """Symbols a random formula or structure may use."""
    model_config = ConfigDict(frozen=True)

    unary: tuple[str, ...] = ("P", "Q")
    binary: tuple[str, ...] = ("R",)
    nullary: tuple[str, ...] = ()
    constants: tuple[str, ...] = ()
    standpoints: tuple[str, ...] = ()

    @property
    def signature(self) -> Signature:
        predicates = {p: 1 for p in self.unary} | {p: 2 for p in self.binary} | {p: 0 for p in self.nullary}
        return Signature(
            predicates=predicates,
            constants=frozenset(self.constants),
            standpoints=frozenset({STAR, *self.standpoints}),
        )


DEFAULT_VOCABULARY = Vocabulary()
RICH_VOCABULARY = Vocabulary(nullary=("N",), constants=("a",), standpoints=("s", "t"))


# ============================================================================
# Hand-written Examples
# ============================================================================

def running_example() -> Formula:
    """Exactly one thing is good everywhere; everything else is the unique best somewhere.

    The conjuncts are
    - ∃^{=1}x. □_* Good(x)
    - ∀x. (□_* Good(x) ∨ ◊_*(Best(x) ∧ ∀y. (Best(y) ↔ x = y)))
    - ◊_* ∀x. (Good(x) ∨ Best(x))
    """
    good_everywhere = box(STAR, atom("Good", "x"))
    uniquely_best = conj(atom("Best", "x"), forall("y", iff(atom("Best", "y"), eq("x", "y"))))
    return conj(
        count("=", 1, "x", good_everywhere),
        forall("x", disj(good_everywhere, dia(STAR, uniquely_best))),
        dia(STAR, forall("x", disj(atom("Good", "x"), atom("Best", "x")))),
    )


def tumour_example() -> DLDocument:
    """From the process view, anything that is tumour tissue somewhere is triggered by exactly one tumour."""
    tumour = Atomic(name="Tumour")
    gci = GCI(
        sub=DiaC(standpoint=sym("tissue"), body=tumour),
        sup=exactly(1, RoleName(name="TriggeredBy"), tumour),
    )
    return DLDocument(sentence=BoxS(standpoint=sym("process"), body=gci), mode="alcoiq")


def _p(t: str) -> Formula:
    return atom("P", t)


def _q(t: str) -> Formula:
    return atom("Q", t)


def hand_written_sentences() -> list[tuple[str, Formula]]:
    """Named sentences covering each connective, satisfiable and not."""
    return [
        ("running-example", running_example()),
        ("exists-p", exists("x", _p("x"))),
        ("p-then-possibly-q", conj(exists("x", _p("x")), forall("x", implies(_p("x"), dia(STAR, _q("x")))))),
        ("contradiction", exists("x", conj(_p("x"), neg(_p("x"))))),
        ("serial-r", forall("x", exists("y", atom("R", "x", "y")))),
        ("p-with-non-p-successors", exists("x", conj(_p("x"), forall("y", implies(atom("R", "x", "y"), neg(_p("y"))))))),
        ("sentential-diamonds", conj(dia(STAR, exists("x", _p("x"))), box(STAR, forall("x", neg(_q("x")))))),
        ("two-views", conj(exists("x", box("s", _p("x"))), exists("x", dia("t", neg(_p("x")))))),
        ("counting", conj(count("<=", 1, "x", _p("x")), count(">=", 2, "x", dia(STAR, _p("x"))))),
        ("constant-disagreement", conj(dia("s", atom("P", "#a")), dia("t", neg(atom("P", "#a"))))),
        ("nullary-flip", conj(dia(STAR, atom("N")), dia(STAR, neg(atom("N"))))),
        ("sharpening", conj(box(Inter(left=sym("s"), right=sym("t")), exists("x", _p("x"))), dia("s", TRUE))),
        ("difference", dia(Diff(left=sym("s"), right=sym("t")), forall("x", _q("x")))),
        ("union-box", implies(box(Union(left=sym("s"), right=sym("t")), exists("x", _p("x"))), exists("x", _p("x")))),
        ("empty-box", conj(box("s", FALSE), exists("x", TRUE))),
        ("exact-pair", count("=", 2, "x", _p("x"))),
        ("constant-equal", conj(eq("#a", "#b"), atom("P", "#a"), neg(atom("P", "#b")))),
    ]


# ============================================================================
# Random Formulas
# ============================================================================

def random_standpoint(rng: random.Random, vocab: Vocabulary, depth: int = 1) -> StandpointExpr:
    names = (STAR, *vocab.standpoints)
    if depth <= 0 or not vocab.standpoints or rng.random() < 0.6:
        return sym(rng.choice(names))
    left = random_standpoint(rng, vocab, depth - 1)
    right = random_standpoint(rng, vocab, depth - 1)
    return rng.choice((Union, Inter, Diff))(left=left, right=right)


def _term(rng: random.Random, scope: Sequence[str], vocab: Vocabulary) -> str:
    options = [*scope, *(f"#{c}" for c in vocab.constants)]
    return rng.choice(options)


def _leaf(rng: random.Random, scope: Sequence[str], vocab: Vocabulary) -> Formula:
    has_terms = bool(scope) or bool(vocab.constants)
    options = []
    if has_terms:
        options += ["unary"] * 4 + ["binary"] * 2 * bool(vocab.binary) + ["eq"]
    if vocab.nullary:
        options.append("nullary")
    if not options:
        return TRUE
    match rng.choice(options):
        case "unary":
            return atom(rng.choice(vocab.unary), _term(rng, scope, vocab))
        case "binary":
            return atom(rng.choice(vocab.binary), _term(rng, scope, vocab), _term(rng, scope, vocab))
        case "eq":
            return eq(_term(rng, scope, vocab), _term(rng, scope, vocab))
        case _:
            return atom(rng.choice(vocab.nullary))


def _quantified(rng: random.Random, scope: tuple[str, ...], size: int, vocab: Vocabulary) -> Formula:
    var = rng.choice(("x", "y"))
    comparator: Comparator = rng.choice((">=", ">=", "<=", "="))
    n = rng.choice((1, 1, 2)) if comparator == ">=" else rng.choice((0, 1, 1, 2))
    inner = tuple(sorted(set(scope) | {var}))
    return count(comparator, n, var, random_formula(rng, inner, size - 1, vocab))


def random_formula(
    rng: random.Random,
    scope: tuple[str, ...] = (),
    size: int = 8,
    vocab: Vocabulary = DEFAULT_VOCABULARY,
) -> Formula:
    """A monodic C2 formula whose free variables lie within scope.

    Diamond bodies keep at most one variable of the enclosing scope, so every
    modal subformula has at most one free variable.
    """
    if size <= 1:
        return _leaf(rng, scope, vocab)
    if not scope and not vocab.constants and not vocab.nullary:
        kind = rng.choice(("quant", "quant", "dia", "and"))
    else:
        kind = rng.choice(("not", "and", "and", "quant", "quant", "dia", "leaf"))
    match kind:
        case "leaf":
            return _leaf(rng, scope, vocab)
        case "not":
            return neg(random_formula(rng, scope, size - 1, vocab))
        case "and":
            split = rng.randint(1, size - 2) if size > 2 else 1
            left = random_formula(rng, scope, split, vocab)
            right = random_formula(rng, scope, max(size - 1 - split, 1), vocab)
            return conj(left, right) if rng.random() < 0.6 else disj(left, right)
        case "quant":
            return _quantified(rng, scope, size, vocab)
        case _:
            keep = (rng.choice(scope),) if scope and rng.random() < 0.7 else ()
            return dia(random_standpoint(rng, vocab), random_formula(rng, keep, size - 1, vocab))


def random_sentence(
    rng: random.Random,
    size: int = 8,
    vocab: Vocabulary = DEFAULT_VOCABULARY,
    max_subformulas: int = MAX_SUBFORMULAS,
) -> Formula:
    """A random monodic C2 sentence with at most max_subformulas subformulas."""
    while True:
        f = random_formula(rng, (), size, vocab)
        if len(subformulas(f)) <= max_subformulas:
            return f


def random_corpus(seed: int, n: int, vocab: Vocabulary = RICH_VOCABULARY) -> list[tuple[str, Formula]]:
    """n seeded random sentences named random-<seed>-<index>."""
    rng = random.Random(seed)
    return [(f"random-{seed}-{i:03d}", random_sentence(rng, rng.randint(3, 9), vocab)) for i in range(n)]


def sentence_corpus(seed: int, n_random: int = 40, vocab: Vocabulary = RICH_VOCABULARY) -> list[tuple[str, Formula]]:
    """The hand-written sentences followed by n_random seeded random ones."""
    return hand_written_sentences() + random_corpus(seed, n_random, vocab)


# ============================================================================
# Random Structures
# ============================================================================

def random_structure(
    rng: random.Random,
    domain_size: int,
    world_count: int,
    signature: Signature,
    rigid: Sequence[str] = (),
    density: float = 0.5,
) -> StandpointStructure:
    """Random structure over signature; rigid predicates share the first world's extension."""
    domain = tuple(f"d{i}" for i in range(domain_size))
    worlds = tuple(f"w{i}" for i in range(world_count))

    def facts() -> list[tuple[str, tuple[str, ...]]]:
        result = []
        for pred, arity in sorted(signature.predicates.items()):
            match arity:
                case 0:
                    candidates = [()]
                case 1:
                    candidates = [(d,) for d in domain]
                case _:
                    candidates = [(a, b) for a in domain for b in domain]
            result += [(pred, args) for args in candidates if rng.random() < density]
        return result

    shared = [fact for fact in facts() if fact[0] in rigid]
    gamma = {w: build_extension([f for f in facts() if f[0] not in rigid] + shared) for w in worlds}
    sigma = {
        s: frozenset(w for w in worlds if rng.random() < 0.5)
        for s in sorted(signature.standpoints)
        if s != STAR
    }
    return StandpointStructure(
        domain=domain,
        worlds=worlds,
        signature=signature,
        sigma=sigma,
        gamma=gamma,
        const_map={c: rng.choice(domain) for c in sorted(signature.constants)},
    )


# ============================================================================
# Random DL Sentences
# ============================================================================

class DLVocabulary(BaseModel):
    model_config = ConfigDict(frozen=True)

    concepts: tuple[str, ...] = ("A", "B")
    roles: tuple[str, ...] = ("R", "S")
    nominals: tuple[str, ...] = ("o",)
    standpoints: tuple[str, ...] = ("u",)
    role_booleans: bool = True


DEFAULT_DL_VOCABULARY = DLVocabulary()


def random_role(rng: random.Random, vocab: DLVocabulary = DEFAULT_DL_VOCABULARY) -> RoleExpr:
    r = RoleName(name=rng.choice(vocab.roles))
    roll = rng.random()
    if roll < 0.25:
        return Inverse(role=r)
    if vocab.role_booleans and roll < 0.35:
        return RoleNot(role=r)
    if vocab.role_booleans and roll < 0.42:
        return RoleAnd(left=r, right=RoleName(name=rng.choice(vocab.roles)))
    return r


def random_concept(rng: random.Random, depth: int = 3, vocab: DLVocabulary = DEFAULT_DL_VOCABULARY) -> ConceptExpr:
    """A random concept with at most depth nested constructors."""
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.1:
            return TOP
        if roll < 0.2 and vocab.nominals:
            return Nominal(name=rng.choice(vocab.nominals))
        return Atomic(name=rng.choice(vocab.concepts))
    standpoint = sym(rng.choice((STAR, *vocab.standpoints)))
    match rng.choice(("not", "and", "or", "atleast", "atmost", "forall", "self", "dia", "box")):
        case "not":
            return NotC(body=random_concept(rng, depth - 1, vocab))
        case "and":
            return AndC(left=random_concept(rng, depth - 1, vocab), right=random_concept(rng, depth - 1, vocab))
        case "or":
            return OrC(left=random_concept(rng, depth - 1, vocab), right=random_concept(rng, depth - 1, vocab))
        case "atleast":
            return AtLeast(count=rng.randint(0, 2), role=random_role(rng, vocab), body=random_concept(rng, depth - 1, vocab))
        case "atmost":
            return AtMost(count=rng.randint(0, 1), role=random_role(rng, vocab), body=random_concept(rng, depth - 1, vocab))
        case "forall":
            return ForallC(role=random_role(rng, vocab), body=random_concept(rng, depth - 1, vocab))
        case "self":
            return SelfC(role=random_role(rng, vocab))
        case "dia":
            return DiaC(standpoint=standpoint, body=random_concept(rng, depth - 1, vocab))
        case _:
            return BoxC(standpoint=standpoint, body=random_concept(rng, depth - 1, vocab))


def random_dl_sentence(rng: random.Random, depth: int = 2, vocab: DLVocabulary = DEFAULT_DL_VOCABULARY) -> DLSentence:
    """One to three GCIs, possibly negated or under a modality; no RIAs."""
    parts: list[DLSentence] = []
    for _ in range(rng.randint(1, 3)):
        gci: DLSentence = GCI(sub=random_concept(rng, depth, vocab), sup=random_concept(rng, depth, vocab))
        roll = rng.random()
        if roll < 0.15:
            gci = NotS(body=gci)
        elif roll < 0.3:
            gci = DiaS(standpoint=sym(rng.choice((STAR, *vocab.standpoints))), body=gci)
        elif roll < 0.45:
            gci = BoxS(standpoint=sym(rng.choice((STAR, *vocab.standpoints))), body=gci)
        parts.append(gci)
    return and_s(*parts)


def dl_corpus(seed: int, n_random: int = 26) -> list[tuple[str, DLDocument]]:
    """Hand-written DL documents, RIA examples included, then random ones."""
    r, s = RoleName(name="R"), RoleName(name="S")
    A = Atomic(name="A")
    some_r_a = AtLeast(count=1, role=r, body=A)
    corpus = [
        ("tumour", tumour_example()),
        ("transitive-R", DLDocument(sentence=and_s(
            RIA(chain=(r, r), head=r),
            GCI(sub=A, sup=ForallC(role=r, body=A)),
            GCI(sub=TOP, sup=some_r_a),
        ))),
        ("hierarchy", DLDocument(sentence=and_s(
            RIA(chain=(s,), head=r),
            GCI(sub=A, sup=AtLeast(count=1, role=s, body=TOP)),
            GCI(sub=TOP, sup=ForallC(role=r, body=A)),
        ))),
        ("functional-self", DLDocument(sentence=and_s(
            func(r),
            GCI(sub=A, sup=SelfC(role=r)),
        ), mode="alcoiq")),
        ("negated-tautology", DLDocument(sentence=NotS(body=GCI(sub=A, sup=TOP)), mode="alcoiq")),
    ]
    rng = random.Random(seed)
    vocab = DLVocabulary(role_booleans=False)
    corpus += [
        (f"dl-random-{seed}-{i:03d}", DLDocument(sentence=random_dl_sentence(rng, 2, vocab), mode="alcoiq"))
        for i in range(n_random)
    ]
    return corpus
