"""The property suites behind `spc verify`.

Each suite draws its inputs from a seeded corpus up front, then checks the
cases in parallel. A case that cannot finish within the search budget is
reported as skipped, never as passed.
"""

import itertools
import logging
import random
from collections.abc import Iterable, Sequence
from functools import partial

from .config import SearchConfig
from .constructions import (
    closure_world,
    e_type_permutations,
    extract_structure,
    permutational_closure,
    removal_names,
    stacked_interpretation,
    witness_selection,
)
from .core import VerifyContext
from .corpus import (
    DEFAULT_VOCABULARY,
    DLVocabulary,
    Vocabulary,
    dl_corpus,
    hand_written_sentences,
    random_corpus,
    random_concept,
    random_dl_sentence,
    random_formula,
    random_structure,
    sentence_corpus,
)
from .dl import (
    ConceptExpr,
    DLDocument,
    ctrans,
    dl_satisfies,
    dl_signature,
    dl_to_fosl,
    eval_dl,
    rias,
)
from .dl_normalize import (
    Separation,
    close_roles,
    dl_pipeline,
    extend_compiled_model,
    extend_separation_model,
    is_nnf,
    nnf,
)
from .errors import SearchBudgetExceeded, StandpointError
from .frugalizer import frugal_size_bound, frugalize, lift_model, restore_model
from .reductions import CURATED_CASES, ReductionCase, parse_cases, run_case
from .removal import (
    build_rigidity_formula,
    compute_params,
    removal_parts,
    removal_size_bound,
    remove_standpoints,
    stack_formula,
    standpoint_witness,
    translate_tr,
    translation_witness,
)
from .report import CaseResult
from .search import bounded_sat, bounded_sat_fo, enumerate_structures, structure_count
from .semantics import (
    StandpointStructure,
    eval,
    eval_sentence_fo,
    interpretations_isomorphic,
    is_rigid,
    satisfies,
    structures_isomorphic,
)
from .suite_decorators import verify
from .suite_wrappers import run_cases_in_parallel
from .syntax import (
    STAR,
    TRUE,
    Formula,
    Signature,
    atom,
    conj,
    dia,
    dia_sets,
    exists,
    forall,
    fragment_report,
    free_vars,
    infer_signature,
    subformulas,
)

logger = logging.getLogger(__name__)

SEARCH_BUDGET = 200_000
GRID_LIMIT = 2**15


def _passed(name: str, note: str = "", **counts: int) -> CaseResult:
    return CaseResult(name=name, status="pass", note=note, counts=counts)


def _failed(name: str, note: str, **counts: int) -> CaseResult:
    return CaseResult(name=name, status="fail", note=note, counts=counts)


def _skipped(name: str, note: str) -> CaseResult:
    return CaseResult(name=name, status="skip", note=note)


def _coverage(structures: int, exhaustive: bool) -> dict[str, int]:
    return {"exhaustive": structures} if exhaustive else {"sampled": structures}


def _structure_slice(
    seed: int | str,
    signature: Signature,
    n: int,
    k: int,
    rigid: Sequence[str],
    grid_limit: int,
    samples: int,
) -> tuple[Iterable[StandpointStructure], bool]:
    """All structures of one (domain, worlds) slice, or a seeded sample when there are more than grid_limit."""
    if structure_count(signature, n, k, rigid) <= grid_limit:
        return enumerate_structures(signature, n, k, rigid), True
    logger.debug("slice d%d w%d exceeds the grid limit; sampling %d structures", n, k, samples)
    rng = random.Random(f"{seed}-{n}-{k}")
    return [random_structure(rng, n, k, signature, rigid=rigid) for _ in range(samples)], False


def _frugal_corpus(seed: int, n_random: int, max_dias: int | None = None) -> list[tuple[str, Formula]]:
    corpus = [(name, f) for name, f in hand_written_sentences() if fragment_report(f).is_frugal]
    corpus += random_corpus(seed, n_random, DEFAULT_VOCABULARY)
    if max_dias is not None:
        corpus = [(name, f) for name, f in corpus if len(dia_sets(f)[0]) <= max_dias]
    return corpus


# ============================================================================
# closure-invariance: closure evaluation is invariant under compensated assignments
# ============================================================================

def _check_permutation_invariance(
    name: str,
    structures: Iterable[StandpointStructure],
    formulas: list[Formula],
    e_preds: list[str],
    exhaustive: bool,
) -> CaseResult:
    checked = checks = 0
    for M in structures:
        closure = permutational_closure(M, e_preds)
        perms = e_type_permutations(M, e_preds)
        for g in formulas:
            variables = sorted(free_vars(g))
            for w, values in itertools.product(M.worlds, itertools.product(M.domain, repeat=len(variables))):
                v = dict(zip(variables, values))
                expected = eval(closure, closure_world(w, 0), v, g)
                for k, perm in enumerate(perms[1:], start=1):
                    moved = {var: perm.apply(d) for var, d in v.items()}
                    checks += 1
                    if eval(closure, closure_world(w, k), moved, g) != expected:
                        return _failed(
                            name,
                            f"structure {checked} world {w} permutation {k} disagrees on a formula of size {len(subformulas(g))}",
                        )
        checked += 1
    return _passed(name, structures=checked, checks=checks, **_coverage(checked, exhaustive))


@verify.suite(
    name="closure-invariance",
    aliases=("lemma32",),
    description="Closure evaluation is invariant under permutation-compensated assignments",
)
async def closure_invariance(
    seed: int = 0,
    n_formulas: int = 12,
    max_domain: int = 3,
    max_worlds: int = 2,
    grid_limit: int = GRID_LIMIT,
    samples: int = 2000,
) -> list[CaseResult]:
    rng = random.Random(seed)
    vocab = Vocabulary(unary=("P", "E"), binary=("R",))
    formulas = [random_formula(rng, scope, rng.randint(2, 6), vocab) for scope in (("x",), ("x", "y")) for _ in range(n_formulas // 2)]
    cases = []
    for n, k in itertools.product(range(1, max_domain + 1), range(1, max_worlds + 1)):
        structures, exhaustive = _structure_slice(seed, vocab.signature, n, k, ("E",), grid_limit, samples)
        cases.append(partial(_check_permutation_invariance, f"slice-d{n}-w{k}", structures, formulas, ["E"], exhaustive))
    return await run_cases_in_parallel(cases)


# ============================================================================
# witness-selection: witness selection keeps few worlds and its closure is still a model
# ============================================================================

def _check_witness_selection(name: str, f: Formula, bounds: tuple[int, int], config: SearchConfig) -> CaseResult:
    try:
        M = bounded_sat(f, *bounds, config=config)
    except SearchBudgetExceeded:
        return _skipped(name, "search budget exceeded")
    if M is None:
        return _passed(name, "no model within bounds", satisfiable=0)
    d = len(dia_sets(f)[0])
    limit = max(1, d * 2**d)
    try:
        selected = witness_selection(M, f, config=config)
    except StandpointError as exc:
        return _failed(name, str(exc))
    if len(selected.worlds) > limit:
        return _failed(name, f"selected {len(selected.worlds)} worlds, more than {limit}")
    return _passed(name, satisfiable=1, selected_worlds=len(selected.worlds))


@verify.suite(name="witness-selection", aliases=("thm34",), description="Witness selection output is small and its permutational closure models the sentence")
async def witness_selection_suite(seed: int = 0, n_random: int = 30, max_domain: int = 3, max_worlds: int = 3, budget: int = SEARCH_BUDGET) -> list[CaseResult]:
    config = SearchConfig(budget=budget)
    corpus = _frugal_corpus(seed, n_random, max_dias=2)
    return await run_cases_in_parallel(
        partial(_check_witness_selection, name, f, (max_domain, max_worlds), config) for name, f in corpus
    )


# ============================================================================
# stack-roundtrip: stacked interpretations satisfy the stack formula and extract back
# ============================================================================

STACK_SIGNATURE = Signature(predicates={"P": 1, "R": 2})
STACK_GRID_SIGNATURE = Signature(predicates={"P": 1})


def _check_stack_of_structure(name: str, M: StandpointStructure) -> CaseResult:
    m = len(M.worlds).bit_length() - 1
    _, levels, chain = removal_names(M.signature.all_names, 0, m)
    I = stacked_interpretation(M, levels, chain)
    if not eval_sentence_fo(I, stack_formula(levels, chain, M.signature.binary_preds)):
        return _failed(name, f"stacked interpretation with m={m} violates the stack formula")
    try:
        extracted = extract_structure(I, m, levels, chain)
    except StandpointError as exc:
        return _failed(name, str(exc))
    if not structures_isomorphic(extracted, M):
        return _failed(name, "extracted structure is not isomorphic to the original")
    return _passed(name, structures=1, layers=2**m)


def _check_stack_model(name: str, m: int, extra: Formula, max_domain: int, config: SearchConfig) -> CaseResult:
    _, levels, chain = removal_names(STACK_SIGNATURE.all_names, 0, m)
    signature = STACK_SIGNATURE.merge(Signature(predicates={**{L: 1 for L in levels}, chain: 2}))
    try:
        I = bounded_sat_fo(conj(stack_formula(levels, chain, ["R"]), extra), max_domain, signature=signature, config=config)
    except SearchBudgetExceeded:
        return _skipped(name, "search budget exceeded")
    if I is None:
        return _failed(name, f"no stack model with at most {max_domain} elements")
    try:
        extracted = extract_structure(I, m, levels, chain)
    except StandpointError as exc:
        return _failed(name, str(exc))
    if not interpretations_isomorphic(stacked_interpretation(extracted, levels, chain), I):
        return _failed(name, "restacked extraction is not isomorphic to the stack model")
    return _passed(name, stack_models=1)


def _check_stack_grid(name: str, structures: Iterable[StandpointStructure]) -> CaseResult:
    checked = 0
    for M in structures:
        result = _check_stack_of_structure(f"{name}-{checked}", M)
        if result.status != "pass":
            return _failed(name, result.note)
        checked += 1
    return _passed(name, structures=checked, exhaustive=checked)


@verify.suite(name="stack-roundtrip", description="Stacked interpretations satisfy the stack formula and extraction inverts stacking")
async def stack_roundtrip(
    seed: int = 0,
    n_structures: int = 200,
    max_domain: int = 3,
    stack_domain: int = 4,
    grid_elements: int = 8,
    budget: int = SEARCH_BUDGET,
) -> list[CaseResult]:
    rng = random.Random(seed)
    config = SearchConfig(budget=budget)
    cases = []
    for i in range(n_structures):
        M = random_structure(rng, rng.randint(1, max_domain), rng.choice((1, 2, 4)), STACK_SIGNATURE)
        cases.append(partial(_check_stack_of_structure, f"structure-{i:03d}", M))
    for m in (0, 1, 2):
        for n in range(1, grid_elements // 2**m + 1):
            structures = enumerate_structures(STACK_GRID_SIGNATURE, n, 2**m)
            cases.append(partial(_check_stack_grid, f"grid-m{m}-d{n}", structures))
    extras = {"plain": TRUE, "some-p": exists("x", atom("P", "x")), "some-r": exists("x", exists("y", atom("R", "x", "y")))}
    for m, (label, extra) in itertools.product((0, 1, 2), extras.items()):
        if 2**m > stack_domain:
            continue
        cases.append(partial(_check_stack_model, f"model-m{m}-{label}", m, extra, stack_domain, config))
    return await run_cases_in_parallel(cases)


# ============================================================================
# translation-agreement: the layer translation agrees with closure semantics; witnesses cross the translation
# ============================================================================

def _check_translation_agreement(name: str, f: Formula, structures: Iterable[StandpointStructure], exhaustive: bool) -> CaseResult:
    params = compute_params(f)
    translated = translate_tr(f, params)
    agreed = 0
    for M in structures:
        closure = permutational_closure(M, params.e_preds)
        stacked = stacked_interpretation(M, params.level_preds, params.chain_pred)
        if satisfies(closure, f) != eval_sentence_fo(stacked, translated):
            return _failed(name, f"closure and the layer translation (m={params.m}) disagree on a structure with {len(M.domain)} elements")
        agreed += 1
    return _passed(name, structures=agreed, **_coverage(agreed, exhaustive))


def _check_translation_witnesses(name: str, f: Formula, max_domain: int, config: SearchConfig) -> CaseResult:
    try:
        M = bounded_sat(f, max_domain, 2, config=config)
    except SearchBudgetExceeded:
        return _skipped(name, "search budget exceeded")
    if M is None:
        return _passed(name, "no model within bounds", satisfiable=0)
    params = compute_params(f)
    try:
        I = translation_witness(M, f, params, config)
        if not eval_sentence_fo(I, remove_standpoints(f)):
            return _failed(name, "translation witness does not model the translation")
        standpoint_witness(I, f, params, config)
    except StandpointError as exc:
        return _failed(name, str(exc))
    return _passed(name, satisfiable=1, stack_elements=len(I.domain))


def _check_removal_size(name: str, f: Formula) -> CaseResult:
    result = removal_parts(f)
    size, limit = len(subformulas(result.formula)), removal_size_bound(f, result.params)
    if size > limit:
        return _failed(name, f"translation has {size} subformulas, bound is {limit}")
    return _passed(name, size=size)


@verify.suite(
    name="translation-agreement",
    aliases=("trans-lemma39",),
    description="The layer translation agrees with the permutational closure and models cross the translation",
)
async def translation_agreement(
    seed: int = 0,
    n_random: int = 30,
    max_domain: int = 2,
    grid_limit: int = 2**12,
    samples: int = 64,
    budget: int = SEARCH_BUDGET,
) -> list[CaseResult]:
    config = SearchConfig(budget=budget)
    corpus = _frugal_corpus(seed, n_random)
    cases = []
    for name, f in corpus:
        cases.append(partial(_check_removal_size, f"{name}-size", f))
        if len(dia_sets(f)[0]) > 1:
            continue
        params = compute_params(f)
        signature = infer_signature(f).merge(Signature(predicates={e: 1 for e in params.e_preds}))
        for n in range(1, max_domain + 1):
            structures, exhaustive = _structure_slice(
                f"{seed}-{name}", signature, n, 2**params.m, params.e_preds, grid_limit, samples
            )
            cases.append(partial(_check_translation_agreement, f"{name}-agree-d{n}", f, structures, exhaustive))
        cases.append(partial(_check_translation_witnesses, f"{name}-witness", f, max_domain, config))
    return await run_cases_in_parallel(cases)


# ============================================================================
# rigidity: the rigidity sentence holds on a stack exactly when the E-predicates are rigid
# ============================================================================

def _free_diamond_sentence(ell: int) -> Formula:
    """A frugal sentence with ell free diamonds."""
    bodies = [atom("P", "x"), atom("Q", "x")][:ell]
    return forall("x", conj(*(dia(STAR, body) for body in bodies)))


def _check_rigidity(name: str, M: StandpointStructure, f: Formula) -> CaseResult:
    params = compute_params(f)
    stacked = stacked_interpretation(M, params.level_preds, params.chain_pred)
    expected = all(is_rigid(M, e) for e in params.e_preds)
    if eval_sentence_fo(stacked, build_rigidity_formula(params)) != expected:
        return _failed(name, f"rigidity sentence disagrees with is_rigid (expected {expected})")
    return _passed(name, rigid=int(expected), non_rigid=int(not expected))


@verify.suite(name="rigidity", description="The rigidity sentence characterizes rigid E-predicates on stacked interpretations")
async def rigidity(seed: int = 0, n_structures: int = 60, max_domain: int = 2) -> list[CaseResult]:
    rng = random.Random(seed)
    cases = []
    for i in range(n_structures):
        f = _free_diamond_sentence(rng.choice((1, 2)))
        params = compute_params(f)
        signature = infer_signature(f).merge(Signature(predicates={e: 1 for e in params.e_preds}))
        rigid = params.e_preds if rng.random() < 0.5 else ()
        M = random_structure(rng, rng.randint(1, max_domain), 2**params.m, signature, rigid=rigid)
        cases.append(partial(_check_rigidity, f"structure-{i:03d}", M, f))
    return await run_cases_in_parallel(cases)


# ============================================================================
# dl-agreement: direct DL semantics against the translation; normal forms preserve models
# ============================================================================

DL_SIGNATURE = Signature(
    predicates={"A": 1, "B": 1, "R": 2, "S": 2},
    constants=frozenset({"o"}),
    standpoints=frozenset({STAR, "u"}),
)


def _check_ctrans(name: str, M: StandpointStructure, concepts: list[ConceptExpr]) -> CaseResult:
    tuples = 0
    for c in concepts:
        translated = ctrans("x", c)
        for w, d in itertools.product(M.worlds, M.domain):
            tuples += 1
            if eval_dl(M, w, d, c) != eval(M, w, {"x": d}, translated):
                return _failed(name, f"eval_dl and ctrans disagree at world {w}, element {d}")
    return _passed(name, tuples=tuples)


def _check_translation_fragment(name: str, doc: DLDocument) -> CaseResult:
    report = fragment_report(dl_to_fosl(doc.sentence))
    if not (report.is_c2 and report.is_monodic):
        return _failed(name, "dl_to_fosl output leaves monodic C2")
    return _passed(name)


def _check_nnf(name: str, doc: DLDocument, structures: list[StandpointStructure]) -> CaseResult:
    normal = nnf(doc.sentence, doc.simple)
    if not is_nnf(normal):
        return _failed(name, "nnf output is not in negation normal form")
    for M in structures:
        if dl_satisfies(M, doc.sentence) != dl_satisfies(M, normal):
            return _failed(name, "nnf changed the truth value on a structure")
    return _passed(name, structures=len(structures))


def _check_separation(name: str, doc: DLDocument, structures: list[StandpointStructure]) -> CaseResult:
    normal, sep, compiled = dl_pipeline(doc)
    closing = Separation(ria_part=tuple(rias(normal)), rest=normal)
    models = 0
    for M in structures:
        closed = close_roles(M, closing)
        if not dl_satisfies(closed, normal):
            continue
        models += 1
        extended = extend_separation_model(closed, sep)
        if not dl_satisfies(extended, sep.sentence):
            return _failed(name, "extended model does not satisfy the separated sentence")
        if not dl_satisfies(extend_compiled_model(extended, compiled), compiled.sentence):
            return _failed(name, "extended model does not satisfy the compiled sentence")
        if not dl_satisfies(close_roles(extended, sep), normal):
            return _failed(name, "role closure of the separated model does not satisfy the original")
    return _passed(name, models=models)


@verify.suite(name="dl-agreement", description="eval_dl agrees with ctrans; NNF and RIA separation preserve models")
async def dl_agreement(
    seed: int = 0,
    n_structures: int = 36,
    n_concepts: int = 100,
    max_domain: int = 3,
    max_worlds: int = 2,
    depth: int = 3,
) -> list[CaseResult]:
    rng = random.Random(seed)
    vocab = DLVocabulary()
    concepts = [random_concept(rng, depth, vocab) for _ in range(n_concepts)]
    cases = []
    for i in range(n_structures):
        # every (domain, worlds) size in turn
        n, k = 1 + i % max_domain, 1 + (i // max_domain) % max_worlds
        M = random_structure(rng, n, k, DL_SIGNATURE)
        cases.append(partial(_check_ctrans, f"ctrans-{i:03d}", M, concepts))
    for i in range(n_structures):
        doc = DLDocument(sentence=random_dl_sentence(rng, 2, vocab), mode="alcoiq")
        cases.append(partial(_check_translation_fragment, f"fragment-{i:03d}", doc))
    for name, doc in dl_corpus(seed):
        signature = dl_signature(doc.sentence)
        structures = [random_structure(rng, rng.randint(1, max_domain), rng.randint(1, max_worlds), signature) for _ in range(n_structures)]
        cases.append(partial(_check_nnf, f"nnf-{name}", doc, structures))
        if rias(doc.sentence):
            cases.append(partial(_check_separation, f"separation-{name}", doc, structures))
    return await run_cases_in_parallel(cases)


# ============================================================================
# frugal-equisat: frugalization preserves bounded satisfiability constructively
# ============================================================================

def _bounded_search(f: Formula, bounds: tuple[int, int], config: SearchConfig) -> tuple[bool, StandpointStructure | None]:
    """(completed, model) for a bounded search that may run out of budget."""
    try:
        return True, bounded_sat(f, *bounds, config=config)
    except SearchBudgetExceeded:
        return False, None


def _check_frugalization(name: str, f: Formula, bounds: tuple[int, int], config: SearchConfig) -> CaseResult:
    g, ledger = frugalize(f)
    report = fragment_report(g)
    if not report.is_frugal:
        return _failed(name, "frugalize output is not frugal")
    if report.size > frugal_size_bound(f):
        return _failed(name, f"frugalize output has {report.size} subformulas, bound is {frugal_size_bound(f)}")
    before_done, before = _bounded_search(f, bounds, config)
    after_done, after = _bounded_search(g, bounds, config)
    if not (before_done or after_done):
        return _skipped(name, "search budget exceeded on both sides")
    if before_done and after_done and (before is None) != (after is None):
        return _failed(name, "bounded satisfiability differs across frugalization")
    if before is not None and not satisfies(lift_model(before, ledger), g):
        return _failed(name, "lifted model does not satisfy the frugal sentence")
    if after is not None and not satisfies(restore_model(after, ledger), f):
        return _failed(name, "restored model does not satisfy the original sentence")
    return _passed(name, satisfiable=int(before is not None or after is not None), size=report.size)


@verify.suite(name="frugal-equisat", description="Frugalization preserves bounded satisfiability and models map across it")
async def frugal_equisat(seed: int = 0, n_random: int = 40, max_domain: int = 3, max_worlds: int = 3, budget: int = SEARCH_BUDGET) -> list[CaseResult]:
    config = SearchConfig(budget=budget)
    corpus = sentence_corpus(seed, n_random)
    return await run_cases_in_parallel(
        partial(_check_frugalization, name, f, (max_domain, max_worlds), config) for name, f in corpus
    )


# ============================================================================
# reductions: curated tiling cases
# ============================================================================

def _check_reduction(case: ReductionCase, config: SearchConfig) -> CaseResult:
    report = run_case(case, config)
    counts = {"gcis": report.gci_count}
    if report.passed:
        return _passed(case.name, report.note, **counts)
    if report.verdict is None:
        return _skipped(case.name, report.note)
    return _failed(case.name, f"expected {case.expected}, got {report.verdict}: {report.note}", **counts)


@verify.suite(name="reductions", description="Tiling TBoxes behave as their annotations expect within bounds")
async def reductions(seed: int = 0, cases_file: str | None = None, budget: int = SEARCH_BUDGET) -> list[CaseResult]:
    config = SearchConfig(budget=budget)
    cases = list(CURATED_CASES)
    if cases_file is not None:
        with open(cases_file, encoding="utf-8") as handle:
            cases = parse_cases(handle.read())
    return await run_cases_in_parallel(partial(_check_reduction, case, config) for case in cases)


# ============================================================================
# Context
# ============================================================================

class SuiteContext(VerifyContext):
    """Every property suite, bound for lookup by name or alias."""

    def __init__(self):
        super().__init__()
        self.closure_invariance = self._bind(closure_invariance)
        self.witness_selection = self._bind(witness_selection_suite)
        self.stack_roundtrip = self._bind(stack_roundtrip)
        self.translation_agreement = self._bind(translation_agreement)
        self.rigidity = self._bind(rigidity)
        self.dl_agreement = self._bind(dl_agreement)
        self.frugal_equisat = self._bind(frugal_equisat)
        self.reductions = self._bind(reductions)
