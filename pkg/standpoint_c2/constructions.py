"""Model constructions behind standpoint removal.

This module defines:
- ETypePermutation and the enumeration of E-type preserving permutations
- Permutational closures
- Stacked interpretations and extraction of a structure from a stack model
- Precisification padding
- E-predicate enrichment and witness selection
"""

import itertools
import logging
from collections.abc import Iterable, Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from .config import SearchConfig
from .errors import (
    ClosureTooLarge,
    NonRigidError,
    NotAModel,
    NotAStackModel,
    NotPowerOfTwo,
    StandpointError,
)
from .semantics import (
    FOInterpretation,
    StandpointStructure,
    build_extension,
    eval,
    eval_sentence_fo,
    is_rigid,
    rename_extension,
    satisfies,
)
from .syntax import STAR, Formula, Signature, dia_sets, free_vars, fresh_name, infer_signature

logger = logging.getLogger(__name__)


# ============================================================================
# Fresh names shared by the constructions and the translation
# ============================================================================

def removal_names(taken: Iterable[str], ell: int, m: int) -> tuple[list[str], list[str], str]:
    """Fresh E-predicates _E1.., level predicates _L0.. and the chain predicate _F."""
    taken = set(taken)

    def pick(base: str) -> str:
        name = fresh_name(base, taken)
        taken.add(name)
        return name

    e_preds = [pick(f"_E{i}") for i in range(1, ell + 1)]
    levels = [pick(f"_L{j}") for j in range(m)]
    return e_preds, levels, pick("_F")


# ============================================================================
# Permutations and Closures
# ============================================================================

class ETypePermutation(BaseModel):
    """A bijection on the domain, stored as (source, image) pairs in domain order."""
    model_config = ConfigDict(frozen=True)

    pairs: tuple[tuple[str, str], ...]

    @model_validator(mode="after")
    def validate_bijection(self) -> "ETypePermutation":
        sources = [a for a, _ in self.pairs]
        images = [b for _, b in self.pairs]
        if len(set(sources)) != len(sources) or set(sources) != set(images):
            raise ValueError("ETypePermutation must be a bijection on its elements")
        return self

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    def apply(self, d: str) -> str:
        return self.mapping[d]

    def inverse(self) -> "ETypePermutation":
        back = {b: a for a, b in self.pairs}
        return ETypePermutation(pairs=tuple((a, back[a]) for a, _ in self.pairs))

    def compose(self, other: "ETypePermutation") -> "ETypePermutation":
        """self after other."""
        mine, theirs = self.mapping, other.mapping
        return ETypePermutation(pairs=tuple((a, mine[theirs[a]]) for a, _ in other.pairs))


def e_type(M: StandpointStructure, e_preds: Sequence[str], d: str) -> frozenset[str]:
    ext = M.gamma[M.worlds[0]]
    return frozenset(p for p in e_preds if d in ext.unary.get(p, frozenset()))


def e_type_permutations(M: StandpointStructure, e_preds: Sequence[str]) -> list[ETypePermutation]:
    """All domain permutations that preserve membership in every E-predicate.

    Enumerated as the product of the symmetric groups of the realized E-types;
    the identity comes first.

    Raises:
        NonRigidError: If some E-predicate varies across precisifications
    """
    for p in e_preds:
        if not is_rigid(M, p):
            raise NonRigidError(f"non-rigid E-predicate '{p}'")
    groups: dict[frozenset[str], list[str]] = {}
    for d in M.domain:
        groups.setdefault(e_type(M, e_preds, d), []).append(d)
    result = []
    for choice in itertools.product(*(itertools.permutations(members) for members in groups.values())):
        mapping: dict[str, str] = {}
        for members, image in zip(groups.values(), choice):
            mapping.update(zip(members, image))
        result.append(ETypePermutation(pairs=tuple((d, mapping[d]) for d in M.domain)))
    return result


def closure_world(world: str, index: int) -> str:
    """Name of the closure world pairing world with the index-th permutation."""
    return f"{world}.{index}"


def permutational_closure(
    M: StandpointStructure, e_preds: Sequence[str], config: SearchConfig | None = None
) -> StandpointStructure:
    """Multiply the worlds of M by every E-type preserving permutation.

    World (w, f) carries the extensions of w pushed forward through f and is
    named closure_world(w, k) where f is the k-th entry of e_type_permutations.

    Raises:
        ClosureTooLarge: If the domain or the resulting world set exceeds the guard
        NonRigidError: If some E-predicate is not rigid in M
    """
    config = config or SearchConfig()
    if len(M.domain) > config.closure_guard_domain:
        raise ClosureTooLarge(
            f"closure too large: domain of {len(M.domain)} exceeds {config.closure_guard_domain}"
        )
    perms = e_type_permutations(M, e_preds)
    size = len(M.worlds) * len(perms)
    if size > config.closure_guard_worlds:
        raise ClosureTooLarge(f"closure too large: {size} worlds exceeds {config.closure_guard_worlds}")
    logger.debug("permutational closure: %d worlds x %d permutations", len(M.worlds), len(perms))

    worlds = tuple(closure_world(w, k) for w in M.worlds for k in range(len(perms)))
    gamma = {
        closure_world(w, k): rename_extension(M.gamma[w], perm.mapping)
        for w in M.worlds
        for k, perm in enumerate(perms)
    }
    sigma = {
        s: frozenset(closure_world(w, k) for w in members for k in range(len(perms)))
        for s, members in M.sigma.items()
        if s != STAR
    }
    return StandpointStructure(
        domain=M.domain,
        worlds=worlds,
        signature=M.signature,
        sigma=sigma,
        gamma=gamma,
        const_map=M.const_map,
    )


# ============================================================================
# Stacked Interpretations
# ============================================================================

def _stack_names(
    signature: Signature, m: int, level_preds: Sequence[str] | None, chain_pred: str | None
) -> tuple[list[str], str]:
    if level_preds is None or chain_pred is None:
        _, levels, chain = removal_names(signature.all_names, 0, m)
        level_preds = level_preds if level_preds is not None else levels
        chain_pred = chain_pred or chain
    if len(level_preds) != m:
        raise ValueError(f"Expected {m} level predicates, got {len(level_preds)}")
    return list(level_preds), chain_pred


def layer_element(d: str, level: int) -> str:
    return f"{d}.{level}"


def stacked_interpretation(
    M: StandpointStructure,
    level_preds: Sequence[str] | None = None,
    chain_pred: str | None = None,
) -> FOInterpretation:
    """Encode the 2^m precisifications of M as F-chained, L-indexed layers.

    Element (d, i) is named layer_element(d, i); its level predicates spell i
    in binary, F links (d, i) to (d, i + 1), and layer i carries the
    extensions of the i-th world. Binary facts stay within one layer.

    Raises:
        NotPowerOfTwo: If the number of worlds is not a power of two
    """
    k = len(M.worlds)
    if k & (k - 1):
        raise NotPowerOfTwo(f"world count not a power of two: {k}")
    if M.signature.preds_of_arity(0):
        raise ValueError("Stacked interpretations need a nullary-free signature")
    m = k.bit_length() - 1
    levels, chain = _stack_names(M.signature, m, level_preds, chain_pred)

    facts: list[tuple[str, tuple[str, ...]]] = []
    for i, w in enumerate(M.worlds):
        for d in M.domain:
            facts.extend((L, (layer_element(d, i),)) for j, L in enumerate(levels) if i >> j & 1)
            if i + 1 < k:
                facts.append((chain, (layer_element(d, i), layer_element(d, i + 1))))
        ext = M.gamma[w].normalized(M.signature)
        for p, members in ext.unary.items():
            facts.extend((p, (layer_element(d, i),)) for d in members)
        for p, pairs in ext.binary.items():
            facts.extend((p, (layer_element(a, i), layer_element(b, i))) for a, b in pairs)

    predicates = {p: a for p, a in M.signature.predicates.items()}
    predicates.update({L: 1 for L in levels})
    predicates[chain] = 2
    return FOInterpretation(
        domain=tuple(layer_element(d, i) for d in M.domain for i in range(k)),
        signature=Signature(predicates=predicates),
        ext=build_extension(facts),
    )


def _chain_classes(domain: Sequence[str], pairs: Iterable[tuple[str, str]]) -> dict[str, str]:
    parent = {d: d for d in domain}

    def find(d: str) -> str:
        while parent[d] != d:
            parent[d] = parent[parent[d]]
            d = parent[d]
        return d

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    return {d: find(d) for d in domain}


def extract_structure(
    I: FOInterpretation,
    m: int,
    level_preds: Sequence[str] | None = None,
    chain_pred: str | None = None,
) -> StandpointStructure:
    """Read a standpoint structure with 2^m worlds back out of a stack model.

    Elements are the F-chains of I, each named after its level-0 member;
    world p<i> collects the facts of level i.

    Raises:
        NotAStackModel: If I violates the stack formula or the result does not
            stack back onto I
    """
    from .removal import stack_formula

    levels = list(level_preds) if level_preds is not None else [f"_L{j}" for j in range(m)]
    chain = chain_pred or "_F"
    if len(levels) != m:
        raise ValueError(f"Expected {m} level predicates, got {len(levels)}")
    introduced = set(levels) | {chain}
    base = Signature(
        predicates={p: a for p, a in I.signature.predicates.items() if p not in introduced},
        constants=I.signature.constants,
    )
    if not eval_sentence_fo(I, stack_formula(levels, chain, base.binary_preds)):
        raise NotAStackModel("not a stack model: the stack formula does not hold")

    ext = I.ext
    level = {d: sum(1 << j for j, L in enumerate(levels) if d in ext.unary.get(L, frozenset())) for d in I.domain}
    roots = _chain_classes(I.domain, ext.binary.get(chain, frozenset()))
    names = {root: next(d for d in I.domain if roots[d] == root and level[d] == 0) for root in set(roots.values())}
    cls = {d: names[roots[d]] for d in I.domain}

    worlds = tuple(f"p{i}" for i in range(1 << m))
    facts: dict[str, list] = {w: [] for w in worlds}
    for p in base.preds_of_arity(1):
        for d in ext.unary.get(p, frozenset()):
            facts[worlds[level[d]]].append((p, (cls[d],)))
    for p in base.binary_preds:
        for a, b in ext.binary.get(p, frozenset()):
            facts[worlds[level[a]]].append((p, (cls[a], cls[b])))
    M = StandpointStructure(
        domain=tuple(d for d in I.domain if level[d] == 0),
        worlds=worlds,
        signature=base,
        gamma={w: build_extension(fs) for w, fs in facts.items()},
        const_map={c: cls[d] for c, d in I.const_map.items()},
    )

    restacked = stacked_interpretation(M, levels, chain)
    mapping = {d: layer_element(cls[d], level[d]) for d in I.domain}
    same = (
        len(set(mapping.values())) == len(I.domain) == len(restacked.domain)
        and rename_extension(I.ext.normalized(I.signature), mapping) == restacked.ext.normalized(I.signature)
    )
    if not same:
        raise NotAStackModel("not a stack model: extracted structure does not stack back onto the input")
    return M


# ============================================================================
# Padding and Witness Selection
# ============================================================================

def pad_precisifications(M: StandpointStructure, n: int) -> StandpointStructure:
    """Add copies of the first world until M has n worlds."""
    if n < len(M.worlds):
        raise ValueError(f"Cannot pad {len(M.worlds)} worlds down to {n}")
    first = M.worlds[0]
    taken = set(M.worlds)
    copies = []
    for _ in range(n - len(M.worlds)):
        name = fresh_name(f"{first}_pad", taken)
        taken.add(name)
        copies.append(name)
    return StandpointStructure(
        domain=M.domain,
        worlds=M.worlds + tuple(copies),
        signature=M.signature,
        sigma={s: ws | set(copies) if first in ws else ws for s, ws in M.sigma.items() if s != STAR},
        gamma={**M.gamma, **{c: M.gamma[first] for c in copies}},
        const_map=M.const_map,
    )


def _witness_var(g: Formula) -> str:
    (var,) = free_vars(g.body)
    return var


def enrich_with_e_predicates(
    M: StandpointStructure, f: Formula, e_preds: Sequence[str] | None = None
) -> tuple[StandpointStructure, list[str]]:
    """Install rigid E_i holding exactly of the members of the i-th free diamond."""
    _, free = dia_sets(f)
    if e_preds is None:
        e_preds, _, _ = removal_names(M.signature.all_names | infer_signature(f).all_names, len(free), 0)
    if len(e_preds) != len(free):
        raise ValueError(f"Expected {len(free)} E-predicates, got {len(e_preds)}")
    first = M.worlds[0]
    installed = {
        name: frozenset(d for d in M.domain if eval(M, first, {_witness_var(g): d}, g))
        for name, g in zip(e_preds, free)
    }
    enriched = StandpointStructure(
        domain=M.domain,
        worlds=M.worlds,
        signature=M.signature.merge(Signature(predicates={name: 1 for name in e_preds})),
        sigma=M.sigma,
        gamma={w: ext.model_copy(update={"unary": {**ext.unary, **installed}}) for w, ext in M.gamma.items()},
        const_map=M.const_map,
    )
    return enriched, list(e_preds)


def witness_selection(
    M_prime: StandpointStructure,
    f: Formula,
    e_preds: Sequence[str] | None = None,
    *,
    config: SearchConfig | None = None,
    verify: bool = True,
) -> StandpointStructure:
    """Keep few worlds of a model of f whose permutational closure still models f.

    The result is the E-enriched model restricted to: the first world when f
    has no diamonds, the least witness world of every satisfied sentential
    diamond, and for every realized E-type the least witness world of each of
    its diamonds at the least element of that type.

    Raises:
        NotAModel: If M_prime does not satisfy f
    """
    if not satisfies(M_prime, f):
        raise NotAModel("input not a model")
    dias, free = dia_sets(f)
    M, names = enrich_with_e_predicates(M_prime, f, e_preds)

    def least_world(var: str | None, d: str | None, body: Formula) -> str | None:
        assignment = {var: d} if var else {}
        return next((w for w in M.worlds if eval(M, w, assignment, body)), None)

    chosen: set[str] = set()
    if not dias:
        chosen.add(M.worlds[0])
    for g in dias:
        if not free_vars(g.body) and (w := least_world(None, None, g.body)) is not None:
            chosen.add(w)
    representatives: dict[frozenset[str], str] = {}
    for d in M.domain:
        representatives.setdefault(e_type(M, names, d), d)
    for t, d in representatives.items():
        for name, g in zip(names, free):
            if name in t and (w := least_world(_witness_var(g), d, g.body)) is not None:
                chosen.add(w)
    if not chosen:
        chosen.add(M.worlds[0])

    selected = M.restrict_worlds(chosen)
    logger.debug("witness selection kept %d of %d worlds", len(selected.worlds), len(M.worlds))
    if verify and not satisfies(permutational_closure(selected, names, config), f):
        raise StandpointError("witness selection produced a closure that does not model the sentence")
    return selected
