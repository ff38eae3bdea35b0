"""Bounded satisfiability oracle.

Depth-first search over ground atoms in a fixed canonical order (standpoint
membership bits first, then element-major atoms, False before True), pruned
by three-valued evaluation of the whole sentence. The first model found is
the canonical witness; absence means "no model within bounds" only.

enumerate_structures lists a whole slice of the same space without pruning,
for checks that must hold on every small structure.
"""

import itertools
import logging
from collections.abc import Collection, Iterator

from .config import SearchConfig
from .errors import FreeVariableError, SearchBudgetExceeded
from .semantics import (
    FOInterpretation,
    StandpointStructure,
    Truth,
    build_extension,
    ensure_modal_free,
    global_truth,
)
from .syntax import STAR, Formula, Signature, free_vars, infer_signature

logger = logging.getLogger(__name__)

AtomKey = tuple[str, str, tuple[str, ...]]
MemberKey = tuple[str, str]


class _PartialModel:
    """Valuation with unknown atoms; rigid predicates read from the first world."""

    def __init__(self, domain, worlds, rigid: Collection[str], const_map: dict[str, str]):
        self.domain = domain
        self.worlds = worlds
        self.rigid = rigid
        self.const_map = const_map
        self.values: dict = {}

    def atom(self, world: str, pred: str, args: tuple[str, ...]) -> Truth:
        if pred in self.rigid:
            world = self.worlds[0]
        return self.values.get((world, pred, args))

    def member(self, symbol: str, world: str) -> Truth:
        return self.values.get((symbol, world))

    def const(self, name: str) -> str:
        return self.const_map[name]


class _Search:
    """One (domain size, world count) slice of the search space."""

    def __init__(self, f: Formula, signature: Signature, n: int, k: int, rigid: frozenset[str], counter: list[int], budget: int):
        self.f = f
        self.signature = signature
        self.domain = tuple(f"d{i}" for i in range(n))
        self.worlds = tuple(f"p{j}" for j in range(k))
        self.rigid = rigid
        self.counter = counter
        self.budget = budget
        self.keys, self.unary_blocks = self._atom_order()
        # Elements are interchangeable only when no constant names them.
        self.checks = {} if signature.constants else {
            self.keys.index(block[-1]): i for i, block in enumerate(self.unary_blocks) if block and i > 0
        }

    def _atom_order(self) -> tuple[list, list[list[AtomKey]]]:
        sig = self.signature
        world_atoms = lambda pred: self.worlds[:1] if pred in self.rigid else self.worlds  # noqa: E731
        keys: list = [(s, w) for s in sorted(sig.standpoints - {STAR}) for w in self.worlds]
        for pred in sig.preds_of_arity(0):
            keys.extend((w, pred, ()) for w in world_atoms(pred))
        blocks: list[list[AtomKey]] = []
        for i, d in enumerate(self.domain):
            block = [(w, p, (d,)) for p in sig.preds_of_arity(1) for w in world_atoms(p)]
            blocks.append(block)
            keys.extend(block)
            for j in range(i + 1):
                e = self.domain[j]
                for p in sig.preds_of_arity(2):
                    for w in world_atoms(p):
                        keys.append((w, p, (d, e)))
                        if e != d:
                            keys.append((w, p, (e, d)))
        return keys, blocks

    def _types_ordered(self, model: _PartialModel, i: int) -> bool:
        before = tuple(model.values[key] for key in self.unary_blocks[i - 1])
        after = tuple(model.values[key] for key in self.unary_blocks[i])
        return before <= after

    def run(self, const_map: dict[str, str]) -> _PartialModel | None:
        model = _PartialModel(self.domain, self.worlds, self.rigid, const_map)
        return model if self._dfs(model, 0) else None

    def _dfs(self, model: _PartialModel, index: int) -> bool:
        self.counter[0] += 1
        if self.counter[0] > self.budget:
            raise SearchBudgetExceeded(f"search space too large: budget of {self.budget} nodes exceeded")
        verdict = global_truth(model, self.f)
        if verdict is False:
            return False
        if verdict is True:
            return True
        if index == len(self.keys):
            return False
        key = self.keys[index]
        for value in (False, True):
            model.values[key] = value
            if index in self.checks and not self._types_ordered(model, self.checks[index]):
                continue
            if self._dfs(model, index + 1):
                return True
        del model.values[key]
        return False

    def to_structure(self, model: _PartialModel) -> StandpointStructure:
        facts: dict[str, list] = {w: [] for w in self.worlds}
        sigma: dict[str, set[str]] = {}
        for key, value in model.values.items():
            if len(key) == 2:
                if value:
                    sigma.setdefault(key[0], set()).add(key[1])
                continue
            world, pred, args = key
            if value:
                targets = self.worlds if pred in self.rigid else (world,)
                for w in targets:
                    facts[w].append((pred, args))
        return StandpointStructure(
            domain=self.domain,
            worlds=self.worlds,
            signature=self.signature,
            sigma={s: frozenset(ws) for s, ws in sigma.items()},
            gamma={w: build_extension(fs) for w, fs in facts.items()},
            const_map=model.const_map,
        )


def _search(
    f: Formula,
    max_domain: int,
    max_worlds: int,
    rigid: Collection[str],
    signature: Signature | None,
    config: SearchConfig | None,
) -> StandpointStructure | None:
    if max_domain < 1 or max_worlds < 1:
        raise ValueError("Search bounds must be >= 1")
    if free_vars(f):
        raise FreeVariableError(f"bounded search expects a sentence; free variables {sorted(free_vars(f))}")
    config = config or SearchConfig.from_env()
    sig = infer_signature(f, signature)
    counter = [0]
    constants = sorted(sig.constants)
    for n in range(1, max_domain + 1):
        for k in range(1, max_worlds + 1):
            search = _Search(f, sig, n, k, frozenset(rigid), counter, config.budget)
            logger.debug("bounded search |domain|=%d |worlds|=%d atoms=%d", n, k, len(search.keys))
            for images in itertools.product(search.domain, repeat=len(constants)):
                model = search.run(dict(zip(constants, images)))
                if model is not None:
                    logger.debug("model found after %d nodes", counter[0])
                    return search.to_structure(model)
    logger.debug("no model within bounds after %d nodes", counter[0])
    return None


def bounded_sat(
    f: Formula,
    max_domain: int,
    max_worlds: int,
    *,
    rigid: Collection[str] = (),
    signature: Signature | None = None,
    config: SearchConfig | None = None,
) -> StandpointStructure | None:
    """Canonical least model of f with at most max_domain elements and max_worlds worlds.

    Args:
        f: The sentence to satisfy
        max_domain: Largest domain size tried
        max_worlds: Largest number of precisifications tried
        rigid: Predicates forced to have the same extension in every world
        signature: Extra signature symbols to interpret
        config: Search limits; defaults honour SPC_BUDGET

    Returns:
        The first model in canonical order, or None if none exists within bounds

    Raises:
        SearchBudgetExceeded: If the node budget runs out before the space is exhausted
    """
    return _search(f, max_domain, max_worlds, rigid, signature, config)


def bounded_sat_fo(
    f: Formula,
    max_domain: int,
    *,
    signature: Signature | None = None,
    config: SearchConfig | None = None,
) -> FOInterpretation | None:
    """Single-interpretation counterpart of bounded_sat for modality-free sentences."""
    ensure_modal_free(f)
    found = _search(f, max_domain, 1, (), signature, config)
    return found.to_fo() if found is not None else None


def _ground_atoms(domain: tuple[str, ...], signature: Signature) -> list[tuple[str, tuple[str, ...]]]:
    return [
        (pred, args)
        for pred, arity in sorted(signature.predicates.items())
        for args in itertools.product(domain, repeat=arity)
    ]


def structure_count(signature: Signature, domain_size: int, world_count: int, rigid: Collection[str] = ()) -> int:
    """Number of structures enumerate_structures yields for one slice."""
    bits = world_count * len(signature.standpoints - {STAR})
    for pred, arity in signature.predicates.items():
        bits += domain_size**arity * (1 if pred in rigid else world_count)
    return 2**bits * domain_size ** len(signature.constants)


def enumerate_structures(
    signature: Signature,
    domain_size: int,
    world_count: int,
    rigid: Collection[str] = (),
) -> Iterator[StandpointStructure]:
    """Every structure over signature with exactly these domain and world counts.

    Covers all sigma assignments of the non-universal standpoints, all
    extensions (rigid predicates once, shared by every world) and all
    constant images. Elements are d0.. and worlds w0.., as in the corpus.

    Args:
        signature: Symbols to interpret
        domain_size: Number of elements
        world_count: Number of precisifications
        rigid: Predicates with one extension across worlds

    Yields:
        structure_count(...) structures in a fixed order
    """
    if domain_size < 1 or world_count < 1:
        raise ValueError("Structure sizes must be >= 1")
    domain = tuple(f"d{i}" for i in range(domain_size))
    worlds = tuple(f"w{j}" for j in range(world_count))
    atoms = _ground_atoms(domain, signature)
    shared_atoms = [a for a in atoms if a[0] in rigid]
    local_atoms = [a for a in atoms if a[0] not in rigid]
    standpoints = sorted(signature.standpoints - {STAR})
    constants = sorted(signature.constants)
    slots = len(shared_atoms) + world_count * (len(local_atoms) + len(standpoints))
    for bits in itertools.product((False, True), repeat=slots):
        it = iter(bits)
        shared = [a for a in shared_atoms if next(it)]
        gamma = {w: build_extension([a for a in local_atoms if next(it)] + shared) for w in worlds}
        sigma = {s: frozenset(w for w in worlds if next(it)) for s in standpoints}
        for images in itertools.product(domain, repeat=len(constants)):
            yield StandpointStructure(
                domain=domain,
                worlds=worlds,
                signature=signature,
                sigma=sigma,
                gamma=gamma,
                const_map=dict(zip(constants, images)),
            )
