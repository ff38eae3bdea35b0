"""Executable semantics for standpoint C2.

This module defines:
- WorldExtension, StandpointStructure, FOInterpretation models
- A three-valued (Kleene) evaluator shared by eval, eval_fo and bounded search
- Global satisfaction, rigidity, and small-size isomorphism checks
"""

import itertools
import logging
from collections.abc import Iterable, Mapping
from typing import Protocol, TypeAlias

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ModalOperatorError, UnassignedVariableError
from .syntax import (
    STAR,
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
    iter_postorder,
)

logger = logging.getLogger(__name__)

Assignment: TypeAlias = Mapping[str, str]
Truth: TypeAlias = bool | None


# ============================================================================
# Structure Models
# ============================================================================

class WorldExtension(BaseModel):
    """Predicate extensions at one precisification; anything absent is false."""
    model_config = ConfigDict(frozen=True)

    unary: dict[str, frozenset[str]] = Field(default_factory=dict)
    binary: dict[str, frozenset[tuple[str, str]]] = Field(default_factory=dict)
    nullary: frozenset[str] = frozenset()

    def holds(self, pred: str, args: tuple[str, ...]) -> bool:
        match len(args):
            case 0:
                return pred in self.nullary
            case 1:
                return args[0] in self.unary.get(pred, frozenset())
            case _:
                return args in self.binary.get(pred, frozenset())

    def extension(self, pred: str, arity: int) -> frozenset:
        if arity == 0:
            return frozenset({()}) if pred in self.nullary else frozenset()
        if arity == 1:
            return self.unary.get(pred, frozenset())
        return self.binary.get(pred, frozenset())

    def elements(self) -> set[str]:
        found: set[str] = set()
        for ext in self.unary.values():
            found |= ext
        for pairs in self.binary.values():
            for a, b in pairs:
                found.update((a, b))
        return found

    def normalized(self, signature: Signature) -> "WorldExtension":
        """Drop empty or out-of-signature entries so equal extensions compare equal."""
        return WorldExtension(
            unary={p: e for p, e in sorted(self.unary.items()) if e and signature.predicates.get(p) == 1},
            binary={p: e for p, e in sorted(self.binary.items()) if e and signature.predicates.get(p) == 2},
            nullary=frozenset(p for p in self.nullary if signature.predicates.get(p) == 0),
        )


def build_extension(facts: Iterable[tuple[str, tuple[str, ...]]]) -> WorldExtension:
    """Collect (pred, args) facts into a WorldExtension."""
    unary: dict[str, set[str]] = {}
    binary: dict[str, set[tuple[str, str]]] = {}
    nullary: set[str] = set()
    for pred, args in facts:
        match len(args):
            case 0:
                nullary.add(pred)
            case 1:
                unary.setdefault(pred, set()).add(args[0])
            case _:
                binary.setdefault(pred, set()).add((args[0], args[1]))
    return WorldExtension(
        unary={p: frozenset(e) for p, e in unary.items()},
        binary={p: frozenset(e) for p, e in binary.items()},
        nullary=frozenset(nullary),
    )


class StandpointStructure(BaseModel):
    """Finite standpoint structure: domain, precisifications, sigma, gamma, rigid constants."""
    model_config = ConfigDict(frozen=True)

    domain: tuple[str, ...]
    worlds: tuple[str, ...]
    signature: Signature = Field(default_factory=Signature)
    sigma: dict[str, frozenset[str]] = Field(default_factory=dict)
    gamma: dict[str, WorldExtension] = Field(default_factory=dict)
    const_map: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data):
        if isinstance(data, dict):
            worlds = tuple(data.get("worlds", ()))
            sigma = dict(data.get("sigma") or {})
            sigma[STAR] = frozenset(worlds)
            data = {**data, "sigma": sigma}
            gamma = dict(data.get("gamma") or {})
            for w in worlds:
                gamma.setdefault(w, WorldExtension())
            data["gamma"] = gamma
        return data

    @model_validator(mode="after")
    def validate_structure(self) -> "StandpointStructure":
        if not self.domain:
            raise ValueError("StandpointStructure requires a non-empty domain")
        if not self.worlds:
            raise ValueError("StandpointStructure requires at least one world")
        if len(set(self.domain)) != len(self.domain) or len(set(self.worlds)) != len(self.worlds):
            raise ValueError("Domain elements and worlds must be unique")
        domain, worlds = set(self.domain), set(self.worlds)
        if set(self.gamma) != worlds:
            raise ValueError("gamma must cover exactly the declared worlds")
        for symbol, members in self.sigma.items():
            if not members <= worlds:
                raise ValueError(f"sigma({symbol}) mentions an unknown world")
        for w, ext in self.gamma.items():
            if not ext.elements() <= domain:
                raise ValueError(f"unknown element in extensions of world '{w}'")
        missing = set(self.signature.constants) - set(self.const_map)
        if missing:
            raise ValueError(f"const_map must be total; missing {sorted(missing)}")
        if not set(self.const_map.values()) <= domain:
            raise ValueError("const_map maps a constant to an unknown element")
        return self

    def members(self, symbol: str) -> frozenset[str]:
        return self.sigma.get(symbol, frozenset())

    def restrict_worlds(self, worlds: Iterable[str]) -> "StandpointStructure":
        keep = tuple(w for w in self.worlds if w in set(worlds))
        return StandpointStructure(
            domain=self.domain,
            worlds=keep,
            signature=self.signature,
            sigma={s: ws & set(keep) for s, ws in self.sigma.items()},
            gamma={w: self.gamma[w] for w in keep},
            const_map=self.const_map,
        )

    def with_signature(self, signature: Signature) -> "StandpointStructure":
        """Reduct or expansion to signature; predicates outside it are dropped."""
        return StandpointStructure(
            domain=self.domain,
            worlds=self.worlds,
            signature=signature,
            sigma={s: ws for s, ws in self.sigma.items() if s in signature.standpoints},
            gamma={w: ext.normalized(signature) for w, ext in self.gamma.items()},
            const_map={c: d for c, d in self.const_map.items() if c in signature.constants},
        )

    def canonical(self) -> "StandpointStructure":
        """Same structure with empty entries dropped and sigma total on the signature."""
        standpoints = self.signature.standpoints | set(self.sigma)
        return StandpointStructure(
            domain=self.domain,
            worlds=self.worlds,
            signature=self.signature.model_copy(update={"standpoints": frozenset(standpoints)}),
            sigma={s: self.sigma.get(s, frozenset()) for s in sorted(standpoints)},
            gamma={w: self.gamma[w].normalized(self.signature) for w in self.worlds},
            const_map=dict(sorted(self.const_map.items())),
        )

    def to_fo(self) -> "FOInterpretation":
        if len(self.worlds) != 1:
            raise ValueError("Only single-world structures convert to FO interpretations")
        return FOInterpretation(
            domain=self.domain,
            signature=self.signature,
            ext=self.gamma[self.worlds[0]],
            const_map=self.const_map,
        )


class FOInterpretation(BaseModel):
    """Plain first-order interpretation over arity <= 2 predicates."""
    model_config = ConfigDict(frozen=True)

    domain: tuple[str, ...]
    signature: Signature = Field(default_factory=Signature)
    ext: WorldExtension = Field(default_factory=WorldExtension)
    const_map: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_interpretation(self) -> "FOInterpretation":
        if not self.domain:
            raise ValueError("FOInterpretation requires a non-empty domain")
        if not self.ext.elements() <= set(self.domain):
            raise ValueError("unknown element in FOInterpretation extensions")
        if not set(self.const_map.values()) <= set(self.domain):
            raise ValueError("const_map maps a constant to an unknown element")
        return self

    def as_structure(self, world: str = "w") -> StandpointStructure:
        return StandpointStructure(
            domain=self.domain,
            worlds=(world,),
            signature=self.signature,
            gamma={world: self.ext},
            const_map=self.const_map,
        )


# ============================================================================
# Kleene Evaluator
# ============================================================================

class Valuation(Protocol):
    """What the three-valued evaluator needs from a (possibly partial) model."""

    domain: tuple[str, ...]
    worlds: tuple[str, ...]

    def atom(self, world: str, pred: str, args: tuple[str, ...]) -> Truth: ...

    def member(self, symbol: str, world: str) -> Truth: ...

    def const(self, name: str) -> str: ...


class StructureValuation:
    """Total valuation backed by a StandpointStructure."""

    def __init__(self, structure: StandpointStructure):
        self.structure = structure
        self.domain = structure.domain
        self.worlds = structure.worlds

    def atom(self, world: str, pred: str, args: tuple[str, ...]) -> Truth:
        return self.structure.gamma[world].holds(pred, args)

    def member(self, symbol: str, world: str) -> Truth:
        return world in self.structure.members(symbol)

    def const(self, name: str) -> str:
        return self.structure.const_map[name]


def _and3(a: Truth, b: Truth) -> Truth:
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or3(a: Truth, b: Truth) -> Truth:
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def _not3(a: Truth) -> Truth:
    return None if a is None else not a


def compare_count(comparator: str, n: int, definite: int, unknown: int) -> Truth:
    """Decide a counting comparison from definite and still-unknown witnesses."""
    low, high = definite, definite + unknown
    match comparator:
        case "<=":
            if high <= n:
                return True
            return False if low > n else None
        case "=":
            if low == n and unknown == 0:
                return True
            return False if low > n or high < n else None
        case _:
            if low >= n:
                return True
            return False if high < n else None


def eval_standpoint(val: Valuation, e: StandpointExpr, world: str) -> Truth:
    match e:
        case Symbol(name=name):
            return True if name == STAR else val.member(name, world)
        case Union(left=left, right=right):
            return _or3(eval_standpoint(val, left, world), eval_standpoint(val, right, world))
        case Inter(left=left, right=right):
            return _and3(eval_standpoint(val, left, world), eval_standpoint(val, right, world))
        case Diff(left=left, right=right):
            return _and3(eval_standpoint(val, left, world), _not3(eval_standpoint(val, right, world)))
    raise TypeError(f"Unknown standpoint expression {e!r}")


def _resolve(val: Valuation, v: Assignment, t: Var | Const) -> str:
    if isinstance(t, Const):
        return val.const(t.name)
    try:
        return v[t.name]
    except KeyError:
        raise UnassignedVariableError(f"unassigned variable '{t.name}'") from None


def eval3(val: Valuation, world: str, v: Assignment, f: Formula) -> Truth:
    """Kleene evaluation; returns None where the partial valuation leaves f undecided."""
    match f:
        case Top():
            return True
        case Atom(pred=pred, terms=terms):
            return val.atom(world, pred, tuple(_resolve(val, v, t) for t in terms))
        case Eq(left=left, right=right):
            return _resolve(val, v, left) == _resolve(val, v, right)
        case Not(body=body):
            return _not3(eval3(val, world, v, body))
        case And(left=left, right=right):
            first = eval3(val, world, v, left)
            if first is False:
                return False
            return _and3(first, eval3(val, world, v, right))
        case CountExists(comparator=cmp, count=n, var=var, body=body):
            definite = unknown = 0
            remaining = len(val.domain)
            for d in val.domain:
                remaining -= 1
                match eval3(val, world, {**v, var: d}, body):
                    case True:
                        definite += 1
                    case None:
                        unknown += 1
                verdict = compare_count(cmp, n, definite, unknown + remaining)
                if verdict is not None:
                    return verdict
            return compare_count(cmp, n, definite, unknown)
        case Dia(standpoint=e, body=body):
            result: Truth = False
            for w in val.worlds:
                result = _or3(result, _and3(eval_standpoint(val, e, w), eval3(val, w, v, body)))
                if result is True:
                    return True
            return result
    raise TypeError(f"Unknown formula node {f!r}")


def global_truth(val: Valuation, f: Formula) -> Truth:
    """Truth of a sentence at every world, combined with Kleene conjunction."""
    result: Truth = True
    for w in val.worlds:
        result = _and3(result, eval3(val, w, {}, f))
        if result is False:
            return False
    return result


# ============================================================================
# Public Evaluation
# ============================================================================

def _check_assignment(domain: tuple[str, ...], v: Assignment) -> None:
    outside = {name: d for name, d in v.items() if d not in domain}
    if outside:
        raise ValueError(f"Assignment values outside the domain: {outside}")


def eval(M: StandpointStructure, world: str, v: Assignment, f: Formula) -> bool:
    """Satisfaction of f at world under assignment v.

    Raises:
        UnassignedVariableError: If a free variable of f has no value in v
    """
    if world not in M.worlds:
        raise ValueError(f"Unknown world '{world}'")
    _check_assignment(M.domain, v)
    return bool(eval3(StructureValuation(M), world, v, f))


def satisfies(M: StandpointStructure, f: Formula) -> bool:
    """M models the sentence f: f holds at every precisification."""
    return bool(global_truth(StructureValuation(M), f))


def ensure_modal_free(f: Formula) -> None:
    if any(isinstance(g, Dia) for g in iter_postorder(f)):
        raise ModalOperatorError("modal operator in plain formula")


def eval_fo(I: FOInterpretation, v: Assignment, f: Formula) -> bool:
    """Standard first-order satisfaction.

    Raises:
        ModalOperatorError: If f contains a standpoint modality
    """
    ensure_modal_free(f)
    _check_assignment(I.domain, v)
    M = I.as_structure()
    return bool(eval3(StructureValuation(M), M.worlds[0], v, f))


def eval_sentence_fo(I: FOInterpretation, f: Formula) -> bool:
    return eval_fo(I, {}, f)


def is_rigid(M: StandpointStructure, pred: str) -> bool:
    arity = M.signature.predicates.get(pred, 1)
    first = M.gamma[M.worlds[0]].extension(pred, arity)
    return all(M.gamma[w].extension(pred, arity) == first for w in M.worlds[1:])


# ============================================================================
# Isomorphism (small sizes only)
# ============================================================================

def rename_extension(ext: WorldExtension, rename: Mapping[str, str]) -> WorldExtension:
    return WorldExtension(
        unary={p: frozenset(rename[d] for d in e) for p, e in ext.unary.items() if e},
        binary={p: frozenset((rename[a], rename[b]) for a, b in e) for p, e in ext.binary.items() if e},
        nullary=ext.nullary,
    )


def _profile(exts: list[WorldExtension], d: str) -> tuple:
    return tuple(tuple(sorted(p for p, e in ext.unary.items() if d in e)) for ext in exts)


def _element_bijections(
    m_exts: list[WorldExtension], n_exts: list[WorldExtension], m_dom: tuple[str, ...], n_dom: tuple[str, ...]
):
    """Bijections that respect unary profiles across the aligned worlds."""
    m_groups: dict[tuple, list[str]] = {}
    n_groups: dict[tuple, list[str]] = {}
    for d in m_dom:
        m_groups.setdefault(_profile(m_exts, d), []).append(d)
    for d in n_dom:
        n_groups.setdefault(_profile(n_exts, d), []).append(d)
    if {k: len(v) for k, v in m_groups.items()} != {k: len(v) for k, v in n_groups.items()}:
        return
    keys = sorted(m_groups)
    for choice in itertools.product(*(itertools.permutations(n_groups[k]) for k in keys)):
        mapping: dict[str, str] = {}
        for k, image in zip(keys, choice):
            mapping.update(zip(m_groups[k], image))
        yield mapping


def find_isomorphism(
    M: StandpointStructure, N: StandpointStructure
) -> tuple[dict[str, str], dict[str, str]] | None:
    """Element and world bijections mapping M onto N, or None."""
    if len(M.domain) != len(N.domain) or len(M.worlds) != len(N.worlds):
        return None
    if set(M.signature.predicates) != set(N.signature.predicates):
        return None
    symbols = {s for s in set(M.sigma) | set(N.sigma) if s != STAR}
    m_exts = {w: M.gamma[w].normalized(M.signature) for w in M.worlds}
    n_exts = {w: N.gamma[w].normalized(N.signature) for w in N.worlds}
    for world_perm in itertools.permutations(N.worlds):
        wmap = dict(zip(M.worlds, world_perm))
        if any({wmap[w] for w in M.members(s)} != set(N.members(s)) for s in symbols):
            continue
        if any(m_exts[w].nullary != n_exts[wmap[w]].nullary for w in M.worlds):
            continue
        aligned_m = [m_exts[w] for w in M.worlds]
        aligned_n = [n_exts[wmap[w]] for w in M.worlds]
        for emap in _element_bijections(aligned_m, aligned_n, M.domain, N.domain):
            if any(emap[d] != N.const_map.get(c) for c, d in M.const_map.items()):
                continue
            if all(rename_extension(a, emap) == b for a, b in zip(aligned_m, aligned_n)):
                return emap, wmap
    return None


def structures_isomorphic(M: StandpointStructure, N: StandpointStructure) -> bool:
    return find_isomorphism(M, N) is not None


def interpretations_isomorphic(I: FOInterpretation, J: FOInterpretation) -> bool:
    return structures_isomorphic(I.as_structure(), J.as_structure())
