"""Hardness gadgets: the exponential tiling TBox and the rigid-grid GCIs.

gen_exp_tiling_tbox encodes a 2^n x 2^n tiling problem as a standpoint ALCO
TBox with one nominal. tiling_model builds an explicit model of that TBox
from a tiling, which is how satisfiable cases are confirmed without blind
search.
"""

import itertools
import logging

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .dl import (
    GCI,
    TOP,
    AtLeast,
    Atomic,
    BoxC,
    ConceptExpr,
    DiaC,
    DLDocument,
    ForallC,
    Inverse,
    Nominal,
    NotC,
    RoleName,
    and_c,
    and_s,
    func,
    or_c,
)
from .semantics import StandpointStructure, build_extension
from .syntax import STAR_EXPR, Signature

logger = logging.getLogger(__name__)

NOMINAL = "o"
HORIZONTAL, VERTICAL, START, PICK_LINK, SYNC_LINK = "H", "V", "R", "P", "PP"


class TilingSystem(BaseModel):
    """k tiles, horizontal and vertical compatibility pairs, and an initial row."""
    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    h: frozenset[tuple[int, int]] = frozenset()
    v: frozenset[tuple[int, int]] = frozenset()
    init: tuple[int, ...] = (1,)

    @model_validator(mode="after")
    def validate_tiles(self) -> "TilingSystem":
        tiles = range(1, self.k + 1)
        for a, b in self.h | self.v:
            if a not in tiles or b not in tiles:
                raise ValueError(f"compatibility pair ({a}, {b}) outside tiles 1..{self.k}")
        if not self.init:
            raise ValueError("initial condition must contain at least one tile")
        if any(t not in tiles for t in self.init):
            raise ValueError(f"initial condition uses a tile outside 1..{self.k}")
        return self

    @property
    def n(self) -> int:
        return len(self.init)

    @property
    def side(self) -> int:
        return 2**self.n


def _tile(i: int) -> Atomic:
    return Atomic(name=f"T{i}")


def _x(i: int) -> Atomic:
    return Atomic(name=f"X{i}")


def _y(i: int) -> Atomic:
    return Atomic(name=f"Y{i}")


def _not(c: ConceptExpr) -> NotC:
    return NotC(body=c)


def _all(role: str, c: ConceptExpr) -> ForallC:
    return ForallC(role=RoleName(name=role), body=c)


def _some(role: str, c: ConceptExpr) -> AtLeast:
    return AtLeast(count=1, role=RoleName(name=role), body=c)


def _counter(bits: list[Atomic], others: list[Atomic], role: str, not_o: ConceptExpr) -> list[GCI]:
    """role-successors increment the bits and copy the other coordinate."""
    gcis = [GCI(sub=and_c(not_o, or_c(*map(_not, bits))), sup=_some(role, not_o))]
    for i, bit in enumerate(bits):
        lower = bits[:i]
        if lower:
            some_zero = or_c(*map(_not, lower))
            gcis.append(GCI(sub=and_c(bit, some_zero), sup=_all(role, bit)))
            gcis.append(GCI(sub=and_c(_not(bit), some_zero), sup=_all(role, _not(bit))))
        gcis.append(GCI(sub=and_c(bit, *lower), sup=_all(role, _not(bit))))
        gcis.append(GCI(sub=and_c(_not(bit), *lower), sup=_all(role, bit)))
    for other in others:
        gcis.append(GCI(sub=other, sup=_all(role, other)))
        gcis.append(GCI(sub=_not(other), sup=_all(role, _not(other))))
    return gcis


def exp_tiling_gcis(T: TilingSystem) -> list[GCI]:
    n, k = T.n, T.k
    o = Nominal(name=NOMINAL)
    not_o = _not(o)
    tiles = [_tile(i) for i in range(1, k + 1)]
    xs = [_x(i) for i in range(1, n + 1)]
    ys = [_y(i) for i in range(1, n + 1)]
    gcis: list[GCI] = []

    # Almost rigid: everything but o keeps its tile and coordinates.
    for c in tiles + xs + ys:
        gcis.append(GCI(sub=and_c(not_o, c), sup=BoxC(standpoint=STAR_EXPR, body=c)))

    gcis += _counter(xs, ys, HORIZONTAL, not_o)
    gcis += _counter(ys, xs, VERTICAL, not_o)

    row: ConceptExpr = _tile(T.init[-1])
    for t in reversed(T.init[:-1]):
        row = and_c(_tile(t), _all(HORIZONTAL, row))
    origin = and_c(not_o, *map(_not, xs), *map(_not, ys), row)
    gcis.append(GCI(sub=TOP, sup=_some(START, origin)))

    gcis.append(GCI(sub=not_o, sup=DiaC(standpoint=STAR_EXPR, body=_some(PICK_LINK, o))))
    for c in tiles + xs + ys:
        gcis.append(GCI(sub=c, sup=_all(PICK_LINK, c)))
    for c in xs + ys:
        gcis.append(GCI(sub=_not(c), sup=_all(PICK_LINK, _not(c))))

    gcis.append(GCI(sub=not_o, sup=_some(SYNC_LINK, o)))
    agree = [
        or_c(and_c(c, _some(SYNC_LINK, c)), and_c(_not(c), _some(SYNC_LINK, _not(c))))
        for c in xs + ys
    ]
    for tile in tiles:
        gcis.append(GCI(sub=and_c(_some(SYNC_LINK, tile), *agree), sup=tile))

    gcis.append(GCI(sub=TOP, sup=or_c(*tiles)))
    for a, b in itertools.product(range(1, k + 1), repeat=2):
        if (a, b) not in T.h:
            gcis.append(GCI(sub=_tile(a), sup=_all(HORIZONTAL, _not(_tile(b)))))
        if (a, b) not in T.v:
            gcis.append(GCI(sub=_tile(a), sup=_all(VERTICAL, _not(_tile(b)))))
    return gcis


def gen_exp_tiling_tbox(T: TilingSystem) -> DLDocument:
    """Standpoint ALCO TBox satisfiable iff T tiles the 2^n x 2^n grid from its initial row."""
    gcis = exp_tiling_gcis(T)
    logger.debug("tiling TBox for n=%d k=%d: %d GCIs", T.n, T.k, len(gcis))
    return DLDocument(sentence=and_s(*gcis), mode="alcoiq")


def gen_und_grid_gcis() -> DLDocument:
    """Grid GCIs over the rigid binary predicate E, plus func(Point)."""
    edge = RoleName(name="E")
    even, odd, pick = Atomic(name="Even"), Atomic(name="Odd"), Atomic(name="Pick")
    pointed = AtLeast(count=1, role=Inverse(role=RoleName(name="Point")), body=Nominal(name=NOMINAL))

    def step(first: Atomic, second: Atomic) -> ConceptExpr:
        return ForallC(role=edge, body=or_c(_not(first), ForallC(role=edge, body=or_c(_not(second), pointed))))

    sentence = and_s(
        GCI(sub=TOP, sup=and_c(
            AtLeast(count=1, role=edge, body=BoxC(standpoint=STAR_EXPR, body=even)),
            AtLeast(count=1, role=edge, body=BoxC(standpoint=STAR_EXPR, body=odd)),
            DiaC(standpoint=STAR_EXPR, body=pick),
        )),
        GCI(sub=pick, sup=step(even, odd)),
        GCI(sub=pick, sup=step(odd, even)),
        func(RoleName(name="Point")),
    )
    return DLDocument(sentence=sentence, mode="sroiq", rigid=frozenset({"E"}))


# ============================================================================
# Tilings and Witness Models
# ============================================================================

def find_tiling(T: TilingSystem) -> dict[tuple[int, int], int] | None:
    """A tiling of the 2^n x 2^n grid respecting T and its initial row, or None."""
    side = T.side
    cells = [(x, y) for y in range(side) for x in range(side)]
    tiling: dict[tuple[int, int], int] = {}

    def fits(x: int, y: int, t: int) -> bool:
        if y == 0 and x < T.n and T.init[x] != t:
            return False
        if x > 0 and (tiling[(x - 1, y)], t) not in T.h:
            return False
        return y == 0 or (tiling[(x, y - 1)], t) in T.v

    def place(index: int) -> bool:
        if index == len(cells):
            return True
        x, y = cells[index]
        for t in range(1, T.k + 1):
            if fits(x, y, t):
                tiling[(x, y)] = t
                if place(index + 1):
                    return True
                del tiling[(x, y)]
        return False

    return dict(tiling) if place(0) else None


def _cell(x: int, y: int) -> str:
    return f"c{x}_{y}"


def _bit_facts(name: str, prefix: str, value: int, n: int) -> list[tuple[str, tuple[str, ...]]]:
    return [(f"{prefix}{i + 1}", (name,)) for i in range(n) if value >> i & 1]


def tiling_model(T: TilingSystem) -> StandpointStructure | None:
    """Explicit model of gen_exp_tiling_tbox(T) when T has a tiling, else None.

    One element per grid cell plus o; one world per cell, in which o copies
    that cell's coordinates and tile and the cell is P-linked to o.
    """
    tiling = find_tiling(T)
    if tiling is None:
        return None
    n, side = T.n, T.side
    cells = sorted(tiling, key=lambda c: (c[1], c[0]))
    domain = (NOMINAL, *(_cell(x, y) for x, y in cells))
    worlds = tuple(f"w{x}_{y}" for x, y in cells)

    rigid: list[tuple[str, tuple[str, ...]]] = []
    for x, y in cells:
        c = _cell(x, y)
        rigid += _bit_facts(c, "X", x, n) + _bit_facts(c, "Y", y, n)
        rigid.append((f"T{tiling[(x, y)]}", (c,)))
        rigid.append((START, (c, _cell(0, 0))))
        rigid.append((SYNC_LINK, (c, NOMINAL)))
        if x + 1 < side:
            rigid.append((HORIZONTAL, (c, _cell(x + 1, y))))
        if y + 1 < side:
            rigid.append((VERTICAL, (c, _cell(x, y + 1))))
    rigid.append((START, (NOMINAL, _cell(0, 0))))

    gamma = {}
    for (x, y), w in zip(cells, worlds):
        local = _bit_facts(NOMINAL, "X", x, n) + _bit_facts(NOMINAL, "Y", y, n)
        local.append((f"T{tiling[(x, y)]}", (NOMINAL,)))
        local.append((PICK_LINK, (_cell(x, y), NOMINAL)))
        gamma[w] = build_extension(rigid + local)

    predicates = {f"T{i}": 1 for i in range(1, T.k + 1)}
    predicates |= {f"{axis}{i}": 1 for axis in "XY" for i in range(1, n + 1)}
    predicates |= {role: 2 for role in (HORIZONTAL, VERTICAL, START, PICK_LINK, SYNC_LINK)}
    return StandpointStructure(
        domain=domain,
        worlds=worlds,
        signature=Signature(predicates=predicates, constants=frozenset({NOMINAL})),
        gamma=gamma,
        const_map={NOMINAL: NOMINAL},
    )
