"""Multiplier equivalence of cyclic designs and the isomorphism-class census.

Two cyclic designs over Z_v related by ``x -> u*x + t`` (u a unit) are
isomorphic.  For the orders handled here this is also how isomorphism
is decided in practice; :func:`brute_force_isomorphic` checks that
on small orders by searching all vertex bijections.
"""

from __future__ import annotations

import struct
from dataclasses import asdict, dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

from .bounds import euler_phi
from .core import Cycle, CycleSystem, DesignError, orbit_representative, translate

BRUTE_FORCE_LIMIT = 15


def units(v: int) -> list[int]:
    return [u for u in range(1, v) if gcd(u, v) == 1]


def apply_multiplier(sys: CycleSystem, u: int) -> CycleSystem:
    if gcd(u, sys.v) != 1:
        raise ValueError(f"{u} is not a unit mod {sys.v}")
    return CycleSystem(sys.v, sys.k, frozenset(Cycle((u * x for x in c.vertices), sys.v) for c in sys.cycles))


def orbit_representatives(sys: CycleSystem) -> list[tuple[int, ...]]:
    """One normal form per translation orbit, sorted."""
    return sorted({orbit_representative(c) for c in sys.cycles})


@dataclass(frozen=True, order=True)
class AffineKey:
    v: int
    k: int
    data: tuple

    def serialize(self) -> bytes:
        """Length-prefixed big-endian integers; equal keys give equal bytes."""
        out = [struct.pack(">III", self.v, self.k, len(self.data))]
        for cyc in self.data:
            out.append(struct.pack(f">I{len(cyc)}I", len(cyc), *cyc))
        return b"".join(out)


def _scaled_reps(reps: Sequence[tuple[int, ...]], u: int, v: int) -> tuple:
    return tuple(sorted(orbit_representative(Cycle((u * x for x in r), v)) for r in reps))


def affine_key(sys: CycleSystem) -> AffineKey:
    """Least orbit-representative list over all multipliers."""
    if not sys.is_cyclic():
        raise DesignError("affine keys are only defined for cyclic (translation-closed) systems")
    reps = orbit_representatives(sys)
    best = min(_scaled_reps(reps, u, sys.v) for u in units(sys.v))
    return AffineKey(sys.v, sys.k, best)


def same_design(a: CycleSystem, b: CycleSystem) -> bool:
    return a.v == b.v and a.k == b.k and a.cycles == b.cycles


@dataclass(frozen=True)
class CorpusCensus:
    v: int
    k: int
    total: int
    distinct: int
    affine_classes: int
    phi: int
    ceiling_bound: int
    nc_lower_bound: int

    def to_dict(self) -> dict:
        return asdict(self)


def census(corpus: Iterable[CycleSystem]) -> CorpusCensus:
    """Distinct designs, multiplier classes and the ceiling bound ``ceil(|D|/phi(v))``.

    Multiplier classes stand in for isomorphism classes (checked against
    :func:`brute_force_isomorphic` for v <= 15), so the reported NC lower
    bound is the larger of the class count and the ceiling.
    """
    designs = list(corpus)
    if not designs:
        raise ValueError("empty corpus")
    v, k = designs[0].v, designs[0].k
    if any(d.v != v or d.k != k for d in designs):
        raise ValueError("corpus mixes different (v, k)")
    distinct = {d.cycles: d for d in designs}
    keys = {affine_key(d) for d in distinct.values()}
    phi = euler_phi(v)
    ceiling = -(-len(distinct) // phi)
    return CorpusCensus(v, k, len(designs), len(distinct), len(keys), phi, ceiling, max(ceiling, len(keys)))


# --------------------------------------------------------------------------
# brute force
# --------------------------------------------------------------------------

def _pair_classes(sys: CycleSystem) -> list[list[int]]:
    """``table[x][y]`` = index of the cycle containing edge {x, y}."""
    v = sys.v
    table = [[-1] * v for _ in range(v)]
    for idx, c in enumerate(sys.sorted_cycles()):
        for a, b in c.edges():
            table[a][b] = table[b][a] = idx
    return table


def brute_force_isomorphic(a: CycleSystem, b: CycleSystem, limit: int = BRUTE_FORCE_LIMIT) -> bool:
    """Search for a bijection of Z_v carrying the cycles of ``a`` onto ``b``.

    Cycles are determined by their edge sets, so it is enough to keep the
    induced map between "which cycle owns this edge" classes consistent.
    When ``b`` is cyclic, 0 may be sent to 0.
    """
    if (a.v, a.k) != (b.v, b.k):
        return False
    v = a.v
    if v > limit:
        raise ValueError(f"brute-force isomorphism is limited to v <= {limit}, got {v}")
    if len(a.cycles) != len(b.cycles):
        return False
    ta, tb = _pair_classes(a), _pair_classes(b)
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}
    image = [-1] * v
    used = [False] * v
    order: list[int] = []

    def consistent(x: int, y: int) -> Optional[list[tuple[int, int]]]:
        added = []
        for w in order:
            ca, cb = ta[w][x], tb[image[w]][y]
            fa, bb = fwd.get(ca), back.get(cb)
            if fa is None and bb is None:
                fwd[ca] = cb
                back[cb] = ca
                added.append((ca, cb))
            elif fa != cb or bb != ca:
                for p, q in added:
                    del fwd[p], back[q]
                return None
        return added

    def next_vertex() -> int:
        # most constrained: the unmapped vertex sharing a cycle class with the most mapped pairs
        best, best_score = -1, -1
        for x in range(v):
            if image[x] >= 0:
                continue
            score = sum(1 for w in order if ta[w][x] in fwd)
            if score > best_score:
                best, best_score = x, score
        return best

    def rec() -> bool:
        if len(order) == v:
            return True
        x = next_vertex()
        for y in range(v):
            if used[y]:
                continue
            added = consistent(x, y)
            if added is None:
                continue
            image[x], used[y] = y, True
            order.append(x)
            if rec():
                return True
            order.pop()
            image[x], used[y] = -1, False
            for p, q in added:
                del fwd[p], back[q]
        return False

    if b.is_cyclic():
        image[0], used[0] = 0, True
        order.append(0)
    if not rec():
        return False
    mapped = frozenset(Cycle((image[x] for x in c.vertices), v) for c in a.cycles)
    return mapped == b.cycles
