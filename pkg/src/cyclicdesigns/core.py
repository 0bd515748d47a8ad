"""Cycles over Z_v, partial differences, orbits and design validation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence


class DesignError(ValueError):
    """Malformed cycle, difference system or cycle system."""


def canonical_form(vertices: Sequence[int]) -> tuple[int, ...]:
    """Rotation/reflection normal form of a cycle given as a vertex list.

    The least vertex goes first and the orientation is chosen so that the
    second vertex is the smaller of its two neighbours.
    """
    k = len(vertices)
    j = min(range(k), key=vertices.__getitem__)
    fwd = vertices[(j + 1) % k]
    bwd = vertices[(j - 1) % k]
    if fwd <= bwd:
        return tuple(vertices[(j + t) % k] for t in range(k))
    return tuple(vertices[(j - t) % k] for t in range(k))


class Cycle:
    """A k-cycle on Z_v.

    ``vertices`` keeps the order it was given in (reduced mod v), which is the
    order partial differences are read from.  Equality and hashing use the
    canonical form, i.e. cycles compare as subgraphs.
    """

    __slots__ = ("v", "vertices", "key")

    def __init__(self, vertices: Iterable[int], v: int):
        if v < 3 or v % 2 == 0:
            raise DesignError(f"modulus must be odd and >= 3, got {v}")
        verts = tuple(int(x) % v for x in vertices)
        if len(verts) < 3:
            raise DesignError(f"a cycle needs at least 3 vertices, got {len(verts)}")
        if len(set(verts)) != len(verts):
            raise DesignError(f"repeated vertex in {verts} (mod {v})")
        self.v = v
        self.vertices = verts
        self.key = canonical_form(verts)

    @property
    def k(self) -> int:
        return len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.v == other.v and self.key == other.key

    def __lt__(self, other: "Cycle") -> bool:
        return (self.v, self.key) < (other.v, other.key)

    def __hash__(self) -> int:
        return hash((self.v, self.key))

    def __repr__(self) -> str:
        return f"Cycle({list(self.vertices)}, v={self.v})"

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        k = len(self.vertices)
        out = []
        for i in range(k):
            a, b = self.vertices[i], self.vertices[(i + 1) % k]
            out.append((a, b) if a < b else (b, a))
        return out


def residue(x: int, v: int) -> int:
    return x % v


def translate(c: Cycle, z: int) -> Cycle:
    return Cycle((x + z for x in c.vertices), c.v)


def negate(c: Cycle) -> Cycle:
    return Cycle((-x for x in c.vertices), c.v)


def cycle_type(c: Cycle) -> int:
    """Order of the translation stabilizer of ``c``."""
    v, k = c.v, c.k
    g = gcd(k, v)
    vs = set(c.vertices)
    d = 1
    # stabilizer is a subgroup of Z_v of order dividing gcd(k, v)
    for cand in range(g, 1, -1):
        if g % cand:
            continue
        z = v // cand
        if all((x + z) % v in vs for x in vs) and translate(c, z) == c:
            d = cand
            break
    return d


def oriented_differences(c: Cycle) -> tuple[int, ...]:
    """Consecutive differences ``c_{i+1} - c_i`` around the whole cycle."""
    v, verts = c.v, c.vertices
    k = len(verts)
    return tuple((verts[(i + 1) % k] - verts[i]) % v for i in range(k))


def _pm(x: int, v: int) -> tuple[int, int]:
    return x % v, (-x) % v


def partial_differences(c: Cycle, d: Optional[int] = None) -> tuple[int, ...]:
    """The multiset of partial differences, as a sorted tuple.

    For a cycle of type d only the first k/d consecutive differences count;
    the (k/d)-th of them closes the period (it is the ``c_1 - c_{k/d} + l v/d``
    term).  For type 1 this is the ordinary difference list of size 2k.
    """
    if d is None:
        d = cycle_type(c)
    diffs = oriented_differences(c)[: c.k // d]
    out = []
    for x in diffs:
        out.extend(_pm(x, c.v))
    return tuple(sorted(out))


def period_shift(c: Cycle, d: Optional[int] = None) -> int:
    """Sum of the first k/d differences; equals l*v/d with gcd(l, d) = 1."""
    if d is None:
        d = cycle_type(c)
    return sum(oriented_differences(c)[: c.k // d]) % c.v


def orbit(c: Cycle) -> list[Cycle]:
    """The v/d distinct translates of ``c``."""
    d = cycle_type(c)
    return [translate(c, z) for z in range(c.v // d)]


def orbit_representative(c: Cycle) -> tuple[int, ...]:
    """Least canonical form over the translation orbit of ``c``."""
    v = c.v
    best = None
    for x in c.vertices:
        form = canonical_form([(y - x) % v for y in c.vertices])
        if best is None or form < best:
            best = form
    return best


@dataclass(frozen=True)
class CoverageReport:
    ok: bool
    missing: tuple[int, ...] = ()
    duplicated: tuple[int, ...] = ()
    unexpected: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "coverage ok"
        parts = []
        if self.missing:
            parts.append(f"missing {list(self.missing)}")
        if self.duplicated:
            parts.append(f"duplicated {list(self.duplicated)}")
        if self.unexpected:
            parts.append(f"outside target {list(self.unexpected)}")
        return "; ".join(parts)


def difference_coverage(starters: Sequence[Cycle], v: int, target: Optional[Iterable[int]] = None) -> CoverageReport:
    """Compare the combined partial differences against ``target``.

    ``target`` defaults to Z_v minus zero.  Every target residue must occur
    exactly once and nothing else may occur.
    """
    counts = [0] * v
    for c in starters:
        if c.v != v:
            raise DesignError(f"starter {c} is not over Z_{v}")
        for x in partial_differences(c):
            counts[x] += 1
    want = [0] * v
    for x in (range(1, v) if target is None else target):
        want[x % v] = 1
    missing = tuple(x for x in range(v) if want[x] and counts[x] == 0)
    duplicated = tuple(x for x in range(v) if counts[x] > 1)
    unexpected = tuple(x for x in range(v) if not want[x] and counts[x] > 0)
    return CoverageReport(not (missing or duplicated or unexpected), missing, duplicated, unexpected)


def is_difference_system(starters: Sequence[Cycle], v: int, k: int) -> CoverageReport:
    for c in starters:
        if c.k != k:
            raise DesignError(f"starter {c} does not have length {k}")
    return difference_coverage(starters, v)


def multiples_complement(v: int, m: int) -> list[int]:
    """Z_v minus the subgroup mZ_v, i.e. the differences of K_{m x v/m}."""
    return [x for x in range(1, v) if x % m]


@dataclass(frozen=True)
class DifferenceSystem:
    v: int
    k: int
    starters: tuple[Cycle, ...]
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "starters", tuple(self.starters))
        if self.v % 2 == 0:
            raise DesignError(f"v must be odd, got {self.v}")
        if self.k > self.v:
            raise DesignError(f"k={self.k} exceeds v={self.v}")
        for c in self.starters:
            if c.v != self.v or c.k != self.k:
                raise DesignError(f"starter {c} is not a {self.k}-cycle over Z_{self.v}")
            if 0 not in c.vertices:
                raise DesignError(f"starter {c} does not contain 0")

    def coverage(self) -> CoverageReport:
        return is_difference_system(self.starters, self.v, self.k)

    def types(self) -> list[int]:
        return [cycle_type(c) for c in self.starters]

    def type_one(self) -> list[int]:
        """Indices of the type-1 starters, in starter order."""
        return [i for i, c in enumerate(self.starters) if cycle_type(c) == 1]


@dataclass(frozen=True)
class CycleSystem:
    v: int
    k: int
    cycles: frozenset

    def __post_init__(self) -> None:
        object.__setattr__(self, "cycles", frozenset(self.cycles))

    def __len__(self) -> int:
        return len(self.cycles)

    def sorted_cycles(self) -> list[Cycle]:
        return sorted(self.cycles)

    def is_cyclic(self) -> bool:
        return all(translate(c, 1) in self.cycles for c in self.cycles)


def expand(ds: DifferenceSystem) -> CycleSystem:
    report = ds.coverage()
    if not report:
        raise DesignError(f"not a difference system: {report.summary()}")
    cycles = set()
    for c in ds.starters:
        cycles.update(orbit(c))
    return CycleSystem(ds.v, ds.k, frozenset(cycles))


@dataclass(frozen=True)
class SystemVerdict:
    ok: bool
    witness: Optional[tuple[int, int]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_cycle_system(sys: CycleSystem) -> SystemVerdict:
    """Every edge of K_v in exactly one cycle, every cycle a simple k-cycle."""
    v, k = sys.v, sys.k
    seen = bytearray(v * v)
    for c in sys.cycles:
        if c.v != v or c.k != k or len(set(c.vertices)) != k:
            return SystemVerdict(False, None, f"{c} is not a simple {k}-cycle on Z_{v}")
        for a, b in c.edges():
            if seen[a * v + b]:
                return SystemVerdict(False, (a, b), f"edge {(a, b)} covered twice")
            seen[a * v + b] = 1
    for a in range(v):
        for b in range(a + 1, v):
            if not seen[a * v + b]:
                return SystemVerdict(False, (a, b), f"edge {(a, b)} not covered")
    return SystemVerdict(True)


def difference_profile(starters: Sequence[Cycle] | DifferenceSystem) -> tuple[tuple[int, ...], ...]:
    """Sorted list of per-starter partial difference multisets."""
    if isinstance(starters, DifferenceSystem):
        starters = starters.starters
    return tuple(sorted(partial_differences(c) for c in starters))
