"""Backtracking search for cyclic difference systems.

Work is organised by difference classes ``{x, -x}`` (stored as the
representative ``min(x, v - x)``).  A starter of type d uses k/d classes whose
signed sum is ``l*v/d`` with ``gcd(l, d) = 1`` (zero for type 1).  The search
assigns class sets to starters first and only then looks for a vertex order
that realises them as a simple cycle.

The pruning is purely by symmetry, so running out of options is a proof of
nonexistence:

* the largest uncovered class lies in some starter, so it is used as anchor;
* the anchor can be taken with a plus sign (replace the starter by its
  negative, which has the same partial differences and type);
* classes inside a starter are chosen in decreasing order, since the cover
  only depends on the class set;
* one realisation per class set suffices because the rest of the search only
  sees which classes are left.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

from .core import Cycle, DesignError, DifferenceSystem, difference_coverage, partial_differences


class SearchStatus(str, Enum):
    FOUND = "found"
    NOT_FOUND = "not-found"  # budget ran out first
    EXHAUSTED = "exhausted"  # full space explored: nonexistence proof


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 2_000_000
    time_limit: float = 120.0
    symmetry: bool = True

    def __post_init__(self) -> None:
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ValueError("search budget limits must be positive")


@dataclass
class SearchResult:
    status: SearchStatus
    v: int
    k: int
    starters: list[Cycle] = field(default_factory=list)
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND

    def system(self, meta: Optional[dict] = None) -> DifferenceSystem:
        if not self.found:
            raise DesignError(f"search for ({self.v},{self.k}) ended with {self.status.value}")
        return DifferenceSystem(self.v, self.k, tuple(self.starters), dict(meta or {}))


class _OutOfBudget(Exception):
    pass


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class _Search:
    def __init__(self, v: int, k: int, types: Optional[Iterable[int]], budget: SearchBudget):
        self.v, self.k = v, k
        g = gcd(k, v)
        allowed = None if types is None else set(types)
        self.types = [d for d in _divisors(g) if allowed is None or d in allowed]
        self.shifts = {
            d: [0] if d == 1 else [l * v // d for l in range(1, d) if gcd(l, d) == 1] for d in self.types
        }
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise _OutOfBudget
        if self.nodes & 0xFFF == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def realize(self, signed: Sequence[int], d: int) -> Optional[Cycle]:
        """Order ``signed`` (anchor first) so the partial sums stay distinct."""
        v = self.v
        s = len(signed)
        mod = v // d
        total = sum(signed) % v
        first = signed[0] % v
        rest = list(signed[1:])
        used = [False] * len(rest)
        path = [0, first]
        seen = {0, first % mod}

        def rec() -> bool:
            if len(path) == s:
                return True
            tried = set()
            for j, e in enumerate(rest):
                if used[j] or e in tried:
                    continue
                tried.add(e)
                p = (path[-1] + e) % v
                if p % mod in seen:
                    continue
                used[j] = True
                path.append(p)
                seen.add(p % mod)
                if rec():
                    return True
                seen.discard(p % mod)
                path.pop()
                used[j] = False
            return False

        if s == 1:
            base = [0]
        elif rec():
            base = path[:s]
        else:
            return None
        verts = [(p + t * total) % v for t in range(d) for p in base]
        if len(set(verts)) != self.k:
            return None
        return Cycle(verts, v)

    def options(self, remaining: frozenset[int], anchor: int, second: Optional[tuple[int, int]] = None) -> Iterator[tuple[Cycle, frozenset[int]]]:
        """Starters containing ``anchor``, one per usable class set."""
        v = self.v
        signs = (1,) if self.budget.symmetry else (1, -1)
        below = sorted((c for c in remaining if c < anchor), reverse=True)
        for d in self.types:
            s = self.k // d
            if s > len(remaining):
                continue
            targets = self.shifts[d]
            seen: set[tuple[int, ...]] = set()
            for a_sign in signs:
                if s == 1:
                    if second is not None:
                        continue
                    if (a_sign * anchor) % v in targets:
                        cyc = self.realize([a_sign * anchor], d)
                        if cyc is not None:
                            yield cyc, frozenset([anchor])
                    continue
                for chosen in self._pick(below, s - 1, a_sign * anchor, [a_sign * anchor], remaining, targets, second):
                    key = tuple(sorted(abs(x) for x in chosen))
                    if key in seen:
                        continue
                    cyc = self.realize(chosen, d)
                    if cyc is None:
                        continue
                    seen.add(key)
                    yield cyc, frozenset(key)

    def _pick(self, below, need, partial, chosen, remaining, targets, second) -> Iterator[list[int]]:
        v = self.v
        self.tick()
        if need == 1:
            last = abs(chosen[-1])
            for t in targets:
                x = (t - partial) % v
                c, sign = (x, 1) if x <= v // 2 else (v - x, -1)
                if c in remaining and c < last and (second is None or len(chosen) > 1):
                    yield chosen + [sign * c]
            return
        last = abs(chosen[-1])
        for idx, c in enumerate(below):
            if c >= last:
                continue
            if len(below) - idx < need:
                break
            for sign in (1, -1):
                if second is not None and len(chosen) == 1 and (c, sign) != second:
                    continue
                chosen.append(sign * c)
                yield from self._pick(below, need - 1, partial + sign * c, chosen, remaining, targets, second)
                chosen.pop()

    def solve(self, remaining: frozenset[int], second: Optional[tuple[int, int]] = None) -> Optional[list[Cycle]]:
        if not remaining:
            return []
        anchor = max(remaining)
        for cyc, used in self.options(remaining, anchor, second):
            rest = self.solve(remaining - used)
            if rest is not None:
                return [cyc] + rest
        return None


def _classes(v: int, residues: Iterable[int]) -> frozenset[int]:
    out = set()
    for x in residues:
        x %= v
        if x == 0:
            raise ValueError("0 is not a difference")
        out.add(min(x, v - x))
    return frozenset(out)


def _run(v, k, remaining, types, budget, second=None) -> tuple[Optional[list[Cycle]], int, bool]:
    search = _Search(v, k, types, budget)
    try:
        found = search.solve(remaining, second)
    except _OutOfBudget:
        return None, search.nodes, False
    return found, search.nodes, True


def _run_job(args):
    return _run(*args)


def search_difference_system(
    v: int,
    k: int,
    *,
    target: Optional[Iterable[int]] = None,
    types: Optional[Iterable[int]] = None,
    budget: Optional[SearchBudget] = None,
    workers: int = 1,
) -> SearchResult:
    """Find starters whose partial differences cover ``target`` exactly once.

    ``target`` defaults to all of Z_v minus zero.  ``types`` restricts the
    allowed starter types (e.g. only short orbits when completing a
    multipartite system).
    """
    budget = budget or SearchBudget()
    if v % 2 == 0 or v < 3 or k < 3:
        raise ValueError(f"need odd v >= 3 and k >= 3, got v={v}, k={k}")
    residues = list(range(1, v)) if target is None else [x % v for x in target]
    if sorted(residues) != sorted({(-x) % v for x in residues}):
        raise ValueError("target must be closed under negation")
    if target is None and (v * (v - 1)) % (2 * k):
        raise ValueError(f"v(v-1) = {v * (v - 1)} is not divisible by 2k = {2 * k}")
    remaining = _classes(v, residues)
    start = time.monotonic()

    if workers <= 1 or not remaining:
        found, nodes, complete = _run(v, k, remaining, types, budget)
    else:
        found, nodes, complete = _parallel(v, k, remaining, types, budget, workers)
    elapsed = time.monotonic() - start

    if found is not None:
        report = difference_coverage(found, v, residues)
        if not report:
            raise AssertionError(f"search produced an invalid cover: {report.summary()}")
        for c in found:
            assert len(partial_differences(c)) > 0
        return SearchResult(SearchStatus.FOUND, v, k, found, nodes, elapsed)
    status = SearchStatus.EXHAUSTED if complete else SearchStatus.NOT_FOUND
    return SearchResult(status, v, k, [], nodes, elapsed)


def _parallel(v, k, remaining, types, budget, workers):
    """Split on the second class of the first starter; merge in branch order."""
    anchor = max(remaining)
    seconds = [(c, s) for c in sorted(remaining - {anchor}, reverse=True) for s in (1, -1)]
    # anchor-only starters (short orbits of a single class) form one more branch
    jobs = [(v, k, remaining, types, budget, sec) for sec in seconds]
    probe = _Search(v, k, types, budget)
    solo = [opt for opt in probe.options(remaining, anchor) if len(opt[1]) == 1]
    nodes = 0
    complete = True
    for cyc, used in solo:
        found, n, done = _run(v, k, remaining - used, types, budget)
        nodes += n
        complete &= done
        if found is not None:
            return [cyc] + found, nodes, True
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for found, n, done in pool.map(_run_job, jobs):
            nodes += n
            complete &= done
            if found is not None:
                return found, nodes, True
    return None, nodes, complete
