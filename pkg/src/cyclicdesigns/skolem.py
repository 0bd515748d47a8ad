"""Skolem-type sequences: pure, hooked, split (Rosa) and split-hooked.

A sequence ``(s_1, ..., s_n)`` is stored with 1-based semantics: pair ``i``
occupies positions ``s_i`` and ``s_i + i``.  Positions are tracked in an
integer bitmask throughout, so the searches below are plain bit twiddling.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional


class SkolemKind(str, Enum):
    PURE = "pure"
    HOOKED = "hooked"
    SPLIT = "split"
    SPLIT_HOOKED = "split-hooked"


class Family(str, Enum):
    SKOLEM = "skolem"
    SPLIT = "split"


_ALLOWED_RESIDUES = {
    SkolemKind.PURE: (0, 1),
    SkolemKind.HOOKED: (2, 3),
    SkolemKind.SPLIT: (0, 3),
    SkolemKind.SPLIT_HOOKED: (1, 2),
}

# exact lexicographic-least search is exponential; above this order we fall
# back to seeded restarts (still deterministic)
LEX_EXACT_LIMIT = 16


class ResidueError(ValueError):
    """Sequence kind does not match the residue class of the order."""


class NoSequenceError(ValueError):
    """No sequence of the requested family exists for this order."""


def kind_for(n: int, family: Family | str) -> SkolemKind:
    """Kind forced by ``n mod 4`` within a family."""
    family = Family(family)
    r = n % 4
    if family is Family.SKOLEM:
        return SkolemKind.PURE if r in (0, 1) else SkolemKind.HOOKED
    return SkolemKind.SPLIT if r in (0, 3) else SkolemKind.SPLIT_HOOKED


def family_of(kind: SkolemKind | str) -> Family:
    kind = SkolemKind(kind)
    if kind in (SkolemKind.PURE, SkolemKind.HOOKED):
        return Family.SKOLEM
    return Family.SPLIT


def check_kind(n: int, kind: SkolemKind | str) -> SkolemKind:
    kind = SkolemKind(kind)
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    allowed = _ALLOWED_RESIDUES[kind]
    if n % 4 not in allowed:
        raise ResidueError(
            f"{kind.value} sequences need n = {allowed[0]},{allowed[1]} (mod 4); "
            f"n={n} is {n % 4} (mod 4)"
        )
    return kind


def target_set(n: int, kind: SkolemKind | str) -> frozenset[int]:
    """The 2n positions a sequence of this order and kind must fill."""
    kind = check_kind(n, kind)
    if kind is SkolemKind.PURE:
        return frozenset(range(1, 2 * n + 1))
    if kind is SkolemKind.HOOKED:
        return frozenset(range(1, 2 * n + 2)) - {2 * n}
    if kind is SkolemKind.SPLIT:
        return frozenset(range(1, 2 * n + 3)) - {n + 1, 2 * n + 2}
    return frozenset(range(1, 2 * n + 3)) - {n + 1, 2 * n + 1}


def _mask(positions: Iterable[int]) -> int:
    m = 0
    for p in positions:
        m |= 1 << p
    return m


@dataclass(frozen=True)
class SkolemSequence:
    n: int
    kind: SkolemKind
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SkolemKind(self.kind))
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))

    def __getitem__(self, i: int) -> int:
        """1-based access: ``seq[i]`` is ``s_i``."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.values[i - 1]

    def pairs(self) -> list[tuple[int, int]]:
        return [(s, s + i) for i, s in enumerate(self.values, start=1)]

    @property
    def family(self) -> Family:
        return family_of(self.kind)

    def __str__(self) -> str:
        return " ".join(map(str, self.values))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_sequence(seq: SkolemSequence) -> Verdict:
    """Check that the 2n values ``{s_i, s_i + i}`` tile the target set."""
    n = seq.n
    if len(seq.values) != n:
        return Verdict(False, None, f"expected {n} values, got {len(seq.values)}")
    if n % 4 not in _ALLOWED_RESIDUES[seq.kind]:
        return Verdict(False, None, f"{seq.kind.value} not valid for n={n} ({n % 4} mod 4)")
    if seq.family is Family.SPLIT and n < 2:
        return Verdict(False, None, "split sequences need n > 1")
    target = target_set(n, seq.kind)
    seen: set[int] = set()
    for i, s in enumerate(seq.values, start=1):
        for x in (s + i, s):
            if x in seen:
                return Verdict(False, x, f"value {x} duplicated")
            if x not in target:
                return Verdict(False, x, f"value {x} outside target set")
            seen.add(x)
    return Verdict(True)


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------

def _count_from(i: int, free: int) -> int:
    """Count completions placing pairs i, i-1, ..., 1 into ``free``."""
    if i == 0:
        return 1
    total = 0
    c = free & (free >> i)
    while c:
        b = c & -c
        c ^= b
        total += _count_from(i - 1, free ^ b ^ (b << i))
    return total


def _collect_from(i: int, free: int, values: list[int], out: list[tuple[int, ...]]) -> None:
    if i == 0:
        out.append(tuple(values))
        return
    c = free & (free >> i)
    while c:
        b = c & -c
        c ^= b
        values[i - 1] = b.bit_length() - 1
        _collect_from(i - 1, free ^ b ^ (b << i), values, out)


def _branches(n: int, kind: SkolemKind) -> list[int]:
    """First-level work units: placements of the largest pair."""
    free = _mask(target_set(n, kind))
    c = free & (free >> n)
    out = []
    while c:
        b = c & -c
        c ^= b
        out.append(b.bit_length() - 1)
    return out


def _count_branch(args: tuple[int, SkolemKind, int]) -> int:
    n, kind, s_n = args
    free = _mask(target_set(n, kind)) ^ (1 << s_n) ^ (1 << (s_n + n))
    return _count_from(n - 1, free)


def _collect_branch(args: tuple[int, SkolemKind, int]) -> list[tuple[int, ...]]:
    n, kind, s_n = args
    free = _mask(target_set(n, kind)) ^ (1 << s_n) ^ (1 << (s_n + n))
    values = [0] * n
    values[n - 1] = s_n
    out: list[tuple[int, ...]] = []
    _collect_from(n - 1, free, values, out)
    return out


def count_sequences(n: int, kind: SkolemKind | str, workers: int = 1) -> int:
    """Exact number of sequences of order ``n`` and the given kind."""
    kind = check_kind(n, kind)
    if family_of(kind) is Family.SPLIT and n < 2:
        return 0
    jobs = [(n, kind, b) for b in _branches(n, kind)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_count_branch, jobs))
    return sum(_count_branch(j) for j in jobs)


def iter_sequences(n: int, kind: SkolemKind | str) -> Iterator[SkolemSequence]:
    """All sequences of the given order and kind, in lexicographic order."""
    kind = check_kind(n, kind)
    if family_of(kind) is Family.SPLIT and n < 2:
        return
    found: list[tuple[int, ...]] = []
    for job in [(n, kind, b) for b in _branches(n, kind)]:
        found.extend(_collect_branch(job))
    found.sort()
    for values in found:
        yield SkolemSequence(n, kind, values)


def enumerate_sequences(
    n: int,
    kind: SkolemKind | str,
    visitor: Optional[Callable[[SkolemSequence], None]] = None,
    *,
    workers: int = 1,
) -> int:
    """Visit every sequence once and return the count.

    With ``workers > 1`` the search is split by the placement of the largest
    pair; the visitor then sees sequences grouped by branch (branch order is
    fixed, so output is still deterministic) instead of in lexicographic order.
    """
    kind = check_kind(n, kind)
    if visitor is None:
        return count_sequences(n, kind, workers=workers)
    if workers <= 1:
        total = 0
        for seq in iter_sequences(n, kind):
            visitor(seq)
            total += 1
        return total
    if family_of(kind) is Family.SPLIT and n < 2:
        return 0
    jobs = [(n, kind, b) for b in _branches(n, kind)]
    total = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_collect_branch, jobs):
            for values in sorted(chunk):
                visitor(SkolemSequence(n, kind, values))
                total += 1
    return total


def count_by_pair_placement(n: int, kind: SkolemKind | str) -> int:
    """Independent count: always cover the smallest empty position.

    The leftmost free position ``a`` must be the left end of some pair
    ``{a, a + i}`` with ``i`` unused, which gives a position-driven search
    sharing nothing with the value-driven enumerator above.
    """
    kind = check_kind(n, kind)
    if family_of(kind) is Family.SPLIT and n < 2:
        return 0
    slots = sorted(target_set(n, kind))
    free = set(slots)

    def rec(unused: frozenset[int]) -> int:
        if not unused:
            return 1
        a = min(free)
        total = 0
        for i in sorted(unused):
            if a + i in free:
                free.discard(a)
                free.discard(a + i)
                total += rec(unused - {i})
                free.add(a)
                free.add(a + i)
        return total

    return rec(frozenset(range(1, n + 1)))


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------

class _Budget(Exception):
    pass


def _feasible(rem: frozenset[int], free: int) -> bool:
    """Can pairs ``rem`` be placed into ``free``?  Exact cover with MRV."""
    if not rem:
        return True
    if (sum(rem) - sum(b for b in _bits(free))) % 2:
        # sum over pairs of (2 s_i + i) equals the sum of the filled positions
        return False
    cands = {}
    best_i, best = 0, 1 << 30
    for i in rem:
        c = free & (free >> i)
        if not c:
            return False
        cands[i] = c
        pc = c.bit_count()
        if pc < best:
            best, best_i = pc, i
    best_pos = 0
    if best > 1:
        for p in _bits(free):
            b = 1 << p
            cnt = 0
            for i, c in cands.items():
                if c & b:
                    cnt += 1
                if (c << i) & b:
                    cnt += 1
            if cnt == 0:
                return False
            if cnt < best:
                best, best_pos = cnt, b
                if cnt == 1:
                    break
    if not best_pos:
        i = best_i
        c = cands[i]
        while c:
            b = c & -c
            c ^= b
            if _feasible(rem - {i}, free ^ b ^ (b << i)):
                return True
        return False
    b = best_pos
    for i, c in cands.items():
        if c & b and _feasible(rem - {i}, free ^ b ^ (b << i)):
            return True
        if (c << i) & b and _feasible(rem - {i}, free ^ b ^ (b >> i)):
            return True
    return False


def _bits(x: int) -> Iterator[int]:
    while x:
        b = x & -x
        x ^= b
        yield b.bit_length() - 1


def _lex_least(n: int, kind: SkolemKind) -> Optional[tuple[int, ...]]:
    free = _mask(target_set(n, kind))
    rem = frozenset(range(1, n + 1))
    out = []
    for i in range(1, n + 1):
        rem = rem - {i}
        c = free & (free >> i)
        while c:
            b = c & -c
            c ^= b
            nxt = free ^ b ^ (b << i)
            if _feasible(rem, nxt):
                out.append(b.bit_length() - 1)
                free = nxt
                break
        else:
            return None
    return tuple(out)


def _restart_search(n: int, kind: SkolemKind, node_limit: int = 5000, attempts: int = 10_000) -> tuple[int, ...]:
    start = _mask(target_set(n, kind))
    for attempt in range(attempts):
        rng = random.Random(f"skolem:{n}:{kind.value}:{attempt}")
        values = [0] * n
        nodes = 0

        def rec(rem: frozenset[int], free: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > node_limit:
                raise _Budget
            if not rem:
                return True
            cands = {}
            best_i, best = 0, 1 << 30
            for i in sorted(rem):
                c = free & (free >> i)
                if not c:
                    return False
                cands[i] = c
                pc = c.bit_count()
                if pc < best or (pc == best and rng.random() < 0.5):
                    best, best_i = pc, i
            opts: list[tuple[int, int]] = []
            best_pos = 0
            if best > 1:
                for p in _bits(free):
                    b = 1 << p
                    cnt = sum(1 for i, c in cands.items() if c & b) + sum(
                        1 for i, c in cands.items() if (c << i) & b
                    )
                    if cnt == 0:
                        return False
                    if cnt < best:
                        best, best_pos = cnt, b
            if best_pos:
                for i, c in cands.items():
                    if c & best_pos:
                        opts.append((i, best_pos))
                    if (c << i) & best_pos:
                        opts.append((i, best_pos >> i))
            else:
                opts = [(best_i, 1 << p) for p in _bits(cands[best_i])]
            rng.shuffle(opts)
            for i, a in opts:
                values[i - 1] = a.bit_length() - 1
                if rec(rem - {i}, free ^ a ^ (a << i)):
                    return True
            return False

        try:
            if rec(frozenset(range(1, n + 1)), start):
                return tuple(values)
        except _Budget:
            continue
    raise RuntimeError(f"restart search exhausted for n={n}, kind={kind.value}")


def construct_sequence(n: int, family: Family | str = Family.SKOLEM) -> SkolemSequence:
    """A deterministic sequence of order ``n`` in the requested family.

    For ``n <= LEX_EXACT_LIMIT`` this is the lexicographically least
    sequence.  Larger orders use seeded restarts of a most-constrained-first
    search, which is reproducible but not lexicographically minimal.
    """
    family = Family(family)
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    if family is Family.SPLIT and n < 2:
        raise NoSequenceError("no split (Rosa) sequence of order 1 exists")
    kind = kind_for(n, family)
    if n <= LEX_EXACT_LIMIT:
        values = _lex_least(n, kind)
        if values is None:
            raise NoSequenceError(f"no {kind.value} sequence of order {n}")
    else:
        values = _restart_search(n, kind)
    seq = SkolemSequence(n, kind, values)
    assert validate_sequence(seq), seq
    return seq


# --------------------------------------------------------------------------
# sequence files
# --------------------------------------------------------------------------

def format_sequences(seqs: Iterable[SkolemSequence], n: int, kind: SkolemKind | str) -> str:
    kind = SkolemKind(kind)
    lines = [f"# n={n} kind={kind.value}"]
    lines.extend(str(s) for s in seqs)
    return "\n".join(lines) + "\n"


def parse_sequences(text: str) -> list[SkolemSequence]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("sequence file must start with '# n=<n> kind=<kind>'")
    fields = dict(tok.split("=", 1) for tok in lines[0].lstrip("#").split())
    n = int(fields["n"])
    kind = SkolemKind(fields["kind"])
    out = []
    for ln in lines[1:]:
        values = tuple(int(x) for x in ln.split())
        if len(values) != n:
            raise ValueError(f"line {ln!r} does not have {n} entries")
        out.append(SkolemSequence(n, kind, values))
    return out


def read_sequences(path: str | Path) -> list[SkolemSequence]:
    return parse_sequences(Path(path).read_text(encoding="utf-8"))


def write_sequences(path: str | Path, seqs: Iterable[SkolemSequence], n: int, kind: SkolemKind | str) -> None:
    Path(path).write_text(format_sequences(seqs, n, kind), encoding="utf-8")
