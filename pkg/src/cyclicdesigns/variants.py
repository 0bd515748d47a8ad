"""Families of pairwise-distinct designs obtained by re-orienting starters.

Sign variants negate a chosen subset of the type-1 starters.  For k = 5 the
difference vector of a type-1 pentagon can be permuted arbitrarily; the 120
permutations fall into 24 rotation classes, one per translation orbit.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterator, Sequence

from .core import Cycle, DesignError, DifferenceSystem, cycle_type, negate, oriented_differences, partial_differences

Signs = tuple[int, ...]


def _check_signs(ds: DifferenceSystem, signs: Sequence[int]) -> list[int]:
    idx = ds.type_one()
    if len(signs) != len(idx):
        raise ValueError(f"sign vector has length {len(signs)}, system has {len(idx)} type-1 starters")
    if any(s not in (1, -1) for s in signs):
        raise ValueError(f"signs must be +1/-1, got {tuple(signs)}")
    return idx


def sign_variant(ds: DifferenceSystem, signs: Sequence[int]) -> DifferenceSystem:
    """Negate the type-1 starters whose sign is -1."""
    idx = _check_signs(ds, signs)
    starters = list(ds.starters)
    for i, s in zip(idx, signs):
        if s == -1:
            starters[i] = negate(starters[i])
    meta = dict(ds.meta)
    meta["signs"] = format_signs(signs)
    return DifferenceSystem(ds.v, ds.k, tuple(starters), meta)


def all_sign_vectors(s: int) -> Iterator[Signs]:
    """All of {+1,-1}^s, starting from all plus."""
    for bits in product((1, -1), repeat=s):
        yield bits


def format_signs(signs: Sequence[int]) -> str:
    return "".join("+" if s == 1 else "-" for s in signs)


def parse_signs(text: str) -> Signs:
    if set(text) - {"+", "-"}:
        raise ValueError(f"sign string may only contain '+' and '-': {text!r}")
    return tuple(1 if ch == "+" else -1 for ch in text)


def oriented_vector(c: Cycle) -> tuple[int, ...]:
    """Difference vector (d_1, ..., d_k) of a type-1 cycle, read from its first vertex."""
    if cycle_type(c) != 1:
        raise DesignError(f"{c} is not of type 1")
    return oriented_differences(c)


def cycle_from_vector(vec: Sequence[int], v: int) -> Cycle:
    """Cycle whose vertices are the prefix sums of ``vec`` starting at 0."""
    if sum(vec) % v:
        raise DesignError(f"difference vector {tuple(vec)} does not sum to 0 mod {v}")
    verts = [0]
    for d in vec[:-1]:
        verts.append((verts[-1] + d) % v)
    if len(set(verts)) != len(verts):
        raise DesignError(f"difference vector {tuple(vec)} has colliding partial sums mod {v}")
    return Cycle(verts, v)


def least_rotation(vec: Sequence[int]) -> tuple[int, ...]:
    k = len(vec)
    return min(tuple(vec[(i + j) % k] for j in range(k)) for i in range(k))


def pentagon_classes(c: Cycle) -> list[tuple[int, ...]]:
    """The 24 rotation classes of the permuted difference vectors of ``c``.

    Each class is named by its lexicographically least rotation.  The class
    containing ``c`` itself comes first; the rest follow in lexicographic
    order, so index 1 always reproduces ``c``.
    """
    if c.k != 5:
        raise DesignError("class variants are only defined for 5-cycles")
    if cycle_type(c) != 1:
        raise DesignError(f"{c} is not of type 1")
    if len(set(partial_differences(c, 1))) != 10:
        raise DesignError(f"{c} has repeated partial differences")
    vec = oriented_vector(c)
    classes = {least_rotation(p) for p in permutations(vec)}
    own = least_rotation(vec)
    return [own] + sorted(classes - {own})


def class_members(rep: Sequence[int]) -> list[tuple[int, ...]]:
    k = len(rep)
    return sorted({tuple(rep[(i + j) % k] for j in range(k)) for i in range(k)})


def class_variant(ds: DifferenceSystem, phi: Sequence[int]) -> DifferenceSystem:
    """Replace the i-th type-1 starter by a representative of its class ``phi[i]``.

    Class 1 keeps the original starter; any other class uses the cycle built
    from the class's least rotation.
    """
    if ds.k != 5:
        raise DesignError(f"class variants need k = 5, got k = {ds.k}")
    idx = ds.type_one()
    if len(phi) != len(idx):
        raise ValueError(f"class vector has length {len(phi)}, system has {len(idx)} type-1 starters")
    if any(not 1 <= r <= 24 for r in phi):
        raise ValueError(f"class indices must lie in 1..24, got {tuple(phi)}")
    starters = list(ds.starters)
    for i, r in zip(idx, phi):
        if r == 1:
            continue
        classes = pentagon_classes(starters[i])
        starters[i] = cycle_from_vector(classes[r - 1], ds.v)
    meta = dict(ds.meta)
    meta["classes"] = format_classes(phi)
    return DifferenceSystem(ds.v, ds.k, tuple(starters), meta)


def all_class_vectors(s: int) -> Iterator[tuple[int, ...]]:
    yield from product(range(1, 25), repeat=s)


def format_classes(phi: Sequence[int]) -> str:
    return ".".join(str(r) for r in phi)


def parse_classes(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split("."))
