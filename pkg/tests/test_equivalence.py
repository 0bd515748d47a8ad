import itertools

import pytest

from cyclicdesigns.constructors import c5_mod1, c5_mod5, search_fallback, sts_6n3
from cyclicdesigns.core import Cycle, CycleSystem, DesignError, DifferenceSystem, expand, negate, validate_cycle_system
from cyclicdesigns.equivalence import (
    affine_key,
    apply_multiplier,
    brute_force_isomorphic,
    census,
    units,
)
from cyclicdesigns.variants import all_class_vectors, all_sign_vectors, class_variant, sign_variant

STS7 = expand(DifferenceSystem(7, 3, (Cycle((0, 1, 3), 7),)))


def test_multiplier_examples():
    img = apply_multiplier(STS7, 2)
    assert img == expand(DifferenceSystem(7, 3, (Cycle((0, 2, 6), 7),)))
    assert validate_cycle_system(img)
    assert apply_multiplier(STS7, 1) == STS7
    neg = expand(DifferenceSystem(7, 3, (negate(Cycle((0, 1, 3), 7)),)))
    assert apply_multiplier(STS7, 6) == neg
    with pytest.raises(ValueError):
        apply_multiplier(expand(sts_6n3(2)), 3)


def test_affine_key_is_multiplier_invariant():
    for ds in (sts_6n3(2), sts_6n3(3), c5_mod1(2), c5_mod5(1)):
        sys = expand(ds)
        key = affine_key(sys)
        for u in units(sys.v):
            assert affine_key(apply_multiplier(sys, u)) == key
            assert affine_key(apply_multiplier(sys, u)).serialize() == key.serialize()


def test_affine_key_refuses_non_cyclic():
    cycles = sorted(STS7.cycles)
    with pytest.raises(DesignError):
        affine_key(CycleSystem(7, 3, frozenset(cycles[:3])))


def test_brute_force_examples():
    assert brute_force_isomorphic(STS7, apply_multiplier(STS7, 3))
    neg = expand(DifferenceSystem(7, 3, (negate(Cycle((0, 1, 3), 7)),)))
    assert brute_force_isomorphic(STS7, neg)
    with pytest.raises(ValueError):
        brute_force_isomorphic(expand(sts_6n3(3)), expand(sts_6n3(3)))


def test_brute_force_detects_non_isomorphic():
    # two cyclic STS(13) are not isomorphic
    a = expand(DifferenceSystem(13, 3, (Cycle((0, 1, 4), 13), Cycle((0, 2, 7), 13))))
    b = expand(search_fallback(13, 3))
    assert validate_cycle_system(a) and validate_cycle_system(b)
    assert brute_force_isomorphic(a, b) == (affine_key(a) == affine_key(b))


def test_brute_force_on_non_cyclic_images():
    # relabel by a non-affine permutation; still isomorphic
    perm = [3, 0, 6, 1, 5, 2, 4]
    moved = CycleSystem(7, 3, frozenset(Cycle((perm[x] for x in c.vertices), 7) for c in STS7.cycles))
    assert brute_force_isomorphic(moved, STS7)
    assert brute_force_isomorphic(STS7, moved)


@pytest.mark.parametrize("maker", [c5_mod1, c5_mod5])
def test_census_class_variants_n1(maker):
    ds = maker(1)
    designs = [expand(class_variant(ds, phi)) for phi in all_class_vectors(1)]
    result = census(designs)
    assert result.distinct == 24 and result.ceiling_bound == 3
    assert result.ceiling_bound <= result.affine_classes <= result.distinct
    assert result.nc_lower_bound == max(result.ceiling_bound, result.affine_classes)


def test_census_single_design():
    result = census([STS7])
    assert (result.distinct, result.ceiling_bound) == (1, 1)


def test_census_counts_duplicates_once():
    result = census([STS7, STS7, apply_multiplier(STS7, 3)])
    assert result.total == 3
    assert result.distinct == 2 and result.affine_classes == 1


def test_census_rejects_mixed_orders():
    with pytest.raises(ValueError):
        census([STS7, expand(sts_6n3(2))])
    with pytest.raises(ValueError):
        census([])


def test_census_distinct_matches_pairwise_comparison():
    ds = sts_6n3(4)
    designs = [expand(sign_variant(ds, s)) for s in all_sign_vectors(4)]
    designs += designs[:5]
    pairwise = sum(1 for i, d in enumerate(designs) if all(d.cycles != e.cycles for e in designs[:i]))
    assert census(designs).distinct == pairwise == 16


@pytest.mark.parametrize("maker", [c5_mod1, c5_mod5])
def test_brute_force_agrees_with_keys_on_class_corpus(maker):
    ds = maker(1)
    designs = [expand(class_variant(ds, phi)) for phi in all_class_vectors(1)]
    keys = [affine_key(d) for d in designs]
    for i, j in itertools.combinations(range(len(designs)), 2):
        assert brute_force_isomorphic(designs[i], designs[j]) == (keys[i] == keys[j])
