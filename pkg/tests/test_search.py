import pytest

from cyclicdesigns.core import difference_coverage, expand, validate_cycle_system
from cyclicdesigns.search import SearchBudget, SearchStatus, search_difference_system


def test_nine_three_is_exhausted():
    res = search_difference_system(9, 3)
    assert res.status is SearchStatus.EXHAUSTED and not res.starters


def test_nine_three_exhausted_without_symmetry_pruning():
    res = search_difference_system(9, 3, budget=SearchBudget(symmetry=False))
    assert res.status is SearchStatus.EXHAUSTED


@pytest.mark.parametrize("v,k", [(7, 3), (13, 3), (15, 3), (19, 3), (11, 5), (15, 5), (21, 5), (21, 7), (29, 7), (57, 7), (37, 9)])
def test_search_finds_valid_systems(v, k):
    res = search_difference_system(v, k)
    assert res.found
    ds = res.system()
    assert ds.coverage()
    assert validate_cycle_system(expand(ds))


def test_small_budget_gives_not_found():
    res = search_difference_system(109, 9, budget=SearchBudget(node_limit=50))
    assert res.status is SearchStatus.NOT_FOUND


def test_restricted_target_and_types():
    v, m = 35, 5
    target = list(range(m, v, m))
    res = search_difference_system(v, 7, target=target, types=(7,))
    assert res.found and difference_coverage(res.starters, v, target)


def test_parallel_search_is_deterministic():
    a = search_difference_system(43, 7, workers=2)
    b = search_difference_system(43, 7, workers=2)
    assert a.found and a.starters == b.starters
    assert search_difference_system(9, 3, workers=2).status is SearchStatus.EXHAUSTED


def test_target_must_be_symmetric():
    with pytest.raises(ValueError):
        search_difference_system(15, 3, target=[1, 2])


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        SearchBudget(node_limit=0)
