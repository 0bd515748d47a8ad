import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclicdesigns import bounds
from cyclicdesigns.bounds import (
    FORMULAS,
    BoundFormula,
    Claim,
    CrossingNotFound,
    design_count_bound,
    euler_phi,
    margin,
    min_crossing,
    verify_threshold,
)
from cyclicdesigns.skolem import SkolemKind, count_sequences


def float_margin(fid, n, base):
    """Plain double-precision evaluation of ln(lhs) - ln(rhs), written out per formula."""
    ln = math.log
    b = ln(float(base))
    rosa = Fraction(2 * n + 1, 7) if n % 28 in (3, 24) else Fraction(2 * n - 3, 7)
    table = {
        "STS_ROSA": lambda: n * ln(2) + float(rosa) * ln(6.492) - ln(6 * n + 2),
        "STS_GEN": lambda: (n + n // 3) * ln(2) - ln(6 * n + 2),
        "C5M1_GEN": lambda: n * ln(24) + (n // 3 - 1) * ln(2) - ln(5 * n),
        "C5M1_SK47": lambda: n * ln(24) + (2 * n - 1) / 7 * ln(6.492) - ln(10 * n),
        "C5M5_ROSA": lambda: n * ln(24) + float(rosa) * ln(6.492) - ln(euler_phi(10 * n + 5)),
        "C5M5_GEN": lambda: n * ln(24) + (n // 3) * ln(2) - ln(euler_phi(10 * n + 5)),
        "CK1_GEN": lambda: (n + n // 3 - 1) * ln(2) - ln(n),
        "CK1_SK47": lambda: n * ln(2) + (2 * n - 1) / 7 * ln(6.492) - ln(2 * n),
        "CKK_ROSA": lambda: n * ln(2) + float(rosa) * ln(6.492) - ln(2 * n + 1),
        "CKK_GEN": lambda: (n + n // 3) * ln(2) - ln(2 * n + 1),
    }
    return table[fid]() - n * b


def naive_phi(v):
    return sum(1 for x in range(1, v + 1) if math.gcd(x, v) == 1)


def test_phi_examples():
    assert euler_phi(15) == 8 and euler_phi(11) == 10 and euler_phi(1) == 1
    for v in range(1, 400):
        assert euler_phi(v) == naive_phi(v)
    with pytest.raises(ValueError):
        euler_phi(0)


def test_phi_of_sts_orders_below_6n_plus_2():
    assert all(euler_phi(6 * n + 3) <= 6 * n + 2 for n in range(1, 10_001))


def test_formula_table_covers_fourteen_claims():
    claims = [(f.id, c.threshold) for f in FORMULAS.values() for c in f.claims]
    assert len(FORMULAS) == 10 and len(claims) == 14
    assert sorted(c for _, c in claims) == sorted([444, 702, 27, 570, 25, 116, 25, 136, 27, 570, 640, 375, 403, 597])


@pytest.mark.parametrize("fid", list(FORMULAS))
def test_margin_matches_float_oracle(fid):
    f = FORMULAS[fid]
    for claim in f.claims:
        for n in range(2, 2000, 7):
            if not f.applies(n):
                continue
            m = margin(f, n, claim.base)
            assert m.lower <= m.upper
            assert abs(m.value - float_margin(fid, n, claim.base)) < 1e-9 * max(1, n)


def test_margin_examples():
    assert margin("STS_ROSA", 444).sign == 1
    assert margin("STS_GEN", 702).sign == 1
    assert margin("CK1_SK47", 375).sign == 1


def test_margin_outside_class_rejected():
    with pytest.raises(ValueError):
        margin("STS_ROSA", 445)
    with pytest.raises(ValueError):
        margin("C5M1_SK47", 26)


def test_k_cancellation_exact():
    for fid in ("CK1_GEN", "CK1_SK47", "CKK_ROSA", "CKK_GEN"):
        f = FORMULAS[fid]
        for n in range(2, 1500):
            if f.applies(n):
                assert margin(f, n, k=7) == margin(f, n, k=101) == margin(f, n, k=15)


@pytest.mark.parametrize("fid", list(FORMULAS))
def test_slope_positive(fid):
    f = FORMULAS[fid]
    for claim in f.claims:
        assert bounds.slope(f, claim.base) > 0
        for n in range(claim.threshold, claim.threshold + 1500):
            if not f.applies(n):
                continue
            step = margin(f, n + 28, claim.base).value - margin(f, n, claim.base).value
            if fid.startswith("C5M5"):
                # exact phi(10n+5) oscillates by more than one stride of growth; compare the smooth part
                step += math.log(euler_phi(10 * n + 285)) - math.log(euler_phi(10 * n + 5))
            assert step > 0


def test_fabricated_threshold_fails():
    v = verify_threshold("STS_GEN", window=100, threshold=10)
    assert not v.ok and v.first_failure is not None


def test_window_one_agrees_with_margin():
    for f in FORMULAS.values():
        c = f.claims[0]
        n0 = next(n for n in range(c.threshold, c.threshold + 30) if f.applies(n))
        v = verify_threshold(f, window=1, base=c.base, threshold=n0)
        assert v.ok == (margin(f, n0, c.base).sign > 0)


def test_min_crossing_examples():
    assert min_crossing("C5M1_GEN", 600, base="24") <= 27
    assert min_crossing("C5M1_SK47", 600, base="31.35") <= 25


def test_min_crossing_not_found_for_dominated_formula():
    synthetic = BoundFormula("SYNTH", "2^n vs 3^n", lambda n: True, lambda n, k: {"2": Fraction(n)},
                             {"2": Fraction(1)}, (Claim("3", 10),))
    with pytest.raises(CrossingNotFound):
        min_crossing(synthetic, 200)
    stalled = BoundFormula("LATE", "2^n/n^2 vs 1.9^n", lambda n: True,
                           lambda n, k: {"2": Fraction(n), str(n): Fraction(-2)}, {"2": Fraction(1)},
                           (Claim("1.9", 10),))
    with pytest.raises(CrossingNotFound):
        min_crossing(stalled, 50)
    assert min_crossing(stalled, 2000) > 50


def test_design_count_bound_examples():
    assert design_count_bound("c5_mod1", 1) == 3
    assert design_count_bound("c5_mod5", 1) == 3
    sk2 = count_sequences(2, SkolemKind.SPLIT_HOOKED)
    assert sk2 == 1
    assert design_count_bound("sts", 2, sk=sk2) == 1


def test_design_count_bound_is_exact_integer():
    n = 40
    value = design_count_bound("ck_modk", n, 7)
    total = 2**n * 2 ** (n // 3)
    phi = euler_phi((2 * n + 1) * 7)
    assert (value - 1) * phi < total <= value * phi


def test_design_count_bound_scope():
    with pytest.raises(ValueError):
        design_count_bound("sts", 1)
    with pytest.raises(ValueError):
        design_count_bound("ck_mod1", 3, 5)
    with pytest.raises(ValueError):
        design_count_bound("nope", 3)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(list(FORMULAS)), st.integers(2, 20_000))
def test_certified_sign_matches_interval(fid, n):
    f = FORMULAS[fid]
    if not f.applies(n):
        return
    m = margin(f, n)
    if m.sign > 0:
        assert m.lower > 0
    elif m.sign < 0:
        assert m.upper < 0
    assert m.upper - m.lower < 1e-20 * max(1.0, abs(m.value))
