"""Growth-rate inequalities behind the NC(v, k) lower bounds.

Each formula compares ``ln(lhs)`` with ``ln(rhs)`` where both sides are
products of powers of positive constants.  A side is kept as a map
``atom -> exponent`` (atoms are decimal strings), so identical factors such as
the ``1/k`` carried by both sides of the k > 5 inequalities cancel exactly
before anything is evaluated.  Evaluation uses mpmath interval arithmetic, so
every reported sign is certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath import iv

iv.prec = 128

LogExpr = dict  # atom (decimal string) -> Fraction exponent

ROSA_CLASSES = (3, 5, 24, 26)


def euler_phi(v: int) -> int:
    if v < 1:
        raise ValueError(f"phi is defined for positive integers, got {v}")
    result, n, p = v, v, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _add(*parts: LogExpr) -> LogExpr:
    out: dict[str, Fraction] = {}
    for part in parts:
        for atom, c in part.items():
            out[atom] = out.get(atom, Fraction(0)) + Fraction(c)
    return {a: c for a, c in out.items() if c != 0}


def _neg(e: LogExpr) -> LogExpr:
    return {a: -c for a, c in e.items()}


_LOG_CACHE: dict[str, object] = {}


def _log(atom: str):
    val = _LOG_CACHE.get(atom)
    if val is None:
        val = iv.log(iv.mpf(atom))
        _LOG_CACHE[atom] = val
    return val


def evaluate(e: LogExpr):
    """Interval enclosure of sum(c * ln(atom))."""
    total = iv.mpf(0)
    for atom, c in sorted(e.items()):
        total += _log(atom) * iv.mpf(c.numerator) / c.denominator
    return total


def _rosa_exponent(n: int) -> Fraction:
    # Rosa-sequence counts: (2n+1)/7 for n = 3, 24 and (2n-3)/7 for n = 5, 26 (mod 28)
    return Fraction(2 * n + 1, 7) if n % 28 in (3, 24) else Fraction(2 * n - 3, 7)


def _is_rosa(n: int) -> bool:
    return n % 28 in ROSA_CLASSES


@dataclass(frozen=True)
class Claim:
    base: str
    threshold: int


@dataclass(frozen=True)
class BoundFormula:
    id: str
    description: str
    applies: Callable[[int], bool]
    lhs: Callable[[int, int], LogExpr]
    slope: LogExpr  # linear-in-n part of ln(lhs), used for the eventual-growth check
    claims: tuple[Claim, ...]
    k_free: bool = False  # both sides carry 1/k

    def rhs(self, n: int, base: str, k: int = 7) -> LogExpr:
        e = {base: Fraction(n)}
        if self.k_free:
            e = _add(e, {str(k): -1})
        return e

    def claim(self, base: Optional[str] = None) -> Claim:
        if base is None:
            return self.claims[0]
        for c in self.claims:
            if c.base == base:
                return c
        raise KeyError(f"{self.id} has no claim against base {base}")


def _phi_atom(v: int) -> str:
    return str(euler_phi(v))


def _k(k: int) -> LogExpr:
    return {str(k): -1}


_F = Fraction

FORMULAS: dict[str, BoundFormula] = {
    f.id: f
    for f in [
        BoundFormula(
            "STS_ROSA", "2^n * 6.492^e(n) / (6n+2) vs 3.35^n, n = 3,5,24,26 (mod 28)",
            _is_rosa,
            lambda n, k: {"2": _F(n), "6.492": _rosa_exponent(n), str(6 * n + 2): _F(-1)},
            {"2": _F(1), "6.492": _F(2, 7)},
            (Claim("3.35", 444),),
        ),
        BoundFormula(
            "STS_GEN", "2^n * 2^floor(n/3) / (6n+2) vs 2.49^n",
            lambda n: not _is_rosa(n),
            lambda n, k: _add({"2": _F(n + n // 3)}, {str(6 * n + 2): -1}),
            {"2": _F(4, 3)},
            (Claim("2.49", 702),),
        ),
        BoundFormula(
            "C5M1_GEN", "24^n * 2^(floor(n/3)-1) / (5n) vs 24^n and 29.76^n, n != 4 (mod 7)",
            lambda n: n % 7 != 4,
            lambda n, k: _add({"24": _F(n), "2": _F(n // 3 - 1)}, {str(5 * n): -1}),
            {"24": _F(1), "2": _F(1, 3)},
            (Claim("24", 27), Claim("29.76", 570)),
        ),
        BoundFormula(
            "C5M1_SK47", "24^n * 6.492^((2n-1)/7) / (10n) vs 31.35^n and 38.4^n, n = 4 (mod 7)",
            lambda n: n % 7 == 4,
            lambda n, k: {"24": _F(n), "6.492": _F(2 * n - 1, 7), str(10 * n): _F(-1)},
            {"24": _F(1), "6.492": _F(2, 7)},
            (Claim("31.35", 25), Claim("38.4", 116)),
        ),
        BoundFormula(
            "C5M5_ROSA", "24^n * 6.492^e(n) / phi(10n+5) vs 31.35^n and 38.4^n",
            _is_rosa,
            lambda n, k: {"24": _F(n), "6.492": _rosa_exponent(n), _phi_atom(10 * n + 5): _F(-1)},
            {"24": _F(1), "6.492": _F(2, 7)},
            (Claim("31.35", 25), Claim("38.4", 136)),
        ),
        BoundFormula(
            "C5M5_GEN", "24^n * 2^floor(n/3) / phi(10n+5) vs 24^n and 29.76^n",
            lambda n: not _is_rosa(n),
            lambda n, k: _add({"24": _F(n), "2": _F(n // 3)}, {_phi_atom(10 * n + 5): -1}),
            {"24": _F(1), "2": _F(1, 3)},
            (Claim("24", 27), Claim("29.76", 570)),
        ),
        BoundFormula(
            "CK1_GEN", "2^n * 2^(floor(n/3)-1) / (kn) vs 2.49^n / k, n != 4 (mod 7)",
            lambda n: n % 7 != 4,
            lambda n, k: _add({"2": _F(n + n // 3 - 1)}, {str(n): -1}, _k(k)),
            {"2": _F(4, 3)},
            (Claim("2.49", 640),),
            k_free=True,
        ),
        BoundFormula(
            "CK1_SK47", "2^n * 6.492^((2n-1)/7) / (2nk) vs 3.35^n / k, n = 4 (mod 7)",
            lambda n: n % 7 == 4,
            lambda n, k: _add({"2": _F(n), "6.492": _F(2 * n - 1, 7)}, {str(2 * n): -1}, _k(k)),
            {"2": _F(1), "6.492": _F(2, 7)},
            (Claim("3.35", 375),),
            k_free=True,
        ),
        BoundFormula(
            "CKK_ROSA", "2^n * 6.492^e(n) / ((2n+1)k) vs 3.35^n / k",
            _is_rosa,
            lambda n, k: _add({"2": _F(n), "6.492": _rosa_exponent(n)}, {str(2 * n + 1): -1}, _k(k)),
            {"2": _F(1), "6.492": _F(2, 7)},
            (Claim("3.35", 403),),
            k_free=True,
        ),
        BoundFormula(
            "CKK_GEN", "2^n * 2^floor(n/3) / ((2n+1)k) vs 2.49^n / k",
            lambda n: not _is_rosa(n),
            lambda n, k: _add({"2": _F(n + n // 3)}, {str(2 * n + 1): -1}, _k(k)),
            {"2": _F(4, 3)},
            (Claim("2.49", 597),),
            k_free=True,
        ),
    ]
}


def formula(fid: str | BoundFormula) -> BoundFormula:
    if isinstance(fid, BoundFormula):
        return fid
    try:
        return FORMULAS[fid]
    except KeyError:
        raise KeyError(f"unknown formula {fid!r}; known: {', '.join(FORMULAS)}") from None


@dataclass(frozen=True)
class Margin:
    n: int
    lower: float
    upper: float
    sign: int  # +1 / -1 when certified, 0 when the enclosure straddles zero

    @property
    def value(self) -> float:
        return (self.lower + self.upper) / 2

    @property
    def certified(self) -> bool:
        return self.sign != 0


def margin_expr(f: BoundFormula, n: int, base: Optional[str] = None, k: int = 7) -> LogExpr:
    base = f.claim(base).base
    return _add(f.lhs(n, k), _neg(f.rhs(n, base, k)))


def margin(f: str | BoundFormula, n: int, base: Optional[str] = None, k: int = 7) -> Margin:
    """Certified ``ln(lhs) - ln(rhs)`` at order ``n``."""
    f = formula(f)
    if not f.applies(n):
        raise ValueError(f"n={n} is outside the residue classes of {f.id}")
    if f.k_free and (k <= 5 or k % 2 == 0):
        raise ValueError(f"{f.id} needs odd k > 5, got {k}")
    val = evaluate(margin_expr(f, n, base, k))
    lo, hi = float(val.a), float(val.b)
    sign = 1 if val.a > 0 else -1 if val.b < 0 else 0
    return Margin(n, lo, hi, sign)


def slope(f: str | BoundFormula, base: Optional[str] = None) -> float:
    """Lower end of the per-unit-n growth of the margin (floors dropped)."""
    f = formula(f)
    base = f.claim(base).base
    val = evaluate(_add(f.slope, {base: -1}))
    return float(val.a)


@dataclass(frozen=True)
class ThresholdVerdict:
    formula: str
    base: str
    threshold: int
    window: int
    ok: bool
    checked: int
    first_failure: Optional[int]
    min_margin: float
    min_margin_at: int
    margin_at_threshold: float
    slope: float


def verify_threshold(f: str | BoundFormula, window: int = 5000, base: Optional[str] = None,
                     threshold: Optional[int] = None, min_margin: float = 0.0) -> ThresholdVerdict:
    """Certified positive margin at every applicable n in [n0, n0 + window)."""
    f = formula(f)
    if window < 1:
        raise ValueError("window must be at least 1")
    claim = f.claim(base)
    n0 = claim.threshold if threshold is None else threshold
    first_bad = None
    worst, worst_at = float("inf"), n0
    at_threshold = None
    checked = 0
    for n in range(n0, n0 + window):
        if not f.applies(n):
            continue
        m = margin(f, n, claim.base)
        checked += 1
        if at_threshold is None:
            at_threshold = m.lower
        if m.lower < worst:
            worst, worst_at = m.lower, n
        if not (m.sign > 0 and m.lower > min_margin) and first_bad is None:
            first_bad = n
    s = slope(f, claim.base)
    ok = first_bad is None and s > 0 and checked > 0
    return ThresholdVerdict(f.id, claim.base, n0, window, ok, checked, first_bad, worst, worst_at,
                            at_threshold if at_threshold is not None else float("nan"), s)


class CrossingNotFound(ValueError):
    pass


def min_crossing(f: str | BoundFormula, limit: int, base: Optional[str] = None, start: int = 2) -> int:
    """Least applicable n from which the margin stays certified positive up to ``limit``."""
    f = formula(f)
    claim = f.claim(base)
    if slope(f, claim.base) <= 0:
        raise CrossingNotFound(f"{f.id} vs {claim.base}^n: right side grows at least as fast")
    last_bad = None
    applicable = [n for n in range(start, limit + 1) if f.applies(n)]
    for n in applicable:
        if margin(f, n, claim.base).sign <= 0:
            last_bad = n
    if last_bad is None:
        return applicable[0]
    later = [n for n in applicable if n > last_bad]
    if not later:
        raise CrossingNotFound(f"{f.id} vs {claim.base}^n: no crossing up to n={limit}")
    return later[0]


# --------------------------------------------------------------------------
# exact counting bounds
# --------------------------------------------------------------------------

DESIGN_KINDS = {
    # kind: (v(n, k), k fixed or None, variants per type-1 starter, type-1 starters(n))
    "sts": (lambda n, k: 6 * n + 3, 3, 2),
    "c5_mod1": (lambda n, k: 10 * n + 1, 5, 24),
    "c5_mod5": (lambda n, k: 10 * n + 5, 5, 24),
    "ck_mod1": (lambda n, k: 2 * n * k + 1, None, 2),
    "ck_modk": (lambda n, k: (2 * n + 1) * k, None, 2),
}


def sequence_count_lower_bound(n: int) -> int:
    """Classical ``2^floor(n/3)`` lower bound on the number of sequences."""
    return 2 ** (n // 3)


def design_count_bound(kind: str, n: int, k: Optional[int] = None, sk: Optional[int] = None) -> int:
    """``ceil(variants^n * Sk(n) / phi(v))`` as an exact integer.

    ``sk`` overrides the sequence-count lower bound (e.g. with an exact count
    from enumeration).  For n = 1 the explicit starters are used, so Sk = 1.
    """
    if kind not in DESIGN_KINDS:
        raise ValueError(f"unknown kind {kind!r}; known: {', '.join(DESIGN_KINDS)}")
    vfun, fixed_k, per = DESIGN_KINDS[kind]
    if fixed_k is not None:
        if k not in (None, fixed_k):
            raise ValueError(f"{kind} has k = {fixed_k}")
        k = fixed_k
    elif k is None or k <= 5 or k % 2 == 0:
        raise ValueError(f"{kind} needs odd k > 5")
    if n < 1 or (kind in ("sts", "ck_mod1", "ck_modk") and n < 2):
        raise ValueError(f"n={n} is outside the scope of {kind}")
    v = vfun(n, k)
    if sk is None:
        sk = 1 if n == 1 else sequence_count_lower_bound(n)
    total = per**n * sk
    phi = euler_phi(v)
    return -(-total // phi)
