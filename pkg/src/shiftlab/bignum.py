"""Exact comparisons for numbers far beyond native big-integer range.

The slow-entropy ledger must record and compare quantities like 2^(2^(2^35))
whose plain binary representation does not fit in memory.  `Big` keeps such
values as enclosures [lo, hi] of exact tower terms c * 2^e (c a positive
rational, e an int or another tower), supporting exactly the operations the
ledger needs: integer injection, multiplication, squaring, power-of-two,
ceiling, floor(log2(x+1))+1, and certified strict comparison.  Small values
are materialised and compared as exact rationals; large ones are compared
through their (one-level-lower) logarithms, recursively.  A comparison that
cannot be certified raises rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from shiftlab.exactmath import _floor_log2, log2_bounds

_MAT_BITS = 4096  # materialise exponents up to this many value bits
_FOLD = 64  # relative slack 2^-_FOLD when folding small additions


class UndecidableComparison(RuntimeError):
    """The enclosures overlap; the construction should have left more margin."""


@dataclass(frozen=True)
class Tower:
    """Exact positive value c * 2^e; e is an int, an exact Fraction, or
    another Tower (fractional exponents arise from rate constants)."""

    c: Fraction
    e: Union[int, Fraction, "Tower"]

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError("tower coefficient must be positive")
        if isinstance(self.e, Fraction) and self.e.denominator == 1:
            object.__setattr__(self, "e", int(self.e))

    def height(self) -> int:
        return 1 + (self.e.height() if isinstance(self.e, Tower) else 0)


Val = Union[Fraction, Tower]


def _as_val(x: Union[int, Fraction, Tower]) -> Val:
    if isinstance(x, int):
        return Fraction(x)
    return x


def materialize(v: Val, bit_budget: int = _MAT_BITS) -> Optional[Fraction]:
    """Exact Fraction value when small enough, else None."""
    if isinstance(v, Fraction):
        return v
    e = materialize(_as_val(v.e), bit_budget)
    if e is None or e.denominator != 1 or abs(e) > bit_budget:
        return None
    return v.c * Fraction(2) ** int(e)


def _crude_floor_log2(v: Val) -> Optional[int]:
    """An int lower bound of log2(value), or None meaning 'at least 2^62'."""
    if isinstance(v, Fraction):
        return _floor_log2(v) if v > 0 else None
    c_floor = _floor_log2(v.c)
    e_mat = materialize(_as_val(v.e), 62)
    if e_mat is None:
        return None  # exponent itself exceeds 2^62: astronomically large
    return int(e_mat.numerator // e_mat.denominator) + c_floor


def _fold_add(t: Tower, f: Fraction, up: bool) -> Tower:
    """Valid bound for t + f (|f| small next to t), by scaling the coefficient."""
    if f == 0:
        return t
    mag = _crude_floor_log2(t)
    if mag is None:
        mag = 2**62
    fb = _floor_log2(abs(f)) + 1  # |f| <= 2^fb
    shift = mag - fb
    if shift < 8:
        raise UndecidableComparison("fold_add without enough magnitude gap")
    shift = min(shift, _FOLD)
    slack = Fraction(1, 1 << shift)
    if up:
        return Tower(t.c * (1 + slack), t.e) if f > 0 else t
    return Tower(t.c * (1 - slack), t.e) if f < 0 else t


def val_add(a: Val, b: Val, up: bool) -> Val:
    """Directed bound for a + b (never silently wrong, may raise)."""
    ma, mb = materialize(a), materialize(b)
    if ma is not None and mb is not None:
        return ma + mb
    if isinstance(a, Tower) and mb is not None:
        return _fold_add(a, mb, up)
    if isinstance(b, Tower) and ma is not None:
        return _fold_add(b, ma, up)
    assert isinstance(a, Tower) and isinstance(b, Tower)
    # fold the smaller tower into the larger through a crude magnitude gap
    la, lb = _crude_floor_log2(a), _crude_floor_log2(b)
    if la is None and lb is None:
        # same-height comparison path decides which dominates
        big, small = (a, b) if val_cmp(a, b) >= 0 else (b, a)
    elif la is None or (lb is not None and la >= lb):
        big, small = a, b
    else:
        big, small = b, a
    lsmall = _crude_floor_log2(small)
    lbig = _crude_floor_log2(big)
    if lbig is None:
        lbig = 2**62
    if lsmall is None or lbig - lsmall < 8:
        raise UndecidableComparison("tower addition without magnitude separation")
    shift = min(lbig - lsmall - 1, _FOLD)
    slack = Fraction(1, 1 << shift)
    return Tower(big.c * (1 + slack), big.e) if up else big


def val_mul(a: Val, b: Val, up: bool) -> Val:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if isinstance(a, Fraction):
        a, b = b, a
    if isinstance(b, Fraction):
        assert isinstance(a, Tower)
        return Tower(a.c * b, a.e)
    assert isinstance(a, Tower) and isinstance(b, Tower)
    return Tower(a.c * b.c, _exp_add(a.e, b.e, up))


def _exp_add(a: Union[int, Tower], b: Union[int, Tower], up: bool) -> Union[int, Tower]:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    out = val_add(_as_val(a), _as_val(b), up)
    if isinstance(out, Fraction):
        if out.denominator != 1:
            raise UndecidableComparison("non-integer exponent from addition")
        return int(out)
    return out


def _log2_bounds_val(v: Val, prec: int = 64) -> tuple[Val, Val]:
    """Enclosure of log2(value), one tower level down."""
    if isinstance(v, Fraction):
        lo, hi = log2_bounds(v, prec)
        return lo, hi
    c_lo, c_hi = log2_bounds(v.c, prec)
    e = _as_val(v.e)
    return val_add(e, c_lo, up=False), val_add(e, c_hi, up=True)


def val_cmp(a: Val, b: Val) -> int:
    """-1, 0, +1 with certainty; raises UndecidableComparison otherwise."""
    ma, mb = materialize(a), materialize(b)
    if ma is not None and mb is not None:
        return (ma > mb) - (ma < mb)
    if ma is not None and ma <= 0:
        return -1  # towers are positive
    if mb is not None and mb <= 0:
        return 1
    a_lo, a_hi = _log2_bounds_val(a)
    b_lo, b_hi = _log2_bounds_val(b)
    if val_cmp(a_lo, b_hi) > 0:
        return 1
    if val_cmp(a_hi, b_lo) < 0:
        return -1
    raise UndecidableComparison("log-enclosures overlap")


@dataclass(frozen=True)
class Big:
    """Certified enclosure [lo, hi] of one exact positive quantity."""

    lo: Val
    hi: Val

    @staticmethod
    def from_int(n: int) -> "Big":
        if n <= 0:
            raise ValueError("Big models positive quantities")
        return Big(Fraction(n), Fraction(n))

    @staticmethod
    def from_fraction(x: Fraction) -> "Big":
        if x <= 0:
            raise ValueError("Big models positive quantities")
        return Big(x, x)

    @staticmethod
    def pow2(e: "Big") -> "Big":
        """2^e for an integer-valued enclosure e."""

        def side(v: Val, up: bool) -> Val:
            m = materialize(v)
            if m is not None:
                if m.denominator != 1:
                    raise ValueError("pow2 needs integer-valued exponents")
                if abs(m) <= _MAT_BITS:
                    return Fraction(2) ** int(m)
                return Tower(Fraction(1), int(m))
            assert isinstance(v, Tower)
            return Tower(Fraction(1), v)

        return Big(side(e.lo, False), side(e.hi, True))

    def mul(self, other: "Big") -> "Big":
        return Big(val_mul(self.lo, other.lo, up=False), val_mul(self.hi, other.hi, up=True))

    def mul_int(self, n: int) -> "Big":
        return self.mul(Big.from_int(n))

    def square(self) -> "Big":
        return self.mul(self)

    def ceil(self) -> "Big":
        """Enclosure of ceil(value): exact when small, padded by one otherwise."""
        m_lo, m_hi = materialize(self.lo), materialize(self.hi)
        lo = Fraction(-((-m_lo.numerator) // m_lo.denominator)) if m_lo is not None else self.lo
        if m_hi is not None:
            hi: Val = Fraction(-((-m_hi.numerator) // m_hi.denominator))
        else:
            hi = val_add(self.hi, Fraction(1), up=True)
        return Big(lo, hi)

    def mul_frac(self, f: Fraction) -> "Big":
        if f <= 0:
            raise ValueError("Big scaling needs a positive factor")
        return self.mul(Big.from_fraction(Fraction(f)))

    def add_int(self, n: int) -> "Big":
        return Big(val_add(self.lo, Fraction(n), up=False), val_add(self.hi, Fraction(n), up=True))

    def floor_log2_plus1(self) -> "Big":
        """Enclosure of floor(log2(x + 1)) + 1 (the value a_x for dyadic sequences).

        Exact when x is exactly 2^E with integer E: floor(log2(2^E + 1)) + 1 = E + 1.
        """
        if (
            isinstance(self.lo, Tower)
            and isinstance(self.hi, Tower)
            and self.lo == self.hi
            and self.lo.c == 1
        ):
            e = _as_val(self.lo.e)
            return Big(val_add(e, Fraction(1), up=False), val_add(e, Fraction(1), up=True))
        m_lo, m_hi = materialize(self.lo), materialize(self.hi)
        if m_lo is not None and m_hi is not None:
            return Big(
                Fraction(_floor_log2(m_lo + 1) + 1), Fraction(_floor_log2(m_hi + 1) + 1)
            )
        lo_l, _ = _log2_bounds_val(self.lo)
        _, hi_l = _log2_bounds_val(self.hi)
        # floor(log2(x+1)) + 1 lies within [log2(x), log2(x) + 2]
        return Big(lo_l, val_add(hi_l, Fraction(2), up=True))

    def gt(self, other: "Big") -> bool:
        """Certified strict 'self > other'; raises if the enclosures overlap."""
        c = val_cmp(self.lo, other.hi)
        if c > 0:
            return True
        if val_cmp(self.hi, other.lo) < 0:
            return False
        raise UndecidableComparison("enclosures overlap in gt()")

    def lt(self, other: "Big") -> bool:
        return other.gt(self)

    def describe(self) -> str:
        m = materialize(self.hi, 64)
        if m is not None and materialize(self.lo, 64) == m and m.denominator == 1:
            return str(m.numerator)
        return f"[{_describe_val(self.lo)}, {_describe_val(self.hi)}]"

    def to_json(self):
        m_lo, m_hi = materialize(self.lo, 256), materialize(self.hi, 256)
        if m_lo is not None and m_hi is not None and m_lo == m_hi:
            if m_lo.denominator == 1:
                return {"int": str(m_lo.numerator)}
            return {"frac": f"{m_lo.numerator}/{m_lo.denominator}"}
        return {"lo": _val_json(self.lo), "hi": _val_json(self.hi)}


def _describe_val(v: Val) -> str:
    if isinstance(v, Fraction):
        return str(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return f"{v.c}*2^({_describe_val(_as_val(v.e))})"


def _val_json(v: Val):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return {"int": str(v.numerator)}
        return {"frac": f"{v.numerator}/{v.denominator}"}
    return {"coef": f"{v.c.numerator}/{v.c.denominator}", "pow2": _val_json(_as_val(v.e))}


def big_pow2_int(e: int) -> Big:
    return Big.pow2(Big.from_int(e)) if e > 0 else Big.from_int(1)
