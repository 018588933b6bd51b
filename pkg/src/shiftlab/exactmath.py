"""Certified rational bounds for logarithms, entropy rates, and counting tails.

Everything here returns exact `Fraction` enclosures computed with integer
arithmetic and directed rounding; no float enters any bound.  The three
classical lemmas the enclosures lean on (stated where used):

  L1. binomial entropy bound:  C(n,t) <= 2^(n*H(t/n)) for 0 <= t <= n;
  L2. the rate function f(x) = x*log2(N-1) + H(x) is nondecreasing on
      (0, (N-1)/N);
  L3. the binomial divergence D(x||p) = x*log2(x/p) + (1-x)*log2((1-x)/(1-p))
      is decreasing on (0,p) and increasing on (p,1).

Each analytic bound built from them is cross-checked in the test suite
against exact enumeration on a grid, which is the real safety net.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

Bounds = tuple[Fraction, Fraction]


def _floor_log2(x: Fraction) -> int:
    """Exact floor(log2 x) for x > 0."""
    if x <= 0:
        raise ValueError("log2 of nonpositive value")
    num, den = x.numerator, x.denominator
    e = num.bit_length() - den.bit_length()
    # candidate e satisfies 2^(e-1) < x < 2^(e+1); fix with one exact compare
    if e >= 0:
        if num < den << e:
            e -= 1
    else:
        if num << (-e) < den:
            e -= 1
    return e


def log2_bounds(x: Fraction, prec: int = 64) -> Bounds:
    """Exact enclosure lo <= log2(x) <= hi with hi - lo <~ 2^(1-prec).

    Digit extraction by repeated squaring, run as two scaled-integer
    chains with floor (lower) and ceiling (upper) rounding.  Each chain
    maintains its own residual invariant, so each side is valid on its
    own regardless of where the two chains' bit decisions diverge.
    """
    x = Fraction(x)
    e = _floor_log2(x)
    m = x / (Fraction(2) ** e)  # mantissa in [1, 2)
    work = 2 * prec + 16
    R = 1 << work
    num, den = m.numerator, m.denominator
    y_lo = (num * R) // den
    y_hi = -((-num * R) // den)

    def chain(y: int, up: bool) -> int:
        bits = 0
        for _ in range(prec):
            y = y * y
            y = -((-y) // R) if up else y // R
            bits <<= 1
            if y >= 2 * R:
                bits |= 1
                y = -((-y) // 2) if up else y // 2
        return bits

    lo = e + Fraction(chain(y_lo, False), 1 << prec)
    hi = e + Fraction(chain(y_hi, True) + 1, 1 << prec)
    return lo, hi


def log2_le(x: Fraction, bound: Fraction) -> bool:
    """Exact test log2(x) <= bound, i.e. x <= 2^bound, via integer powers."""
    b = Fraction(bound)
    num, den = b.numerator, b.denominator
    # x^den <= 2^num  (den > 0)
    lhs = Fraction(x) ** den
    if num >= 0:
        return lhs.numerator <= lhs.denominator << num
    return lhs.numerator << (-num) <= lhs.denominator


def _xlog2inv_bounds(x: Fraction, prec: int) -> Bounds:
    """Enclosure of -x*log2(x) = x*log2(1/x) for 0 < x < 1."""
    lo, hi = log2_bounds(1 / Fraction(x), prec)
    return x * lo, x * hi


def entropy_bounds(x: Fraction, prec: int = 64) -> Bounds:
    """Enclosure of the binary entropy H(x) in bits, 0 <= x <= 1."""
    x = Fraction(x)
    if x == 0 or x == 1:
        return Fraction(0), Fraction(0)
    a_lo, a_hi = _xlog2inv_bounds(x, prec)
    b_lo, b_hi = _xlog2inv_bounds(1 - x, prec)
    return a_lo + b_lo, a_hi + b_hi


def rate_bounds(alpha: Fraction, N: int, prec: int = 64) -> Bounds:
    """Enclosure of f(alpha) = alpha*log2(N-1) + H(alpha), logs base 2."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0,1)")
    if N < 2:
        raise ValueError("alphabet size must be >= 2")
    h_lo, h_hi = entropy_bounds(alpha, prec)
    if N == 2:
        return h_lo, h_hi
    l_lo, l_hi = log2_bounds(Fraction(N - 1), prec)
    return alpha * l_lo + h_lo, alpha * l_hi + h_hi


def pick_delta(alpha: Fraction, N: int, prec: int = 64, max_j: int = 60) -> Fraction:
    """Largest delta = 2^-j with (1+delta)*f(alpha) < log2(N), certified."""
    f_lo, f_hi = rate_bounds(alpha, N, prec)
    l2_lo, _ = log2_bounds(Fraction(N), prec)
    for j in range(1, max_j + 1):
        delta = Fraction(1, 2**j)
        if (1 + delta) * f_hi < l2_lo:
            return delta
    raise ValueError("no certified delta: alpha is too close to (N-1)/N at this precision")


def growth_bounds(alpha: Fraction, N: int, delta: Fraction, prec: int = 64) -> Bounds:
    """Enclosure of g = log2(N) - (1+delta)*f(alpha); requires g > 0 certified."""
    f_lo, f_hi = rate_bounds(alpha, N, prec)
    l2_lo, l2_hi = log2_bounds(Fraction(N), prec)
    g_lo = l2_lo - (1 + delta) * f_hi
    g_hi = l2_hi - (1 + delta) * f_lo
    if g_lo <= 0:
        raise ValueError("growth exponent not certified positive; raise precision")
    return g_lo, g_hi


# ---------------------------------------------------------------- exact counts


def ball_volume(n: int, t: int, N: int) -> int:
    """|{u in {1..N}^n : u differs from a fixed w in at most t places}|, exact."""
    if not 0 <= t <= n:
        raise ValueError(f"mismatch count t={t} out of range [0, {n}]")
    return sum(math.comb(n, j) * (N - 1) ** j for j in range(t + 1))


def balance_window(n: int, N: int, eps: Fraction) -> tuple[int, int]:
    """Integer letter counts j with (1-eps)*n/N < j < (1+eps)*n/N, both strict."""
    lo_q = (1 - Fraction(eps)) * Fraction(n, N)
    hi_q = (1 + Fraction(eps)) * Fraction(n, N)
    j_min = lo_q.numerator // lo_q.denominator + 1  # smallest integer > lo_q
    j_max = -((-hi_q.numerator) // hi_q.denominator) - 1  # largest integer < hi_q
    return j_min, j_max


def balanced_count(n: int, N: int, eps: Fraction) -> int:
    """Exact number of words in {1..N}^n with every letter count strictly
    inside ((1-eps)n/N, (1+eps)n/N); multinomial dynamic program."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    j_min, j_max = balance_window(n, N, eps)
    j_min = max(j_min, 0)
    j_max = min(j_max, n)
    if j_min > j_max:
        return 0
    if N == 1:
        return 1 if j_min <= n <= j_max else 0
    dp = {0: 1}
    for _letter in range(N):
        nxt: dict[int, int] = {}
        for used, ways in dp.items():
            for j in range(j_min, min(j_max, n - used) + 1):
                nxt[used + j] = nxt.get(used + j, 0) + ways * math.comb(n - used, j)
        dp = nxt
        if not dp:
            return 0
    return dp.get(n, 0)


def separation_threshold(alpha: Fraction, n: int) -> int:
    """Minimum accepted mismatch count for 'distance > alpha' at length n.

    Membership in the open ball d_H < alpha means at most ceil(alpha*n)-1
    mismatches; acceptance is its complement, >= ceil(alpha*n).  When
    alpha*n is an integer this admits d_H = alpha exactly (recorded tie
    rule that keeps every certificate in integer arithmetic).
    """
    q = Fraction(alpha) * n
    return -((-q.numerator) // q.denominator)


def gv_floor_exact(n: int, N: int, alpha: Fraction, eps: Fraction) -> int:
    """Exact greedy/Gilbert-Varshamov floor with the true ball volume.

    floor(floor(W/V)/n) words exist that are eps-balanced, pairwise more
    than alpha apart (tie rule above), and pairwise rotation-distinct:
    greedy selection from the W balanced words deletes at most V per pick,
    and among m pairwise-separated words some ceil(m/n) lie in distinct
    rotation classes since a class has at most n members.
    """
    W = balanced_count(n, N, eps)
    t = separation_threshold(alpha, n) - 1
    V = ball_volume(n, min(t, n), N)
    return (W // V) // n


# ------------------------------------------------- certified tail machinery


def _div_bounds(x: Fraction, p: Fraction, prec: int) -> Bounds:
    """Enclosure of D(x||p) = x*log2(x/p) + (1-x)*log2((1-x)/(1-p)), x != p."""
    x, p = Fraction(x), Fraction(p)
    if not (0 < x < 1 and 0 < p < 1):
        raise ValueError("divergence arguments must lie in (0,1)")
    terms_lo = Fraction(0)
    terms_hi = Fraction(0)
    for c, r in ((x, x / p), (1 - x, (1 - x) / (1 - p))):
        lo, hi = log2_bounds(r, prec)
        terms_lo += c * lo
        terms_hi += c * hi
    return terms_lo, terms_hi


@dataclass(frozen=True)
class SeparatedFamilyCertificate:
    """Certified threshold M for the balanced separated-word floor.

    For every n >= M the exact floor gv_floor_exact(n, N, alpha, eps) is
    at least 2^(n*g_lo/2); in particular a family of more than
    lambda^n = 2^(n*g/2) balanced, pairwise separated, rotation-distinct
    words exists at every such length.  All fields are exact rationals.
    """

    N: int
    alpha: Fraction
    eps: Fraction
    delta: Fraction
    f_lo: Fraction
    f_hi: Fraction
    g_lo: Fraction
    g_hi: Fraction
    count_exponent: Fraction  # certified words-per-length exponent G
    margin: Fraction
    tail_low_rate: Fraction  # certified exponent for the under-count tail
    tail_high_rate: Fraction  # certified exponent for the over-count tail
    M_balance: int  # from here on, balanced words exceed (1-eps)*N^n
    M_floor: int  # from here on, the floor clears 4*2^(n*G)
    M: int

    def lambda_lower(self) -> Fraction:
        """A rational lower bound for lambda = 2^(g/2) (display only)."""
        # 2^(g_lo/2) >= 1 + g_lo/4 for g_lo in (0,2): crude but certified
        return 1 + self.g_lo / 4

    def codebook_exponent_ok(self, n_log2_lower: Fraction, needed_log2: Fraction) -> bool:
        """Does n with log2(n) >= n_log2_lower certify 2^(n*g_lo/2) > 2^needed_log2?"""
        return n_log2_lower * self.g_lo / 2 > needed_log2


def certify_separated_family(
    N: int,
    alpha: Fraction,
    eps: Fraction,
    prec: int = 96,
    count_exponent: Optional[Fraction] = None,
) -> SeparatedFamilyCertificate:
    """Build the certified threshold M for separated balanced word families.

    Chain of certified facts (tests validate each against exact counts):

      V(n, ceil(alpha n)-1, N) <= (n+1) * 2^(n*f_hi)           [L1 + L2]
      #unbalanced(n) <= N * (2^(-n*D1) / (1-r1) + 2^(-n*D2) / (1-r2)) * N^n
                                                               [L1 + L3 + ratio tails]
      so for n >= M_balance:  W(n) >= (1-eps) * N^n
      and for n >= M:         floor(floor(W/V)/n) >= 2^(n*G),

    where the count exponent G defaults to g_lo/2 (i.e. lambda_lo^n words)
    and may be raised up to anything with l2_lo - f_hi - G > 0.
    """
    alpha, eps = Fraction(alpha), Fraction(eps)
    if not 0 < alpha < Fraction(N - 1, N):
        raise ValueError("alpha must lie in (0, (N-1)/N)")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    delta = pick_delta(alpha, N, prec)
    f_lo, f_hi = rate_bounds(alpha, N, prec)
    l2_lo, l2_hi = log2_bounds(Fraction(N), prec)
    g_lo = l2_lo - (1 + delta) * f_hi
    g_hi = l2_hi - (1 + delta) * f_lo
    if g_lo <= 0:
        raise ValueError("growth exponent not certified positive")
    G = g_lo / 2 if count_exponent is None else Fraction(count_exponent)
    if G < g_lo / 2:
        raise ValueError("count exponent below the lambda floor makes no sense")

    p = Fraction(1, N)
    x1 = (1 - eps) * p  # low-count boundary
    x2 = (1 + eps) * p  # high-count boundary (< 1 since eps < 1 <= N-1)
    d1_lo, _ = _div_bounds(x1, p, prec)
    d2_lo, _ = _div_bounds(x2, p, prec)
    if d1_lo <= 0 or d2_lo <= 0:
        raise ValueError("tail divergence not certified positive; raise precision")
    # term-ratio bounds: r1 dominates the low tail, r2 the high tail
    r1 = (1 - eps) * Fraction(N - 1) / (N - 1 + eps)
    r2 = (N - 1 - eps) / ((1 + eps) * (N - 1))
    assert 0 < r1 < 1 and 0 < r2 < 1

    def tail_threshold(d_lo: Fraction, r: Fraction) -> int:
        # need 2^(-n*d) / (1-r) <= eps/(2N)  <=>  n*d >= log2(2N/(eps(1-r)))
        rhs = Fraction(2 * N) / (eps * (1 - r))
        _, rhs_hi = log2_bounds(rhs, prec)
        q = rhs_hi / d_lo
        return max(1, -((-q.numerator) // q.denominator))

    M_balance = max(tail_threshold(d1_lo, r1), tail_threshold(d2_lo, r2))

    margin = l2_lo - f_hi - G
    if margin <= 0:
        raise ValueError("floor margin not certified positive")
    _, c_hi = log2_bounds(1 / (1 - eps), prec)
    C = 2 + c_hi
    # smallest power of two n0 = 2^a with n0 >= 3/margin and
    # margin*n0 >= 2*(a+1) + C; then margin*n >= 2*log2(n+1) + C propagates
    # upward because log2(1 + 1/(n+1)) <= 1.5/(n+1) <= margin/2 for n >= n0.
    a = 0
    while True:
        n0 = 1 << a
        if n0 * margin >= 3 and margin * n0 >= 2 * (a + 1) + C:
            break
        a += 1
        if a > 128:
            raise ValueError("floor threshold search exceeded 2^128")
    M_floor = n0
    M = max(M_balance, M_floor, 2)
    return SeparatedFamilyCertificate(
        N=N,
        alpha=alpha,
        eps=eps,
        delta=delta,
        f_lo=f_lo,
        f_hi=f_hi,
        g_lo=g_lo,
        g_hi=g_hi,
        count_exponent=G,
        margin=margin,
        tail_low_rate=d1_lo,
        tail_high_rate=d2_lo,
        M_balance=M_balance,
        M_floor=M_floor,
        M=M,
    )


def unbalanced_tail_bound(n: int, N: int, eps: Fraction, prec: int = 96) -> Fraction:
    """Certified upper bound on #(words violating balance)/N^n (testable)."""
    eps = Fraction(eps)
    p = Fraction(1, N)
    out = Fraction(0)
    for x, r in (
        ((1 - eps) * p, (1 - eps) * Fraction(N - 1, N - 1 + eps)),
        ((1 + eps) * p, (N - 1 - eps) / ((1 + eps) * (N - 1))),
    ):
        d_lo, _ = _div_bounds(x, p, prec)
        # 2^(-n*d_lo) as an exact rational upper bound: take dyadic floor of exponent
        q = n * d_lo
        e = q.numerator // q.denominator  # 2^(-n d) <= 2^(-e)
        out += Fraction(N, 1) * Fraction(1, 1 << e) / (1 - r)
    return out


def product_lower_bound(factors: list[Fraction], tail_sum_hi: Fraction) -> Fraction:
    """Lower bound for an infinite product prod(1-x_i): exact partial product
    times (1 - sum of the remaining x_i), using prod(1-x) >= 1 - sum x."""
    partial = Fraction(1)
    for f in factors:
        partial *= f
    if tail_sum_hi >= 1:
        raise ValueError("tail sum must be < 1")
    return partial * (1 - tail_sum_hi)


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def frac_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def frac_floor(x: Fraction) -> int:
    return x.numerator // x.denominator
