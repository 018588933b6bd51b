"""The inductive two-word-to-2^k-word subshift family with superlinear
complexity targets and branchable measure statistics.

Level 1 over {0,1}:

    w_1^1 = 0...0 1   (base_n zeros),    w_2^1 = 0 1...1   (base_n ones).

Level k+1 from the level-k words w_1..w_m (m = 2^k), using step
parameters (N_k, S_k), for each 1 <= j <= m with j+1 wrapping to 1:

    w_{2j-1}^{k+1} = w_1..w_{j-1} [ (w_j)^{S_k} w_{j+1} ]^{N_k} w_{j+1}..w_m
    w_{2j}^{k+1}   = w_1..w_{j-1} [ (w_j)^{S_k+1} ]^{N_k}     w_{j+1}..w_m

Every level-(k+1) word has exactly (N_k (S_k+1) + 2^k - 1) level-k blocks
regardless of j, so the family is equal-length by construction; the
builder asserts this rather than assuming it.  The odd word periodises
(w_j)^S w_{j+1} ("type 1"), the even word periodises w_j ("type 0"); the
two periodisations are what branch points tell apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from shiftlab.complexity import (
    ConcatSubshift,
    EnumerationBudgetExceeded,
    complexity,
    DEFAULT_WINDOW_BUDGET,
)
from shiftlab.exactmath import frac_floor, product_lower_bound
from shiftlab.targets import Target
from shiftlab.words import Alphabet, Word, concat

_BINARY = Alphabet(2)
_BALANCED_ZERO = bytes((0, 1, 1, 0, 0, 1, 1, 0))  # 01100110
_BALANCED_ONE = bytes((1, 1, 1, 0, 0, 1, 0, 0))  # 11100100


@dataclass(frozen=True)
class StepParams:
    N: int
    S: int
    delta: Fraction


@dataclass(frozen=True)
class Thm1Params:
    base_n: int
    steps: tuple[StepParams, ...]
    balanced_variant: bool = False
    target: Optional[Target] = None
    M_thresholds: tuple[int, ...] = ()
    horizon: int = 0
    delta_product_lower: Optional[Fraction] = None


@dataclass(frozen=True)
class LevelFamily:
    level: int
    words: tuple[Word, ...]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        lengths = {len(w) for w in self.words}
        if len(lengths) != 1:
            raise AssertionError(f"level {self.level} words have unequal lengths {lengths}")

    @property
    def word_length(self) -> int:
        return len(self.words[0])

    @property
    def n_k(self) -> int:
        return self.word_length // 2

    def subshift(self) -> ConcatSubshift:
        return ConcatSubshift(self.words, meta={"level": self.level})


def default_delta(k: int) -> Fraction:
    """Schedule 1 - 1/(40*2^k); the infinite product exceeds 9/10."""
    return 1 - Fraction(1, 40 * (1 << k))


def certify_delta_product(deltas: Sequence[Fraction], schedule_depth: int) -> Fraction:
    """Certified lower bound for the infinite product of the default
    schedule continuing after the given explicit factors."""
    tail_sum = Fraction(1, 40 * (1 << schedule_depth))
    return product_lower_bound([Fraction(d) for d in deltas], tail_sum)


def base_level(base_n: int, balanced_variant: bool = False) -> LevelFamily:
    """w_1^1 = 0^base_n 1 and w_2^1 = 0 1^base_n, optionally with the
    letter-balancing substitution 0 -> 01100110, 1 -> 11100100."""
    if base_n < 2:
        raise ValueError("base parameter must be >= 2")
    w1 = bytes(base_n) + bytes((1,))
    w2 = bytes((0,)) + bytes((1,)) * base_n
    if balanced_variant:
        table = {0: _BALANCED_ZERO, 1: _BALANCED_ONE}
        w1 = b"".join(table[s] for s in w1)
        w2 = b"".join(table[s] for s in w2)
    return LevelFamily(
        level=1,
        words=(Word(w1, _BINARY), Word(w2, _BINARY)),
        provenance={"base_n": base_n, "balanced_variant": balanced_variant},
    )


def next_level(family: LevelFamily, N: int, S: int) -> LevelFamily:
    """One inductive step; requires N > |w_1^k| * 2^k (the distinctness bound)."""
    m = len(family.words)
    k = family.level
    L = family.word_length
    if N <= L * m:
        raise ValueError(f"step needs N > |w_1^{k}| * 2^{k} = {L * m}, got N = {N}")
    if S < 1:
        raise ValueError("S must be >= 1")
    words = list(family.words)
    out: list[Word] = []
    for j in range(1, m + 1):
        wj = words[j - 1]
        wj_next = words[j % m]  # j+1 wraps to 1
        prefix = words[: j - 1]
        suffix = words[j:]
        unit_loud = concat([wj.times(S), wj_next])
        unit_still = wj.times(S + 1)
        out.append(concat(prefix + [unit_loud.times(N)] + suffix))
        out.append(concat(prefix + [unit_still.times(N)] + suffix))
    expected = (N * (S + 1) + m - 1) * L
    for w in out:
        if len(w) != expected:
            raise AssertionError("level words came out with unequal lengths")
    return LevelFamily(
        level=k + 1,
        words=tuple(out),
        provenance={"N": N, "S": S, "parent_level": k},
    )


@dataclass(frozen=True)
class DistinctnessCertificate:
    level: int
    window_length: int
    pairs: tuple[tuple[int, int, bool], ...]

    @property
    def positive(self) -> bool:
        return all(ok for _, _, ok in self.pairs)


def verify_distinct_subwords(family: LevelFamily) -> DistinctnessCertificate:
    """Scan result per pair: is some full-length window shared by the two
    doubled words?  (Equivalently: are the words cyclic rotations?)"""
    words = family.words
    pairs = []
    for j in range(len(words)):
        doubled = words[j].data + words[j].data
        for i in range(j + 1, len(words)):
            pairs.append((j, i, words[i].data not in doubled))
    return DistinctnessCertificate(
        level=family.level, window_length=family.word_length, pairs=tuple(pairs)
    )


def verify_containment(lower: LevelFamily, upper: LevelFamily) -> bool:
    """Every lower-level word occurs inside every upper-level word."""
    return all(w.data in W.data for w in lower.words for W in upper.words)


@dataclass(frozen=True)
class ComplexityCertificate:
    level: int
    n_k: int
    exact: Optional[int]  # None when the enumeration budget was exceeded
    claimed_step1: Optional[int]  # the quoted 4 n_1 - 2, recorded at level 1
    three_term: Optional[int]
    headline: int
    ordered_junction_bound: Optional[int]
    exact_le_three_term: Optional[bool]
    exact_le_headline: Optional[bool]
    exact_le_ordered: Optional[bool]
    note: str = ""


def complexity_certificate(
    family: LevelFamily,
    step: Optional[StepParams] = None,
    parent_length: Optional[int] = None,
    budget: int = DEFAULT_WINDOW_BUDGET,
) -> ComplexityCertificate:
    """Exact p(n_k) against the quoted bounds, reporting which hold.

    The three-term bound counts junction words over unordered word pairs;
    the enumeration shows ordered pairs (including self-junctions) occur,
    so the certificate also records the (2^k)^2-junction variant.
    """
    k = family.level
    m = len(family.words)
    n_k = family.n_k
    headline = (math.comb(m, 2) + 1) * n_k
    three_term = None
    ordered = None
    if step is not None and parent_length is not None:
        three_term = m * (step.S + 1) * parent_length + m * parent_length + math.comb(m, 2) * n_k
        # periodic phases + prefix/suffix starts + junction words over ordered
        # pairs including self-junctions (which the enumeration shows occur)
        ordered = (
            m * (step.S + 1) * parent_length
            + 2 * m * (m - 1) * parent_length
            + m * m * n_k
        )
    claimed = 4 * n_k - 2 if k == 1 and not family.provenance.get("balanced_variant") else None
    note = ""
    try:
        exact = complexity(family.subshift(), n_k, budget=budget)
    except EnumerationBudgetExceeded as exc:
        exact = None
        note = f"structural bound only: {exc}"
    return ComplexityCertificate(
        level=k,
        n_k=n_k,
        exact=exact,
        claimed_step1=claimed,
        three_term=three_term,
        headline=headline,
        ordered_junction_bound=ordered,
        exact_le_three_term=None if exact is None or three_term is None else exact <= three_term,
        exact_le_headline=None if exact is None else exact <= headline,
        exact_le_ordered=None if exact is None or ordered is None else exact <= ordered,
        note=note,
    )


class HorizonExhausted(ValueError):
    pass


def _least_uniform_index(target: Target, bound: int, horizon: int) -> int:
    """Least m with target(n) > bound*n for every n in [m, horizon]."""
    last_bad = 0
    for n in range(1, horizon + 1):
        if target(n) <= bound * n:
            last_bad = n
    if last_bad >= horizon:
        raise HorizonExhausted(
            f"target sequence not verifiably superlinear by horizon {horizon}"
            f" (needs p_n > {bound} n)"
        )
    return last_bad + 1


def auto_params(
    target: Target,
    k_max: int,
    deltas: Optional[Sequence[Fraction]] = None,
    horizon: int = 1_000_000,
) -> Thm1Params:
    """Smallest admissible parameters for a family materialised to level
    k_max, against the complexity target: per step k, the least N_k with
    N_k > |w_1^k| 2^k and N_k > 2 N_{k-1}, the least S_k meeting the
    delta_k frequency bound N_k S_k |w^k| / |w^{k+1}| > delta_k, bumping
    N_k until n_{k+1} > M_{k+1}."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if deltas is None:
        deltas = [default_delta(k) for k in range(1, k_max + 1)]
    deltas = [Fraction(d) for d in deltas]
    if len(deltas) < k_max:
        raise ValueError("need a delta for every step")
    M = [
        _least_uniform_index(target, k * (math.comb(1 << k, 2) + 1), horizon)
        for k in range(1, k_max + 1)
    ]
    base_n = 2 * (M[0] + 1)  # least n_1 = floor(base/2) > M_1
    base_n = max(base_n, 2)
    steps: list[StepParams] = []
    L = base_n + 1
    prev_N = base_n
    for k in range(1, k_max):
        m = 1 << k
        delta = deltas[k - 1]
        N = max(L * m + 1, 2 * prev_N + 1)
        while True:
            # least S with N*S/(N*(S+1)+m-1) > delta
            c = m - 1
            s_min = frac_floor(delta * (N + c) / (N * (1 - delta))) + 1
            S = max(1, s_min)
            if Fraction(N * S, N * (S + 1) + c) <= delta:
                S += 1
            assert Fraction(N * S, N * (S + 1) + c) > delta
            length = (N * (S + 1) + m - 1) * L
            if length // 2 > M[k]:
                break
            N += 1
        steps.append(StepParams(N=N, S=S, delta=delta))
        L = (N * (S + 1) + m - 1) * L
        prev_N = N
    return Thm1Params(
        base_n=base_n,
        steps=tuple(steps),
        target=target,
        M_thresholds=tuple(M),
        horizon=horizon,
        delta_product_lower=certify_delta_product(deltas[: k_max - 1], k_max - 1),
    )


def build_levels(
    params: Thm1Params, up_to: Optional[int] = None, balanced_variant: Optional[bool] = None
) -> list[LevelFamily]:
    depth = len(params.steps) + 1 if up_to is None else up_to
    if balanced_variant is None:
        balanced_variant = params.balanced_variant
    families = [base_level(params.base_n, balanced_variant)]
    for step in params.steps[: depth - 1]:
        families.append(next_level(families[-1], step.N, step.S))
    return families


def frequency_lower_bound(family: LevelFamily, step: StepParams) -> Fraction:
    """N S |w^k| / |w^{k+1}| for the step out of this family, exact."""
    m = len(family.words)
    return Fraction(step.N * step.S, step.N * (step.S + 1) + m - 1)


# ------------------------------------------------------------- branch points


class RotationUnion:
    """The set of all cyclic rotations of one word, queried positionally.

    Stands in for the shifted-cylinder unions of the measure argument:
    a length-|U| window lies in the union exactly when it occurs in UU.
    """

    def __init__(self, unit: Word):
        self.unit = unit
        self._doubled = unit.data + unit.data

    @property
    def length(self) -> int:
        return len(self.unit)

    def contains(self, window: bytes) -> bool:
        return len(window) == self.length and window in self._doubled

    def frequency_in(self, x: Word) -> Fraction:
        L = self.length
        if L > len(x):
            raise ValueError("point shorter than the pattern length")
        data = x.data
        total = len(x) - L + 1
        hits = sum(1 for i in range(total) if data[i : i + L] in self._doubled)
        return Fraction(hits, total)

    def words(self) -> set[Word]:
        """Materialised rotation set (small units only; oracle use)."""
        L = self.length
        return {Word(self._doubled[i : i + L], self.unit.alphabet) for i in range(L)}


def branch_indices(bits: Sequence[int]) -> list[int]:
    """Active word index (1-based) at each stage along a branch.

    Stage 1 starts at w_1; type 0 at stage t hands to w_{2i} at level t+1,
    type 1 to w_{2i-1}.
    """
    idx = [1]
    for b in bits[:-1]:
        idx.append(2 * idx[-1] if b == 0 else 2 * idx[-1] - 1)
    return idx


def branch_unit(
    families: Sequence[LevelFamily], steps: Sequence[StepParams], bits: Sequence[int]
) -> Word:
    """The periodised unit selected by the final branch choice."""
    T = len(bits)
    if T < 1:
        raise ValueError("need at least one branch bit")
    if T > len(families) or T > len(steps):
        raise ValueError(f"branch depth {T} exceeds materialised levels")
    idx = branch_indices(bits)
    fam = families[T - 1]
    i = idx[-1]
    m = len(fam.words)
    w = fam.words[i - 1]
    S = steps[T - 1].S
    if bits[-1] == 0:
        return w.times(S + 1)
    w_next = fam.words[i % m]
    return concat([w.times(S), w_next])


def branch_point(
    families: Sequence[LevelFamily],
    steps: Sequence[StepParams],
    bits: Sequence[int],
    length: int,
) -> Word:
    """Leading `length` symbols of the periodic point following the branch."""
    unit = branch_unit(families, steps, bits)
    reps = -(-length // len(unit))
    return Word((unit.data * reps)[:length], unit.alphabet)


def stage_union(
    families: Sequence[LevelFamily],
    steps: Sequence[StepParams],
    bits: Sequence[int],
    stage: int,
) -> RotationUnion:
    """The designated cylinder union distinguishing the stage-`stage` choice."""
    if not 1 <= stage <= len(bits):
        raise ValueError("stage out of range")
    return RotationUnion(branch_unit(families, steps, bits[:stage]))


def stage_short_union(
    families: Sequence[LevelFamily], bits: Sequence[int], stage: int
) -> RotationUnion:
    """Rotations of the active stage word itself (the short pattern set)."""
    idx = branch_indices(bits[:stage])
    fam = families[stage - 1]
    return RotationUnion(fam.words[idx[-1] - 1])
