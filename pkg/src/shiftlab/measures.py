"""Empirical window measures, Hamming-ball covering numbers, and the
quiet-phase mass certificate.

An `EmpiricalMeasure` is the frequency table of the length-n windows of a
long finite sample; it stands in for an ergodic measure wherever the
constructions would invoke the pointwise ergodic theorem.  Masses are
exact rationals over the window-count denominator.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from shiftlab.complexity import ConcatSubshift
from shiftlab.words import Alphabet, Word, hamming

__all__ = [
    "EmpiricalMeasure",
    "CoverResult",
    "sample_point",
    "empirical_measure",
    "quiet_bound_check",
    "covering_number",
    "find_common_point",
    "slow_entropy_report",
    "LemmaHypothesisError",
]


class LemmaHypothesisError(ValueError):
    """A combinatorial lemma was invoked outside its hypothesis."""


@dataclass
class EmpiricalMeasure:
    """Window frequencies of one sample word; keys are raw symbol strings."""

    n: int
    counts: Counter
    total: int
    alphabet: Alphabet
    provenance: dict = field(default_factory=dict)

    def freq(self, w: Word) -> Fraction:
        return Fraction(self.counts.get(w.data, 0), self.total)

    def mass(self, patterns: Iterable[Word]) -> Fraction:
        keys = {p.data for p in patterns}
        return Fraction(sum(c for b, c in self.counts.items() if b in keys), self.total)

    def support(self) -> list[Word]:
        return [Word(b, self.alphabet) for b in sorted(self.counts)]

    def total_mass(self) -> Fraction:
        return Fraction(sum(self.counts.values()), self.total)


def sample_point(
    X: ConcatSubshift,
    length: int,
    seed: int,
    weights: Optional[Sequence[Fraction]] = None,
) -> Word:
    """Seeded random generator concatenation truncated to `length` symbols."""
    gens = [g.data for g in X.generators]
    if weights is None:
        weights = [Fraction(1, len(gens))] * len(gens)
    if len(weights) != len(gens):
        raise ValueError("one weight per generator required")
    if sum(Fraction(w) for w in weights) != 1:
        raise ValueError("weights must sum to 1")
    rng = random.Random(seed)
    cum = []
    acc = Fraction(0)
    for w in weights:
        acc += Fraction(w)
        cum.append(acc)
    parts = []
    size = 0
    while size < length:
        r = Fraction(rng.getrandbits(53), 1 << 53)
        idx = next(i for i, c in enumerate(cum) if r < c or i == len(cum) - 1)
        parts.append(gens[idx])
        size += len(gens[idx])
    return Word(b"".join(parts)[:length], X.alphabet)


def empirical_measure(x: Word, n: int, provenance: Optional[dict] = None) -> EmpiricalMeasure:
    if not 1 <= n <= len(x):
        raise ValueError("window length out of range")
    data = x.data
    total = len(data) - n + 1
    counts = Counter(data[i : i + n] for i in range(total))
    return EmpiricalMeasure(
        n=n, counts=counts, total=total, alphabet=x.alphabet, provenance=provenance or {}
    )


@dataclass(frozen=True)
class QuietCertificate:
    mass: Fraction
    bound: Fraction
    slack: Fraction
    passed: bool
    pattern_count: int

    def to_json(self) -> dict:
        return {
            "mass": str(self.mass),
            "bound": str(self.bound),
            "slack": str(self.slack),
            "passed": self.passed,
            "pattern_count": self.pattern_count,
        }


def quiet_bound_check(
    m: EmpiricalMeasure,
    generators: Sequence[Word],
    P: int,
    N: int,
    M: int,
    slack: Optional[Fraction] = None,
) -> QuietCertificate:
    """Check the periodised-generator mass bound mu(W_P) >= 1 - (P-1)/(NM).

    W_P is the set of length-P subwords of the generators v_i (each of
    length N*M, built as M-fold repetitions of a length-N word).  The
    empirical stand-in is charged an explicit boundary slack; both sides
    are recorded exactly.
    """
    if not 1 <= P < N * M:
        raise ValueError(f"P must lie in [1, N*M) = [1, {N * M})")
    if m.n != P:
        raise ValueError("measure window length must equal P")
    for v in generators:
        if len(v) != N * M:
            raise ValueError("generators must have length N*M")
    patterns: set[bytes] = set()
    for v in generators:
        data = v.data
        patterns.update(data[i : i + P] for i in range(len(data) - P + 1))
    mass = Fraction(sum(c for b, c in m.counts.items() if b in patterns), m.total)
    bound = 1 - Fraction(P - 1, N * M)
    if slack is None:
        slack = Fraction(2 * N * M, m.total)
    passed = mass >= bound - slack
    return QuietCertificate(
        mass=mass, bound=bound, slack=Fraction(slack), passed=passed, pattern_count=len(patterns)
    )


@dataclass(frozen=True)
class CoverResult:
    centers: tuple[Word, ...]
    covered_mass: Fraction
    epsilon: Fraction
    method: str


def _ball_members(center: Word, universe: Sequence[Word], eps: Fraction) -> set[bytes]:
    return {v.data for v in universe if hamming(center, v) < eps}


def covering_number(
    m: EmpiricalMeasure,
    eps: Fraction,
    universe: Sequence[Word],
    method: str = "exact",
    exact_limit: int = 16,
) -> CoverResult:
    """Minimum (exact) or greedy number of strict-eps Hamming balls with
    centers in `universe` whose union carries mass > 1 - eps."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    universe = sorted(universe, key=lambda w: w.data)
    udata = {w.data for w in universe}
    for b in m.counts:
        if b not in udata:
            raise ValueError("universe does not contain the measure's support")
    need = 1 - eps  # strict: covered mass must exceed this
    balls = [_ball_members(u, universe, eps) for u in universe]
    masses = [Fraction(sum(m.counts.get(b, 0) for b in ball), m.total) for ball in balls]

    if method == "exact":
        if len(universe) > exact_limit:
            raise ValueError(
                f"exact covering beyond {exact_limit} universe words; use method='greedy'"
            )
        for k in range(1, len(universe) + 1):
            for combo in combinations(range(len(universe)), k):
                covered = set().union(*(balls[i] for i in combo))
                mass = Fraction(sum(m.counts.get(b, 0) for b in covered), m.total)
                if mass > need:
                    return CoverResult(
                        centers=tuple(universe[i] for i in combo),
                        covered_mass=mass,
                        epsilon=eps,
                        method="exact",
                    )
        raise ValueError("no cover exists: the universe cannot reach the target mass")

    if method != "greedy":
        raise ValueError("method must be 'exact' or 'greedy'")
    chosen: list[int] = []
    covered: set[bytes] = set()
    mass = Fraction(0, 1)
    while mass <= need:
        best = None
        best_gain = Fraction(-1)
        for i in range(len(universe)):
            if i in chosen:
                continue
            gain = Fraction(sum(m.counts.get(b, 0) for b in balls[i] - covered), m.total)
            if gain > best_gain:  # ties resolve to the lexicographically least center
                best, best_gain = i, gain
        if best is None or best_gain <= 0:
            raise ValueError("greedy cover stalled below the target mass")
        chosen.append(best)
        covered |= balls[best]
        mass = Fraction(sum(m.counts.get(b, 0) for b in covered), m.total)
    return CoverResult(
        centers=tuple(universe[i] for i in chosen),
        covered_mass=mass,
        epsilon=eps,
        method="greedy",
    )


def find_common_point(sets: Sequence[set[int]], n: int) -> tuple[tuple[int, ...], int]:
    """Given 2k-1 subsets of {1..n} each of size >= n/2, return k set
    indices sharing one point s (guaranteed to exist by double counting)."""
    count = len(sets)
    if count < 1 or count % 2 == 0:
        raise ValueError("need an odd number 2k-1 of sets")
    k = (count + 1) // 2
    for i, A in enumerate(sets):
        if not A <= set(range(1, n + 1)):
            raise ValueError(f"set {i} is not a subset of 1..{n}")
        if 2 * len(A) < n:
            raise LemmaHypothesisError(f"lemma hypothesis |A_i| >= n/2 fails at i={i}")
    multiplicity: Counter = Counter()
    for A in sets:
        multiplicity.update(A)
    s, mult = max(multiplicity.items(), key=lambda kv: (kv[1], -kv[0]))
    if mult < k:
        # impossible under the hypothesis: the double count
        # sum |A_i| <= n(k-1) < n(2k-1)/2 would have to hold
        total = sum(len(A) for A in sets)
        raise AssertionError(
            f"counting identity violated: sum|A_i|={total} <= {n * (k - 1)} cannot happen"
        )
    indices = tuple(i for i, A in enumerate(sets) if s in A)[:k]
    return indices, s


def slow_entropy_report(
    checkpoints: Sequence[tuple[int, Fraction, int]],
    a_seq,
    b_seq,
) -> list[dict]:
    """Tabulate K/a_n and K/b_n ratios at checkpoint scales (descriptive only)."""
    rows = []
    for n, eps, K in checkpoints:
        a_n, b_n = a_seq(n), b_seq(n)
        rows.append(
            {
                "n": n,
                "eps": str(Fraction(eps)),
                "K": K,
                "a_n": a_n,
                "b_n": b_n,
                "K_over_a": str(Fraction(K, a_n)),
                "K_over_b": str(Fraction(K, b_n)),
            }
        )
    return rows
