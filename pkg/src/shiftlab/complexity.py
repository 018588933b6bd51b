"""Language enumeration and block complexity for concatenation subshifts.

A `ConcatSubshift` is presented by equal-length generator words; its
points are the bi-infinite concatenations.  Every length-n window of such
a point lies inside some block of t = ceil(n/L)+1 consecutive generators,
so enumerating all k^t ordered tuples yields exactly L_n(X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from shiftlab.windows import count_distinct_windows
from shiftlab.words import Alphabet, Word

DEFAULT_WINDOW_BUDGET = 10**8

# below this many scanned characters a plain set of byte slices wins
_SMALL_SCAN = 200_000


class EnumerationBudgetExceeded(RuntimeError):
    """Raised instead of silently truncating an enumeration."""

    def __init__(self, needed: int, budget: int):
        super().__init__(
            f"enumeration needs ~{needed} windows, exceeding the budget of {budget}"
        )
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class ConcatSubshift:
    """Subshift of all bi-infinite concatenations of equal-length generators."""

    generators: tuple[Word, ...]
    meta: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("need at least one generator")
        lengths = {len(g) for g in self.generators}
        if lengths == {0}:
            raise ValueError("generators must be nonempty words")
        if len(lengths) != 1:
            raise ValueError("generators must share one length")
        if len({g.data for g in self.generators}) != len(self.generators):
            raise ValueError("generators must be pairwise distinct")
        if len({g.alphabet for g in self.generators}) != 1:
            raise ValueError("generators must share one alphabet")

    @property
    def alphabet(self) -> Alphabet:
        return self.generators[0].alphabet

    @property
    def block_length(self) -> int:
        return len(self.generators[0])

    def tuple_count(self, n: int) -> tuple[int, int]:
        """(t, k^t) for the block count t covering length-n windows."""
        t = -(-n // self.block_length) + 1
        return t, len(self.generators) ** t


def _tuple_strings(X: ConcatSubshift, t: int) -> list[bytes]:
    gens = [g.data for g in X.generators]
    return [b"".join(tup) for tup in product(gens, repeat=t)]


def _window_budget_check(X: ConcatSubshift, n: int, budget: int) -> tuple[int, int]:
    t, tuples = X.tuple_count(n)
    windows = tuples * (t * X.block_length - n + 1)
    if windows > budget:
        raise EnumerationBudgetExceeded(windows, budget)
    return t, tuples


def language(X: ConcatSubshift, n: int, budget: int = DEFAULT_WINDOW_BUDGET) -> set[Word]:
    """Exactly L_n(X), materialised as a set of words."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t, _ = _window_budget_check(X, n, budget)
    out: set[bytes] = set()
    for s in _tuple_strings(X, t):
        out.update(s[i : i + n] for i in range(len(s) - n + 1))
    ab = X.alphabet
    return {Word(b, ab) for b in out}


def complexity(X: ConcatSubshift, n: int, budget: int = DEFAULT_WINDOW_BUDGET) -> int:
    """p_X(n) = |L_n(X)|, computed without materialising words when large."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t, tuples = _window_budget_check(X, n, budget)
    strings = _tuple_strings(X, t)
    if tuples * t * X.block_length <= _SMALL_SCAN:
        return len({s[i : i + n] for s in strings for i in range(len(s) - n + 1)})
    return count_distinct_windows(strings, n, X.alphabet.size)


def complexity_table(
    X: ConcatSubshift, ns: Sequence[int], budget: int = DEFAULT_WINDOW_BUDGET
) -> list[tuple[int, int]]:
    return [(n, complexity(X, n, budget)) for n in ns]


def syndetic_gap(X: ConcatSubshift, u: Word) -> Optional[int]:
    """Certified syndeticity gap for u, or None ("not syndetic at this level").

    If u occurs inside every generator then in any concatenation two
    consecutive occurrences are separated by at most two block lengths,
    so 2L certifies the gap.  Absence from some generator yields the
    conservative verdict None, not a proof of non-syndeticity.
    """
    if len(u) > X.block_length:
        raise ValueError("pattern longer than the generator blocks")
    if all(u.data in g.data for g in X.generators):
        return 2 * X.block_length
    return None


def morse_hedlund_floor(p_values: Sequence[tuple[int, int]]) -> bool:
    """Check the plateau law on a (n, p) table: once constant, always constant."""
    plateau_at = None
    by_n = sorted(p_values)
    for (n1, p1), (n2, p2) in zip(by_n, by_n[1:]):
        if n2 == n1 + 1 and p2 == p1 and plateau_at is None:
            plateau_at = p1
        if plateau_at is not None and p2 != plateau_at:
            return False
    return True


def write_complexity_csv(path, rows: Sequence[tuple[int, int]]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("n,p\n")
        for n, p in rows:
            fh.write(f"{n},{p}\n")


def write_language_dump(path, words: set[Word]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for w in sorted(words, key=lambda x: x.data):
            fh.write(w.text() + "\n")


def ball_count_bound(n: int, L: int, k: int) -> int:
    """Trivial window-count upper bound k^t * (tL - n + 1), for budget estimates."""
    t = -(-n // L) + 1
    return k**t * (t * L - n + 1)


def binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
