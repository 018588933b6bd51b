"""Finite words over small integer alphabets and their Hamming geometry.

Words are immutable byte strings tagged with an alphabet; symbols are the
integers 0..N-1.  All frequencies and distances are exact `Fraction`s so
that downstream certificates never compare floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class Alphabet:
    """Symbol set {0, .., size-1}; rendering to {1..N} is a report-layer concern."""

    size: int

    def __post_init__(self) -> None:
        if not 1 <= self.size <= 256:
            raise ValueError(f"alphabet size must be in [1, 256], got {self.size}")


@dataclass(frozen=True)
class Word:
    """A finite symbol sequence over an alphabet."""

    data: bytes
    alphabet: Alphabet

    def __post_init__(self) -> None:
        if self.data and max(self.data) >= self.alphabet.size:
            raise ValueError("symbol out of alphabet range")

    def __len__(self) -> int:
        return len(self.data)

    def __getitem__(self, i: int) -> int:
        return self.data[i]

    def __iter__(self):
        return iter(self.data)

    @staticmethod
    def from_symbols(symbols: Iterable[int], alphabet: Alphabet) -> "Word":
        return Word(bytes(symbols), alphabet)

    @staticmethod
    def from_text(text: str, alphabet: Optional[Alphabet] = None) -> "Word":
        """Parse a digit/letter string ('0110', '2a1'); commas allow symbols >= 36."""
        if "," in text:
            symbols = [int(t) for t in text.split(",") if t != ""]
        else:
            symbols = [_DIGITS.index(ch) for ch in text]
        if alphabet is None:
            alphabet = Alphabet(max(symbols, default=0) + 1)
        return Word.from_symbols(symbols, alphabet)

    def text(self) -> str:
        if self.alphabet.size <= len(_DIGITS):
            return "".join(_DIGITS[s] for s in self.data)
        return ",".join(str(s) for s in self.data)

    def __repr__(self) -> str:
        body = self.text() if len(self) <= 40 else self.text()[:37] + "..."
        return f"Word({body!r}, N={self.alphabet.size})"

    def times(self, k: int) -> "Word":
        """k-fold self-concatenation."""
        if k < 0:
            raise ValueError("repetition count must be >= 0")
        return Word(self.data * k, self.alphabet)

    def count(self, symbol: int) -> int:
        return self.data.count(symbol)


def concat(parts: Sequence[Word], alphabet: Optional[Alphabet] = None) -> Word:
    """Concatenate words sharing one alphabet; concat([]) is the empty word."""
    if not parts:
        return Word(b"", alphabet if alphabet is not None else Alphabet(1))
    ab = parts[0].alphabet
    for p in parts:
        if p.alphabet != ab:
            raise ValueError("concat over mixed alphabets")
    if alphabet is not None and alphabet != ab:
        raise ValueError("concat over mixed alphabets")
    return Word(b"".join(p.data for p in parts), ab)


def mismatches(u: Word, v: Word) -> int:
    """Number of positions where u and v differ (|u| = |v| required)."""
    if len(u) != len(v):
        raise ValueError("mismatch count needs equal lengths")
    if len(u) == 0:
        raise ValueError("mismatch count needs length >= 1")
    if u.data == v.data:
        return 0
    a = np.frombuffer(u.data, dtype=np.uint8)
    b = np.frombuffer(v.data, dtype=np.uint8)
    return int(np.count_nonzero(a != b))


def hamming(u: Word, v: Word) -> Fraction:
    """Normalised Hamming distance |{i : u_i != v_i}| / |u| as an exact rational."""
    return Fraction(mismatches(u, v), len(u))


def subwords(w: Word, n: int) -> set[Word]:
    """The set of distinct length-n contiguous windows of w."""
    if not 1 <= n <= len(w):
        raise ValueError(f"window length {n} out of range [1, {len(w)}]")
    seen = {w.data[i : i + n] for i in range(len(w) - n + 1)}
    return {Word(b, w.alphabet) for b in seen}


def least_rotation(data: bytes) -> bytes:
    """Lexicographically least cyclic rotation (Booth's algorithm, O(n))."""
    if not data:
        return data
    s = data + data
    n = len(data)
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return s[k : k + n]


def rotation_canon(w: Word) -> Word:
    return Word(least_rotation(w.data), w.alphabet)


def common_doubled_window(u: Word, v: Word) -> bool:
    """Slow oracle: does some length-|u| word occur in both uu and vv?

    For equal-length words this holds exactly when u is a cyclic rotation
    of v, which reduces to one substring scan of the doubled word.
    """
    if len(u) != len(v) or len(u) == 0:
        raise ValueError("doubled-window test needs equal lengths >= 1")
    if u.alphabet != v.alphabet:
        raise ValueError("doubled-window test over mixed alphabets")
    return u.data in (v.data + v.data)


def rotation_distinct(u: Word, v: Word) -> bool:
    """True iff no length-|u| word occurs as a subword of both uu and vv.

    Implemented via canonical least rotations; `common_doubled_window` is
    the independent scan oracle kept for cross-checking.
    """
    if len(u) != len(v) or len(u) == 0:
        raise ValueError("rotation_distinct needs equal lengths >= 1")
    if u.alphabet != v.alphabet:
        raise ValueError("rotation_distinct over mixed alphabets")
    return least_rotation(u.data) != least_rotation(v.data)


def occurrence_frequency(pattern_set: Iterable[Word], w: Word) -> Fraction:
    """Fraction of length-n window start positions of w whose window is in the set.

    All patterns must share one length n <= |w|.  An empty set has frequency 0.
    """
    patterns = {p.data for p in pattern_set}
    if not patterns:
        return Fraction(0)
    lengths = {len(p) for p in patterns}
    if len(lengths) != 1:
        raise ValueError("pattern set mixes lengths")
    n = lengths.pop()
    if n == 0 or n > len(w):
        raise ValueError("pattern length out of range")
    total = len(w) - n + 1
    data = w.data
    hits = sum(1 for i in range(total) if data[i : i + n] in patterns)
    return Fraction(hits, total)
