"""Liouville / Moebius sequence generation and window complexity.

Sieves are vectorised prime-power accumulation passes (identical output
to a smallest-prime-factor walk, but array-friendly); a tiny trial-
division oracle backs the tests.  Window counting rides on the exact
counters in `shiftlab.windows`.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from shiftlab.windows import count_distinct_windows, naive_count
from shiftlab.words import Alphabet, Word

MEMORY_BUDGET = 200_000_000  # values per sieve call

_MAGIC = b"SHSQ"


@dataclass(frozen=True)
class ArithmeticSequence:
    """Values of a {-1,0,1}-valued arithmetic function on 1..n_max.

    Stored as symbols 0..2 via value+1; `values` recovers the signs.
    """

    kind: str
    n_max: int
    symbols: np.ndarray  # uint8, symbols[i] = f(i+1) + 1

    @property
    def values(self) -> np.ndarray:
        return self.symbols.astype(np.int8) - 1

    def word(self, length: int | None = None) -> Word:
        length = self.n_max if length is None else length
        return Word(self.symbols[:length].tobytes(), Alphabet(3))

    def __len__(self) -> int:
        return self.n_max


def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def liouville(n_max: int) -> ArithmeticSequence:
    """lambda(n) = (-1)^Omega(n) for 1 <= n <= n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > MEMORY_BUDGET:
        raise MemoryError(f"n_max {n_max} exceeds the sieve budget {MEMORY_BUDGET}")
    omega = np.zeros(n_max + 1, dtype=np.uint8)  # Omega mod 2 only matters
    for p in _primes_upto(n_max):
        pk = p
        while pk <= n_max:
            omega[pk::pk] += 1
            pk *= p
    lam = np.where(omega[1:] & 1, -1, 1).astype(np.int8)
    return ArithmeticSequence("liouville", n_max, (lam + 1).astype(np.uint8))


def mobius(n_max: int) -> ArithmeticSequence:
    """mu(n): 0 on non-squarefree n, else (-1)^(number of prime factors)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > MEMORY_BUDGET:
        raise MemoryError(f"n_max {n_max} exceeds the sieve budget {MEMORY_BUDGET}")
    mu = np.ones(n_max + 1, dtype=np.int8)
    for p in _primes_upto(n_max):
        mu[p::p] *= -1
        sq = p * p
        if sq <= n_max:
            mu[sq::sq] = 0
    return ArithmeticSequence("mobius", n_max, (mu[1:] + 1).astype(np.uint8))


def custom_sequence(values: Sequence[int], kind: str = "custom") -> ArithmeticSequence:
    arr = np.asarray(values, dtype=np.int8)
    if arr.min(initial=0) < -1 or arr.max(initial=0) > 1:
        raise ValueError("values must lie in {-1, 0, 1}")
    return ArithmeticSequence(kind, len(arr), (arr + 1).astype(np.uint8))


def seq_complexity(s: ArithmeticSequence, n: int) -> int:
    """Number of distinct length-n contiguous windows in the sequence.

    This contiguous-block count differs from the block complexity of the
    one-sided-padded subshift by at most n.
    """
    if not 1 <= n <= s.n_max:
        raise ValueError("window length out of range")
    return count_distinct_windows([s.symbols.tobytes()], n, alphabet_size=3)


def seq_complexity_naive(s: ArithmeticSequence, n: int) -> int:
    return naive_count([s.symbols.tobytes()], n)


def growth_report(s: ArithmeticSequence, n_range: Sequence[int]) -> list[dict]:
    rows = []
    for n in n_range:
        c = seq_complexity(s, n)
        rows.append(
            {
                "n": n,
                "count": c,
                "count_over_n": str(Fraction(c, n)),
                "count_over_n2": str(Fraction(c, n * n)),
            }
        )
    return rows


def save_sequence(path, s: ArithmeticSequence) -> None:
    """Compact cache: magic, header length, JSON header, one byte per value."""
    header = json.dumps({"kind": s.kind, "n_max": s.n_max}, sort_keys=True).encode("ascii")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(s.symbols.tobytes())


def load_sequence(path) -> ArithmeticSequence:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError("not a sequence cache file")
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen).decode("ascii"))
        data = np.frombuffer(fh.read(), dtype=np.uint8)
    if len(data) != header["n_max"]:
        raise ValueError("cache payload length mismatch")
    return ArithmeticSequence(header["kind"], header["n_max"], data)


def factor_oracle(n: int) -> list[int]:
    """Trial-division prime factors with multiplicity (test oracle)."""
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out
