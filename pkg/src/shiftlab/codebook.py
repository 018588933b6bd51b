"""Balanced, Hamming-separated, rotation-distinct word families.

`build_codebook` realises the greedy lower-bound witness (the GV-style
floor), `verify_codebook` is the independent checker re-deriving every
constraint from words-core primitives, and `growth_params` packages the
rate quantities (f, delta, g, lambda, M) in float form for reports.
Certification-grade bounds live in `shiftlab.exactmath`.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from shiftlab.exactmath import (
    balance_window,
    balanced_count,
    ball_volume,
    gv_floor_exact,
    separation_threshold,
)
from shiftlab.words import Alphabet, Word, common_doubled_window, hamming, least_rotation

__all__ = [
    "CodebookSpec",
    "RateReport",
    "CodebookResult",
    "rate_function",
    "growth_params",
    "ball_volume",
    "balanced_count",
    "gv_floor_exact",
    "build_codebook",
    "verify_codebook",
    "write_codebook",
    "read_codebook",
]

_GUARD = 2.0**-20  # float guard margin for (1+delta) f(alpha) < log2 N


@dataclass(frozen=True)
class CodebookSpec:
    N: int
    n: int
    alpha: Fraction
    eps: Fraction

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ValueError("alphabet size must be >= 2")
        if self.n < 1:
            raise ValueError("word length must be >= 1")
        a = Fraction(self.alpha)
        if not 0 < a < Fraction(self.N - 1, self.N):
            raise ValueError(f"alpha must lie in (0, {self.N - 1}/{self.N})")
        if not 0 < Fraction(self.eps) < 1:
            raise ValueError("eps must lie in (0, 1)")


@dataclass(frozen=True)
class RateReport:
    f_alpha: float
    delta: float
    g: float
    lam: float
    M: int

    def to_json(self) -> dict:
        return {
            "f_alpha": self.f_alpha,
            "delta": self.delta,
            "g": self.g,
            "lambda": self.lam,
            "M": self.M,
        }


def rate_function(x: float, N: int) -> float:
    """f(x) = x log2(N-1) - x log2 x - (1-x) log2(1-x), extended by f(0)=0."""
    if x == 0:
        return 0.0
    if not 0 < x < 1:
        raise ValueError("rate function needs x in (0,1) (or the x=0 limit)")
    return x * math.log2(N - 1) - x * math.log2(x) - (1 - x) * math.log2(1 - x)


def growth_params(spec: CodebookSpec, search_cap: int = 20000) -> RateReport:
    """Pick delta = largest 2^-j with (1+delta) f(alpha) < log2 N (guarded),
    set g and lambda, and find the least M where the exact ball volume drops
    below 2^(n (1+delta) f(alpha)) and the floor k(n) clears lambda^n."""
    f = rate_function(float(spec.alpha), spec.N)
    log2N = math.log2(spec.N)
    delta = None
    for j in range(1, 64):
        d = 2.0**-j
        if (1 + d) * f < log2N - _GUARD:
            delta = d
            break
    if delta is None:
        raise ValueError("no float-guarded delta exists; alpha too close to (N-1)/N")
    g = log2N - (1 + delta) * f
    lam = 2.0 ** (g / 2)
    log_one_minus_eps = math.log2(1 - float(spec.eps))
    M = None
    for n in range(1, search_cap + 1):
        t = separation_threshold(spec.alpha, n) - 1
        vol_ok = math.log2(ball_volume(n, min(t, n), spec.N)) < n * (1 + delta) * f
        # paper floor k(n) = (1/n) * floor((1-eps) N^n / 2^(n(1+delta)f)) >= lambda^n
        floor_ok = log_one_minus_eps + n * g - math.log2(n) >= n * g / 2
        if vol_ok and floor_ok:
            M = n
            break
    if M is None:
        raise ValueError(f"no threshold M found below {search_cap}")
    return RateReport(f_alpha=f, delta=delta, g=g, lam=lam, M=M)


@dataclass
class CodebookResult:
    spec: CodebookSpec
    words: list[Word]
    seed: int
    mode: str
    partial: bool
    candidates_tried: int
    report: Optional[RateReport] = None

    @property
    def size(self) -> int:
        return len(self.words)


def _balanced_counts(data: bytes, N: int, j_min: int, j_max: int) -> bool:
    for a in range(N):
        if not j_min <= data.count(a) <= j_max:
            return False
    return True


def build_codebook(
    spec: CodebookSpec,
    seed: int = 0,
    mode: str = "auto",
    exhaustive_budget: int = 1 << 22,
    max_candidates: int = 500_000,
    target_size: Optional[int] = None,
    with_report: bool = True,
) -> CodebookResult:
    """Greedy maximal selection: accept a candidate iff it is strictly
    eps-balanced, at mismatch count >= ceil(alpha n) from every accepted
    word, and in a fresh rotation class.

    Exhaustive mode walks all N^n words in lexicographic order; sampling
    mode draws seeded uniform candidates and returns a flagged partial
    codebook when the candidate budget runs out.
    """
    N, n = spec.N, spec.n
    thr = separation_threshold(spec.alpha, n)
    j_min, j_max = balance_window(n, N, spec.eps)
    j_min, j_max = max(j_min, 0), min(j_max, n)
    space = N**n
    if mode == "auto":
        mode = "exhaustive" if space <= exhaustive_budget else "sampling"
    if mode == "exhaustive" and space > exhaustive_budget:
        raise ValueError(f"exhaustive space {space} exceeds budget {exhaustive_budget}")

    ab = Alphabet(N)
    accepted: list[bytes] = []
    canons: set[bytes] = set()
    tried = 0
    partial = False

    if N == 2:
        accepted_ints: list[int] = []

        def try_candidate_bits(x: int) -> None:
            ones = x.bit_count()
            if not (j_min <= n - ones <= j_max and j_min <= ones <= j_max):
                return
            word = bytes((x >> (n - 1 - i)) & 1 for i in range(n))
            canon = least_rotation(word)
            if canon in canons:
                return
            for a in accepted_ints:
                if (x ^ a).bit_count() < thr:
                    return
            accepted_ints.append(x)
            accepted.append(word)
            canons.add(canon)

        if mode == "exhaustive":
            for x in range(space):
                tried += 1
                try_candidate_bits(x)
                if target_size is not None and len(accepted) >= target_size:
                    break
        else:
            rng = random.Random(seed)
            while tried < max_candidates:
                tried += 1
                try_candidate_bits(rng.getrandbits(n))
                if target_size is not None and len(accepted) >= target_size:
                    break
            else:
                partial = True
    else:
        rows: list[np.ndarray] = []

        def try_candidate(word: bytes) -> None:
            if not _balanced_counts(word, N, j_min, j_max):
                return
            canon = least_rotation(word)
            if canon in canons:
                return
            cand = np.frombuffer(word, dtype=np.uint8)
            for row in rows:
                if int(np.count_nonzero(row != cand)) < thr:
                    return
            rows.append(cand.copy())
            accepted.append(word)
            canons.add(canon)

        if mode == "exhaustive":
            for tup in product(range(N), repeat=n):
                tried += 1
                try_candidate(bytes(tup))
                if target_size is not None and len(accepted) >= target_size:
                    break
        else:
            rng = random.Random(seed)
            while tried < max_candidates:
                tried += 1
                try_candidate(bytes(rng.randrange(N) for _ in range(n)))
                if target_size is not None and len(accepted) >= target_size:
                    break
            else:
                partial = True

    if target_size is not None and len(accepted) < target_size:
        partial = True
    report = growth_params(spec) if with_report else None
    words = [Word(b, ab) for b in accepted]
    return CodebookResult(
        spec=spec,
        words=words,
        seed=seed,
        mode=mode,
        partial=partial,
        candidates_tried=tried,
        report=report,
    )


def verify_codebook(words: list[Word], spec: CodebookSpec) -> list[str]:
    """Independent re-verification; returns human-readable violations.

    Deliberately built on words-core primitives only: exact rational
    Hamming distances, the doubled-word scan oracle, and letter counts.
    """
    violations: list[str] = []
    n, N = spec.n, spec.N
    sep = Fraction(separation_threshold(spec.alpha, n), n)
    lo = (1 - Fraction(spec.eps)) * Fraction(n, N)
    hi = (1 + Fraction(spec.eps)) * Fraction(n, N)
    for idx, w in enumerate(words):
        if len(w) != n:
            violations.append(f"word {idx} has length {len(w)} != {n}")
            continue
        for a in range(N):
            c = w.count(a)
            if not lo < Fraction(c) < hi:
                violations.append(f"word {idx}: letter {a} count {c} outside ({lo}, {hi})")
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            d = hamming(words[i], words[j])
            if d < sep:
                violations.append(f"pair ({i},{j}): distance {d} below {sep}")
            if common_doubled_window(words[i], words[j]):
                violations.append(f"pair ({i},{j}): shared doubled-word window")
    return violations


def write_codebook(path, result: CodebookResult) -> None:
    header = {
        "N": result.spec.N,
        "n": result.spec.n,
        "alpha": str(Fraction(result.spec.alpha)),
        "eps": str(Fraction(result.spec.eps)),
        "seed": result.seed,
        "mode": result.mode,
        "partial": result.partial,
        "candidates_tried": result.candidates_tried,
        "size": result.size,
    }
    if result.report is not None:
        header["rate_report"] = result.report.to_json()
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        for w in result.words:
            fh.write(w.text() + "\n")


def read_codebook(path) -> tuple[dict, list[Word]]:
    with open(path, "r", encoding="ascii") as fh:
        header = json.loads(fh.readline().lstrip("# "))
        ab = Alphabet(header["N"])
        words = [Word.from_text(line.strip(), ab) for line in fh if line.strip()]
    return header, words
