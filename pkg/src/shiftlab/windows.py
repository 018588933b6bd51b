"""Exact distinct-window counting over one or many byte strings.

Two interchangeable exact strategies:

* integer window codes + np.unique, when the code alphabet**n fits in an
  int64 (fast path for short windows over long sequences);
* suffix-array doubling ranks, combining the two length-2^j ranks that
  tile a length-n window (general path, no hashing anywhere).

A quadratic set-of-slices oracle is kept for tests.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

_CODE_LIMIT = 1 << 62


def naive_count(strings: Sequence[bytes], n: int) -> int:
    return len({s[i : i + n] for s in strings for i in range(len(s) - n + 1)})


def _count_by_codes(arrs: list[np.ndarray], n: int, base: int) -> int:
    codes = []
    for a in arrs:
        if len(a) < n:
            continue
        c = np.zeros(len(a) - n + 1, dtype=np.int64)
        for j in range(n):
            c *= base
            c += a[j : len(a) - n + 1 + j]
        codes.append(c)
    if not codes:
        return 0
    return len(np.unique(np.concatenate(codes)))


def _count_by_doubling(arrs: list[np.ndarray], n: int) -> int:
    buf = np.concatenate(arrs)
    valid = []
    off = 0
    for a in arrs:
        if len(a) >= n:
            valid.append(np.arange(off, off + len(a) - n + 1, dtype=np.int64))
        off += len(a)
    if not valid:
        return 0
    val = np.concatenate(valid)
    total = len(buf)
    rank = buf.astype(np.int64)
    length = 1
    while length * 2 <= n:
        second = np.full(total, -1, dtype=np.int64)
        second[: total - length] = rank[length:]
        order = np.lexsort((second, rank))
        changed = np.ones(total, dtype=bool)
        changed[1:] = (rank[order[1:]] != rank[order[:-1]]) | (
            second[order[1:]] != second[order[:-1]]
        )
        new_rank = np.empty(total, dtype=np.int64)
        new_rank[order] = np.cumsum(changed) - 1
        rank = new_rank
        length *= 2
    # two length-`length` blocks tile a length-n window: equal windows <=> equal rank pairs
    a = rank[val]
    b = rank[val + (n - length)]
    pairs = a * np.int64(int(rank.max()) + 1) + b
    return len(np.unique(pairs))


def count_distinct_windows(strings: Sequence[bytes], n: int, alphabet_size: int = 256) -> int:
    """Exact number of distinct length-n contiguous windows across `strings`."""
    if n < 1:
        raise ValueError("window length must be >= 1")
    arrs = [np.frombuffer(s, dtype=np.uint8) for s in strings if len(s) >= n]
    if not arrs:
        return 0
    if n == 1:
        return len(np.unique(np.concatenate(arrs)))
    if alphabet_size > 1 and alphabet_size ** n <= _CODE_LIMIT:
        return _count_by_codes(arrs, n, alphabet_size)
    return _count_by_doubling(arrs, n)
