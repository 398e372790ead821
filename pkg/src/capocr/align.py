"""Levenshtein distance and alignment traceback over generic sequences."""

import numpy as np


def levenshtein(a, b):
    """Edit distance with unit insert/delete/substitute costs."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = np.arange(lb + 1)
    cur = np.empty(lb + 1, dtype=np.int64)
    for i in range(1, la + 1):
        cur[0] = i
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev, cur = cur, prev
    return int(prev[lb])


def matched_pairs(a, b):
    """Index pairs (i, j) aligned as match/substitution in an optimal traceback.

    Tie order is fixed (diagonal, then deletion, then insertion) so the
    alignment is deterministic.
    """
    la, lb = len(a), len(b)
    d = np.zeros((la + 1, lb + 1), dtype=np.int64)
    d[:, 0] = np.arange(la + 1)
    d[0, :] = np.arange(lb + 1)
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i, j] = min(d[i - 1, j] + 1, d[i, j - 1] + 1, d[i - 1, j - 1] + cost)
    pairs = []
    i, j = la, lb
    while i > 0 and j > 0:
        cost = 0 if a[i - 1] == b[j - 1] else 1
        if d[i, j] == d[i - 1, j - 1] + cost:
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif d[i, j] == d[i - 1, j] + 1:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs
