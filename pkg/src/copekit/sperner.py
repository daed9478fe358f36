"""Sparsity-pattern lower bounds on ontic dimensionality.

A square submatrix in which every row and every column owns exactly one
zero (the zero pattern is a permutation) pins down, via antichain counting,
both the minimum number of ontic points needed by any ontological model and
the minimum dimension spanned by one of its factors.  The first bound is
the smallest k with m <= binom(k, floor(k/2)); the second is the largest l
with binom(l, floor(l/2)) <= m.  When the span bound exceeds rank(C), no
equirank nonnegative factorization can exist.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb
from typing import Optional

from .cope import CopeMatrix

_EXACT_TOTAL_DIM = 12


def central_binomial(k: int) -> int:
    return comb(k, k // 2)


def sperner_ontic_bound(m: int) -> int:
    """Smallest admissible ontic dimension for an m-element unique-zero family.

    For m = 1 the counting formula gives 0; a model still needs one ontic
    point, so the reported bound is at least 1.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    k = 0
    while central_binomial(k) < m:
        k += 1
    return max(k, 1)


def sperner_span_bound(m: int) -> int:
    """Largest l whose full antichain fits below m: binom(l, l//2) <= m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    l = 0
    while central_binomial(l + 1) <= m:
        l += 1
    return l


@dataclass(frozen=True)
class SpernerWitness:
    """Unique-zero square submatrix plus its derived dimension bounds."""

    row_indices: tuple
    col_indices: tuple
    m: int
    ontic_dim_lower_bound: int
    factor_span_lower_bound: int


def _zero_pattern(c: CopeMatrix):
    be = c.backend
    return [[be.is_zero(x) for x in row] for row in c.stacked()]


def _conflicts(zero, r: int, col: int, chosen) -> bool:
    """Would pairing (r, col) break the unique-zero condition of ``chosen``?"""
    for rr, cc in chosen:
        if zero[r][cc] or zero[rr][col]:
            return True
    return False


def _exact_max_matching(zero, edges) -> list:
    best: list = []
    n_edges = len(edges)

    def extend(start: int, chosen: list) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) + (n_edges - start) <= len(best):
            return
        for idx in range(start, n_edges):
            r, col = edges[idx]
            if any(r == rr or col == cc for rr, cc in chosen):
                continue
            if _conflicts(zero, r, col, chosen):
                continue
            chosen.append((r, col))
            extend(idx + 1, chosen)
            chosen.pop()

    extend(0, [])
    return best


def _greedy_max_matching(zero, edges, seeds: int = 8) -> list:
    row_zero_count = [sum(row) for row in zero]
    col_zero_count = [sum(zero[i][j] for i in range(len(zero))) for j in range(len(zero[0]))]

    def run(order) -> list:
        chosen: list = []
        for r, col in order:
            if any(r == rr or col == cc for rr, cc in chosen):
                continue
            if not _conflicts(zero, r, col, chosen):
                chosen.append((r, col))
        return chosen

    base = sorted(edges, key=lambda e: (row_zero_count[e[0]] + col_zero_count[e[1]], e))
    best = run(base)
    for s in range(seeds):
        rng = random.Random(s)
        shuffled = list(edges)
        rng.shuffle(shuffled)
        candidate = run(shuffled)
        if len(candidate) > len(best):
            best = candidate
    return best


def sperner_submatrix(c: CopeMatrix) -> Optional[SpernerWitness]:
    """Maximum unique-zero square submatrix of the stacked matrix.

    The unique-zero condition on an m x m selection forces the zero pattern
    to be a permutation: each selected row and column carries exactly one
    zero inside the selection.  Search is exact up to total dimension
    (rows + columns) 12 and greedy with randomized restarts above.  Returns
    None when no witness with m >= 2 exists.  Zero entries are decided by
    the matrix backend (floats: magnitude at most eps).
    """
    zero = _zero_pattern(c)
    n_rows = len(zero)
    n_cols = len(zero[0])
    edges = [(i, j) for i in range(n_rows) for j in range(n_cols) if zero[i][j]]
    if not edges:
        return None
    if n_rows + n_cols <= _EXACT_TOTAL_DIM:
        chosen = _exact_max_matching(zero, edges)
    else:
        chosen = _greedy_max_matching(zero, edges)
    if len(chosen) < 2:
        return None
    chosen.sort()
    rows = tuple(r for r, _ in chosen)
    cols = tuple(col for _, col in chosen)
    m = len(chosen)
    return SpernerWitness(
        row_indices=rows,
        col_indices=cols,
        m=m,
        ontic_dim_lower_bound=sperner_ontic_bound(m),
        factor_span_lower_bound=sperner_span_bound(m),
    )
