"""Nonnegative factorization search for ontological models.

Positive results must be *sound*: every model returned here has been
re-verified against the source matrix (exactly, on the rational backend).
The search itself is allowed to be heuristic - alternating nonnegative
least squares with multiplicative-update polishing over seeded restarts,
followed by rational snapping and exact re-verification - plus a family of
deterministic geometric routes for the equirank case: when the span-simplex
polytope is itself a simplex, when the extremal columns already form one,
when some subset of polytope vertices encloses every column, and (rank 3)
the exact planar nested-triangle construction.  Absence of a model is
reported as ``None`` and proves nothing.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np
import scipy.optimize

from . import cope as cope_mod
from . import planar
from . import rational_linalg as rla
from .cope import CopeMatrix
from .models import ModelFactorization, ModelKind, classify_model, make_model
from .polytope import GuardExceeded, affine_chart, span_simplex_polytope

_SUBSET_CAP = 3000


@dataclass(frozen=True)
class NmfOptions:
    """Search budget for the nonnegative factorization heuristics."""

    inner_dim: int = 1
    max_restarts: int = 8
    max_iterations: int = 400
    seed: int = 0
    snap_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.inner_dim < 1:
            raise ValueError("inner_dim must be >= 1")
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be >= 1")


def _thread_cap() -> int:
    raw = os.environ.get("COPEKIT_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        cap = min(4, os.cpu_count() or 1)
    return cap


def _ones(n: int, exact: bool):
    return [Fraction(1)] * n if exact else [1.0] * n


def _as_ontological(c: CopeMatrix, effects, states, backend) -> Optional[ModelFactorization]:
    """Package and verify a candidate (effects, states); None if it fails."""
    model = make_model(
        effects=effects,
        states=states,
        unit=_ones(len(states), backend.is_exact),
        kind=ModelKind.ONTOLOGICAL,
        block_sizes=c.block_sizes,
        backend=backend,
    )
    report = classify_model(c, model)
    if ModelKind.ONTOLOGICAL in report.inferred_kinds:
        return model
    return None


def _trivial_padded(c: CopeMatrix, k: int) -> Optional[ModelFactorization]:
    """The one-ontic-point-per-preparation model, padded to inner dim k."""
    n = c.n_preparations
    if k < n:
        return None
    stacked = c.stacked()
    effects = [row + [row[0]] * (k - n) for row in [list(r) for r in stacked]]
    zero = Fraction(0) if c.backend.is_exact else 0.0
    one = Fraction(1) if c.backend.is_exact else 1.0
    states = [[one if l == j else zero for j in range(n)] for l in range(k)]
    return _as_ontological(c, effects, states, c.backend)


# ---------------------------------------------------------------------------
# Deterministic equirank routes (exact backend)
# ---------------------------------------------------------------------------


def _distinct_columns(stacked, n_cols):
    cols = [tuple(stacked[i][j] for i in range(len(stacked))) for j in range(n_cols)]
    seen = []
    for col in cols:
        if col not in seen:
            seen.append(col)
    return seen


def _extremal_distinct_columns(cols):
    out = []
    for j, col in enumerate(cols):
        others = [c for i, c in enumerate(cols) if i != j]
        if not others:
            out.append(col)
            continue
        targets = [[o[i] for o in others] for i in range(len(col))]
        if rla.convex_combination(targets, list(col)) is None:
            out.append(col)
    return out


def _model_from_simplex(c: CopeMatrix, merged: CopeMatrix, points) -> Optional[ModelFactorization]:
    """Exact model whose merged response columns are the given simplex points."""
    j_count = c.n_measurements
    r = len(points)
    ambient = merged.n_rows
    t_cols = [[points[l][i] for l in range(r)] for i in range(ambient)]
    coeff_rows = [list(row) for row in t_cols] + [[Fraction(1)] * r]
    states = []
    for j in range(merged.n_preparations):
        col = [merged.blocks[0][i][j] for i in range(ambient)]
        beta = rla.solve_consistent(coeff_rows, col + [Fraction(1)])
        if beta is None or any(b < 0 for b in beta):
            return None
        states.append(beta)
    states_t = [[states[j][l] for j in range(len(states))] for l in range(r)]
    effects = [[points[l][i] * j_count for l in range(r)] for i in range(ambient)]
    return _as_ontological(c, effects, states_t, c.backend)


def equirank_simplex_model(c: CopeMatrix) -> Optional[ModelFactorization]:
    """Deterministic search for an equirank nonnegative factorization.

    Works on the merged matrix: an equirank model at inner dimension
    rank(C) is a simplex nested between the column polytope and the
    span-simplex polytope Q.  Tries, in order: Q itself (when it is a
    simplex), the extremal columns, simplices on subsets of Q's vertices,
    and for rank 3 the exact planar decision.  Exact backend only.
    """
    if not c.backend.is_exact:
        return None
    r = cope_mod.rank(c)
    merged = cope_mod.merge_measurements(c)
    try:
        poly = span_simplex_polytope(merged)
    except GuardExceeded:
        return None
    vertices = list(poly.vertices)

    if len(vertices) == r:
        model = _model_from_simplex(c, merged, vertices)
        if model is not None:
            return model

    stacked = merged.stacked()
    cols = _distinct_columns(stacked, merged.n_preparations)
    extremal = _extremal_distinct_columns(cols)
    if len(extremal) == r:
        model = _model_from_simplex(c, merged, extremal)
        if model is not None:
            return model

    from math import comb

    if len(vertices) > r and comb(len(vertices), r) <= _SUBSET_CAP:
        for subset in combinations(vertices, r):
            if rla.rank([list(v) for v in subset]) < r:
                continue
            model = _model_from_simplex(c, merged, list(subset))
            if model is not None:
                return model

    if r == 3:
        chart = affine_chart(poly)
        inner = [chart.to_plane([row[j] for row in stacked]) for j in range(merged.n_preparations)]
        outer = [chart.to_plane(v) for v in vertices]
        triangle = planar.nested_triangle(inner, outer)
        if triangle is not None:
            points = [chart.to_ambient(p) for p in triangle]
            model = _model_from_simplex(c, merged, points)
            if model is not None:
                return model
    return None


# ---------------------------------------------------------------------------
# Heuristic search
# ---------------------------------------------------------------------------


def _mu_anls(arr: np.ndarray, k: int, seed: int, iterations: int):
    """One restart: multiplicative updates plus an NNLS polish."""
    rng = np.random.default_rng(seed)
    m, n = arr.shape
    scale = max(arr.mean(), 1e-3)
    w = rng.uniform(0.2, 1.0, (m, k)) * np.sqrt(scale)
    h = rng.uniform(0.2, 1.0, (k, n)) * np.sqrt(scale)
    tiny = 1e-12
    for it in range(iterations):
        h *= (w.T @ arr) / (w.T @ w @ h + tiny)
        w *= (arr @ h.T) / (w @ h @ h.T + tiny)
        if it % 32 == 31 and np.abs(arr - w @ h).max() < 1e-13:
            break
    for _ in range(2):
        for j in range(n):
            h[:, j] = scipy.optimize.nnls(w, arr[:, j])[0]
        for i in range(m):
            w[i, :] = scipy.optimize.nnls(h.T, arr[i, :])[0]
        h = np.maximum(h, 0.0)
        w = np.maximum(w, 0.0)
    residual = float(np.abs(arr - w @ h).max())
    return residual, w, h


def _rescale(w: np.ndarray, h: np.ndarray, first_block: int):
    """Diagonal rescaling making the state factor column stochastic."""
    d = w[:first_block, :].sum(axis=0)
    d = np.where(d > 1e-12, d, 1.0)
    return w / d, h * d[:, None]


def _snap_matrix(arr: np.ndarray, snap_tol: float):
    cap = max(4, int(round(1.0 / np.sqrt(snap_tol))))
    return [[Fraction(float(x)).limit_denominator(cap) for x in row] for row in arr]


def _exact_from_floats(
    c: CopeMatrix, w: np.ndarray, h: np.ndarray, opts: NmfOptions
) -> Optional[ModelFactorization]:
    """Snap a float candidate to rationals and repair one side exactly.

    The snapped pair is verified as-is first.  Failing that, one factor is
    held at its snapped value and the other recovered by exact linear
    feasibility (the problem is linear once one side is fixed).
    """
    r_ex = _snap_matrix(w, opts.snap_tol)
    p_ex = _snap_matrix(h, opts.snap_tol)
    model = _as_ontological(c, r_ex, p_ex, c.backend)
    if model is not None:
        return model

    stacked = [[Fraction(x) for x in row] for row in c.stacked()]
    m = len(stacked)
    n = c.n_preparations
    k = len(p_ex)

    # Fix states, recover effects row by row.
    rows = []
    for i in range(m):
        a_eq = [[p_ex[l][j] for l in range(k)] for j in range(n)]
        sol = rla.lp_feasible(a_eq, stacked[i])
        if sol is None:
            rows = None
            break
        rows.append(sol)
    if rows is not None:
        model = _as_ontological(c, rows, p_ex, c.backend)
        if model is not None:
            return model

    # Fix effects, recover states column by column.
    cols = []
    for j in range(n):
        a_eq = [[r_ex[i][l] for l in range(k)] for i in range(m)]
        a_eq.append([Fraction(1)] * k)
        sol = rla.lp_feasible(a_eq, [stacked[i][j] for i in range(m)] + [Fraction(1)])
        if sol is None:
            cols = None
            break
        cols.append(sol)
    if cols is not None:
        states = [[cols[j][l] for j in range(n)] for l in range(k)]
        model = _as_ontological(c, r_ex, states, c.backend)
        if model is not None:
            return model
    return None


def _is_equirank(c: CopeMatrix, m: ModelFactorization) -> bool:
    report = classify_model(c, m)
    return report.equirank_ok


def search_candidates(
    c: CopeMatrix, k: int, opts: NmfOptions, need_equirank: bool = False
) -> list[ModelFactorization]:
    """All verified ontological models found at inner dimension k.

    Deterministic candidates come first; heuristic restarts are ordered by
    (residual, seed) so concurrent and serial runs pick the same winner.
    With ``need_equirank`` the heuristic phase still runs when none of the
    deterministic candidates is equirank.
    """
    r = cope_mod.rank(c)
    if k < r:
        return []
    found: list[ModelFactorization] = []

    if k >= c.n_preparations:
        trivial = _trivial_padded(c, k)
        if trivial is not None:
            found.append(trivial)

    if c.backend.is_exact and k == r:
        model = equirank_simplex_model(c)
        if model is not None:
            found.append(model)

    satisfied = bool(found) and (
        not need_equirank or any(_is_equirank(c, m) for m in found)
    )
    if satisfied:
        return found

    arr = c.as_array()
    seeds = [opts.seed + i for i in range(opts.max_restarts)]
    workers = min(_thread_cap(), len(seeds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda s: (s, _mu_anls(arr, k, s, opts.max_iterations)), seeds)
            )
    else:
        results = [(s, _mu_anls(arr, k, s, opts.max_iterations)) for s in seeds]
    results.sort(key=lambda item: (item[1][0], item[0]))

    for seed, (residual, w, h) in results:
        w_s, h_s = _rescale(w, h, c.block_sizes[0])
        if c.backend.is_exact:
            if residual > 1e-4:
                continue
            model = _exact_from_floats(c, w_s, h_s, opts)
        else:
            model = _as_ontological(c, w_s.tolist(), h_s.tolist(), c.backend)
        if model is not None:
            found.append(model)
    return found


def nmf(c: CopeMatrix, opts: NmfOptions) -> Optional[ModelFactorization]:
    """Best verified nonnegative factorization at opts.inner_dim, or None.

    Absence is a value: a None only means the search budget found nothing,
    except below rank(c) where no factorization can exist at all.
    """
    candidates = search_candidates(c, opts.inner_dim, opts)
    return candidates[0] if candidates else None


def enmf(
    c: CopeMatrix, opts: NmfOptions, max_k: Optional[int] = None
) -> Optional[ModelFactorization]:
    """Equirank nonnegative factorization search.

    Scans inner dimensions from rank(c) up to ``max_k`` (default
    rank + 3) and keeps only candidates whose factor ranks both equal
    rank(c).  On the exact backend the complete vertex-program decision
    short-circuits the scan: a proven absence returns None immediately,
    and a proven model is returned once the scan reaches its inner
    dimension.  A returned model always classifies as noncontextual
    ontological.
    """
    r = cope_mod.rank(c)
    bound = max(max_k if max_k is not None else r + 3, r)

    decided_model: Optional[ModelFactorization] = None
    if c.backend.is_exact:
        from .enmf_decision import AbsenceResult, ExistenceResult, decide_enmf_existence
        from .polytope import GuardExceeded

        try:
            decision = decide_enmf_existence(c)
        except GuardExceeded:
            decision = None
        if isinstance(decision, AbsenceResult):
            return None
        if isinstance(decision, ExistenceResult):
            decided_model = decision.model

    for k in range(max(r, 1), bound + 1):
        if decided_model is not None and decided_model.inner_dim == k:
            return decided_model
        for candidate in search_candidates(c, k, opts, need_equirank=True):
            tagged = make_model(
                effects=candidate.effects,
                states=candidate.states,
                unit=candidate.unit,
                kind=ModelKind.NONCONTEXTUAL_ONTOLOGICAL,
                block_sizes=candidate.block_sizes,
                backend=candidate.backend,
            )
            report = classify_model(c, tagged)
            if ModelKind.NONCONTEXTUAL_ONTOLOGICAL in report.inferred_kinds:
                return tagged
    return None
