"""Model classes as constrained factorizations of a COPE matrix.

A model is a pair (effects, states) with ``effects @ states`` reproducing
the source matrix, plus a unit vector that every measurement block's effect
rows sum to.  The five classes differ only in which extra constraints hold:

==========================  =================================================
preGPT                      reconstruction + common unit
GPT                         + equirank (rank effects = rank states = rank C)
quasiprobabilistic          + unit is the all-ones vector
ontological                 nonnegative, unit all-ones, states column-stochastic
noncontextual ontological   ontological + equirank
==========================  =================================================
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import cope as cope_mod
from . import rational_linalg as rla
from .backend import Backend, floating
from .cope import CopeMatrix, PreconditionError


class ModelKind(str, enum.Enum):
    PREGPT = "pregpt"
    GPT = "gpt"
    QUASIPROBABILISTIC = "quasiprobabilistic"
    ONTOLOGICAL = "ontological"
    NONCONTEXTUAL_ONTOLOGICAL = "noncontextual-ontological"


@dataclass(frozen=True)
class ModelFactorization:
    """Factor pair (effects, states), unit vector, and a model-class tag.

    ``effects`` has one row per outcome, partitioned into the same blocks
    as the source matrix; ``states`` has one column per preparation.
    """

    effects: tuple  # n_rows x inner_dim
    states: tuple  # inner_dim x n_preparations
    unit: tuple  # length inner_dim
    kind: ModelKind
    inner_dim: int
    block_sizes: tuple
    backend: Backend

    @property
    def n_rows(self) -> int:
        return len(self.effects)

    @property
    def n_preparations(self) -> int:
        return len(self.states[0]) if self.states else 0

    def effects_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.effects], dtype=float)

    def states_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.states], dtype=float)


def make_model(
    effects,
    states,
    unit,
    kind: ModelKind,
    block_sizes,
    backend: Backend,
) -> ModelFactorization:
    eff = tuple(tuple(backend.coerce(x) for x in row) for row in effects)
    sta = tuple(tuple(backend.coerce(x) for x in row) for row in states)
    uni = tuple(backend.coerce(x) for x in unit)
    inner = len(sta)
    if any(len(row) != inner for row in eff):
        raise PreconditionError("effects width must equal the number of state rows")
    if len(uni) != inner:
        raise PreconditionError("unit length must equal the inner dimension")
    if sum(block_sizes) != len(eff):
        raise PreconditionError("block sizes must partition the effect rows")
    return ModelFactorization(
        effects=eff,
        states=sta,
        unit=uni,
        kind=kind,
        inner_dim=inner,
        block_sizes=tuple(block_sizes),
        backend=backend,
    )


@dataclass(frozen=True)
class VerificationReport:
    """Which constraints a candidate factorization actually satisfies."""

    reconstruction_ok: bool
    unit_ok: bool
    nonnegative_ok: bool
    states_column_stochastic_ok: bool
    unit_all_ones: bool
    rank_c: int
    rank_effects: int
    rank_states: int
    equirank_ok: bool
    inferred_kinds: frozenset


def _matrix_rank(rows, backend: Backend) -> int:
    if backend.is_exact:
        return rla.rank([list(r) for r in rows])
    arr = np.array([[float(x) for x in r] for r in rows], dtype=float)
    if arr.size == 0:
        return 0
    sv = np.linalg.svd(arr, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > backend.eps * sv[0]))


def classify_model(c: CopeMatrix, m: ModelFactorization) -> VerificationReport:
    """Check a factorization against a matrix, ignoring its kind tag.

    Comparisons run on the model's backend unless both sides are exact.
    Raises on dimension mismatch.
    """
    if m.n_rows != c.n_rows or m.n_preparations != c.n_preparations:
        raise PreconditionError("model dimensions do not match the matrix")
    if m.block_sizes != c.block_sizes:
        raise PreconditionError("model block structure does not match the matrix")
    # Exact comparisons only when both sides are exact; otherwise borrow the
    # float side's tolerance.
    if m.backend.is_exact and c.backend.is_exact:
        cmp = m.backend
    elif not m.backend.is_exact:
        cmp = m.backend
    else:
        cmp = c.backend

    k = m.inner_dim
    product = [
        [sum(m.effects[i][l] * m.states[l][j] for l in range(k)) for j in range(c.n_preparations)]
        for i in range(m.n_rows)
    ]
    stacked = c.stacked()
    reconstruction_ok = all(
        cmp.eq(product[i][j], stacked[i][j])
        for i in range(m.n_rows)
        for j in range(c.n_preparations)
    )

    unit_ok = True
    offset = 0
    for size in m.block_sizes:
        for l in range(k):
            total = sum(m.effects[i][l] for i in range(offset, offset + size))
            if not cmp.eq(total, m.unit[l]):
                unit_ok = False
        offset += size

    nonnegative_ok = all(
        cmp.geq(x, 0) for row in m.effects for x in row
    ) and all(cmp.geq(x, 0) for row in m.states for x in row)

    states_column_stochastic_ok = all(
        cmp.eq(sum(m.states[l][j] for l in range(k)), 1) for j in range(m.n_preparations)
    )

    unit_all_ones = all(cmp.eq(x, 1) for x in m.unit)

    rank_c = cope_mod.rank(c)
    rank_effects = _matrix_rank(m.effects, m.backend)
    rank_states = _matrix_rank(m.states, m.backend)
    equirank_ok = rank_c == rank_effects == rank_states

    kinds = set()
    if reconstruction_ok and unit_ok:
        kinds.add(ModelKind.PREGPT)
        if equirank_ok:
            kinds.add(ModelKind.GPT)
            if unit_all_ones:
                kinds.add(ModelKind.QUASIPROBABILISTIC)
        if nonnegative_ok and unit_all_ones and states_column_stochastic_ok:
            kinds.add(ModelKind.ONTOLOGICAL)
            if equirank_ok:
                kinds.add(ModelKind.NONCONTEXTUAL_ONTOLOGICAL)

    return VerificationReport(
        reconstruction_ok=reconstruction_ok,
        unit_ok=unit_ok,
        nonnegative_ok=nonnegative_ok,
        states_column_stochastic_ok=states_column_stochastic_ok,
        unit_all_ones=unit_all_ones,
        rank_c=rank_c,
        rank_effects=rank_effects,
        rank_states=rank_states,
        equirank_ok=equirank_ok,
        inferred_kinds=frozenset(kinds),
    )


def _block_slices(block_sizes):
    offset = 0
    for size in block_sizes:
        yield offset, offset + size
        offset += size


def pregpt_from_svd(c: CopeMatrix) -> ModelFactorization:
    """Factorization from a singular value decomposition, unit-completed.

    The effect matrix is the full square U; the state matrix is sigma @ V.
    Columns of U beyond the rank multiply zero rows of the states, so they
    are free: they are replaced by their least-squares projection onto the
    space of columns with zero per-block row sums, which makes every block
    sum to one common unit.  Always a float-backed model.
    """
    arr = c.as_array()
    n_rows, n_cols = arr.shape
    u, s, vh = np.linalg.svd(arr, full_matrices=True)
    b = np.zeros((n_rows, n_cols))
    for i in range(min(n_rows, n_cols)):
        b[i, :] = s[i] * vh[i, :]
    eps = c.backend.eps if not c.backend.is_exact else floating().eps
    r = int(np.sum(s > eps * s[0])) if s.size and s[0] > 0 else 0

    for col in range(r, n_rows):
        for lo, hi in _block_slices(c.block_sizes):
            u[lo:hi, col] -= u[lo:hi, col].sum() / (hi - lo)

    block_sums = np.stack([u[lo:hi, :].sum(axis=0) for lo, hi in _block_slices(c.block_sizes)])
    unit = block_sums.mean(axis=0)

    return make_model(
        effects=u.tolist(),
        states=b.tolist(),
        unit=unit.tolist(),
        kind=ModelKind.PREGPT,
        block_sizes=c.block_sizes,
        backend=floating(eps),
    )


def gpt(c: CopeMatrix) -> ModelFactorization:
    """Equirank factorization: effects and states of the same rank as C.

    Exact backend: rank factorization from reduced row echelon form (the
    common unit comes out automatically because the state factor has full
    row rank).  Float backend: truncation of :func:`pregpt_from_svd`.
    """
    if c.backend.is_exact:
        f, g = rla.rank_factorization(c.stacked())
        r = len(g)
        lo, hi = 0, c.block_sizes[0]
        unit = [sum(f[i][l] for i in range(lo, hi)) for l in range(r)]
        # Normalize the basis so the shared unit becomes (1, 0, ..., 0).
        pivot = next((l for l, u in enumerate(unit) if u != 0), None)
        if pivot is not None:
            m_mat = rla.identity(r)
            m_mat[pivot] = list(unit)
            m_inv = rla.invert(m_mat)
            f = rla.mat_mul(f, m_inv)
            g = rla.mat_mul(m_mat, g)
            for row in f:
                row[0], row[pivot] = row[pivot], row[0]
            g[0], g[pivot] = g[pivot], g[0]
            unit = [Fraction(1)] + [Fraction(0)] * (r - 1)
        return make_model(
            effects=f,
            states=g,
            unit=unit,
            kind=ModelKind.GPT,
            block_sizes=c.block_sizes,
            backend=c.backend,
        )
    pre = pregpt_from_svd(c)
    arr = c.as_array()
    sv = np.linalg.svd(arr, compute_uv=False)
    r = int(np.sum(sv > c.backend.eps * sv[0])) if sv.size and sv[0] > 0 else 0
    u = pre.effects_array()[:, :r]
    b = pre.states_array()[:r, :]
    block_sums = np.stack([u[lo:hi, :].sum(axis=0) for lo, hi in _block_slices(c.block_sizes)])
    unit = block_sums.mean(axis=0)
    return make_model(
        effects=u.tolist(),
        states=b.tolist(),
        unit=unit.tolist(),
        kind=ModelKind.GPT,
        block_sizes=c.block_sizes,
        backend=c.backend,
    )


def quasi_from_gpt(g: ModelFactorization, tom_columns: Sequence[int]) -> ModelFactorization:
    """Change of basis through an invertible set of tomographic states.

    The selected state columns form T; the new model is (effects @ T,
    T^-1 @ states) and its unit is the all-ones vector.
    """
    cols = list(tom_columns)
    r = g.inner_dim
    if len(cols) != r:
        raise PreconditionError(f"need exactly {r} tomographic columns, got {len(cols)}")
    if any(j < 0 or j >= g.n_preparations for j in cols):
        raise PreconditionError("tomographic column index out of range")
    if g.backend.is_exact:
        t = [[g.states[l][j] for j in cols] for l in range(r)]
        t_inv = rla.invert(t)
        if t_inv is None:
            raise PreconditionError("selected state columns are singular, not tomographic")
        effects = rla.mat_mul([list(row) for row in g.effects], t)
        states = rla.mat_mul(t_inv, [list(row) for row in g.states])
        unit = [Fraction(1)] * r
    else:
        t = g.states_array()[:, cols]
        sv = np.linalg.svd(t, compute_uv=False)
        if sv.size == 0 or sv[0] == 0 or sv[-1] <= g.backend.eps * sv[0]:
            raise PreconditionError("selected state columns are singular, not tomographic")
        t_inv = np.linalg.inv(t)
        effects = (g.effects_array() @ t).tolist()
        states = (t_inv @ g.states_array()).tolist()
        unit = [1.0] * r
    return make_model(
        effects=effects,
        states=states,
        unit=unit,
        kind=ModelKind.QUASIPROBABILISTIC,
        block_sizes=g.block_sizes,
        backend=g.backend,
    )


def trivial_ontological(c: CopeMatrix) -> ModelFactorization:
    """One ontic point per preparation: effects = C, states = identity."""
    n = c.n_preparations
    if c.backend.is_exact:
        states = rla.identity(n)
        unit = [Fraction(1)] * n
    else:
        states = np.eye(n).tolist()
        unit = [1.0] * n
    return make_model(
        effects=c.stacked(),
        states=states,
        unit=unit,
        kind=ModelKind.ONTOLOGICAL,
        block_sizes=c.block_sizes,
        backend=c.backend,
    )


def gpt_to_trivial_ontological(g: ModelFactorization, c: CopeMatrix) -> ModelFactorization:
    """Ontological model induced by a GPT through its extremal states.

    Each effect is turned into a response function by evaluating it on all
    extremal states, i.e. the response rows are the rows of the reproduced
    matrix; the state assignment is single-valued on extremal preparations
    (standard basis vectors) and the result coincides with
    :func:`trivial_ontological`.  Mixed preparations would admit a whole
    equivalence class of epistemic states; only the canonical point
    (the basis vector itself) is materialized here.
    """
    report = classify_model(c, g)
    if not (report.reconstruction_ok and report.unit_ok):
        raise PreconditionError("factorization does not reproduce the matrix")
    k = g.inner_dim
    responses = [
        [sum(g.effects[i][l] * g.states[l][j] for l in range(k)) for j in range(g.n_preparations)]
        for i in range(g.n_rows)
    ]
    n = g.n_preparations
    if g.backend.is_exact:
        states = rla.identity(n)
        unit = [Fraction(1)] * n
    else:
        states = np.eye(n).tolist()
        unit = [1.0] * n
    return make_model(
        effects=responses,
        states=states,
        unit=unit,
        kind=ModelKind.ONTOLOGICAL,
        block_sizes=g.block_sizes,
        backend=g.backend,
    )


def fiducial_tomography_test(c: CopeMatrix) -> tuple[bool, bool]:
    """(states fiducial, effects fiducial) for an extremal-quotiented matrix.

    A strict subset of preparations (respectively outcomes) can serve as a
    tomographic probe exactly when the column count (distinct row count)
    exceeds the rank.
    """
    r = cope_mod.rank(c)
    return (c.n_preparations > r, cope_mod.distinct_rows(c) > r)
