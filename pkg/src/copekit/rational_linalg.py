"""Exact linear algebra over rationals.

Everything here operates on lists of lists of :class:`fractions.Fraction`
and is deliberately dependency-free: certificates produced elsewhere in the
package are re-checked with these routines, so they must be exact.  Sizes
are desk-scale (tens of rows), so asymptotics do not matter; correctness
and termination do.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Row = list
Matrix = list  # list of rows of Fraction

F0 = Fraction(0)
F1 = Fraction(1)


def mat(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[F1 if i == j else F0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[F0] * n for _ in range(m)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Matrix, v: Sequence) -> Row:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def rank(a: Matrix) -> int:
    """Rank via fraction-free (Bareiss) elimination on an integerized copy."""
    if not a or not a[0]:
        return 0
    denom_lcm = 1
    for row in a:
        for x in row:
            f = Fraction(x)
            denom_lcm = denom_lcm * f.denominator // _gcd(denom_lcm, f.denominator)
    m = [[int(Fraction(x) * denom_lcm) for x in row] for row in a]
    n_rows, n_cols = len(m), len(m[0])
    prev = 1
    r = 0
    for col in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if m[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        for i in range(r + 1, n_rows):
            for j in range(col + 1, n_cols):
                m[i][j] = (m[r][col] * m[i][j] - m[i][col] * m[r][j]) // prev
            m[i][col] = 0
        prev = m[r][col]
        r += 1
        if r == n_rows:
            break
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (R, pivot column indices)."""
    m = [list(row) for row in a]
    if not m or not m[0]:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for col in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if m[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = F1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank_factorization(a: Matrix) -> tuple[Matrix, Matrix]:
    """Exact rank factorization a = F @ G with F, G of full rank.

    F collects the pivot columns of ``a``; G is the corresponding block of
    the reduced row echelon form.
    """
    red, pivots = rref(a)
    r = len(pivots)
    f = [[row[j] for j in pivots] for row in a]
    g = [red[i] for i in range(r)]
    if r == 0:
        # Degenerate all-zero matrix: keep shapes workable.
        f = [[F0] for _ in a]
        g = [[F0] * len(a[0])]
    return f, g


def nullspace(a: Matrix) -> list[Row]:
    """Basis of the right kernel of ``a``."""
    red, pivots = rref(a)
    n_cols = len(a[0]) if a else 0
    free = [j for j in range(n_cols) if j not in pivots]
    basis = []
    for j in free:
        v = [F0] * n_cols
        v[j] = F1
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][j]
        basis.append(v)
    return basis


def solve_consistent(a: Matrix, b: Sequence) -> Optional[Row]:
    """One exact solution of ``a x = b``, or None when inconsistent."""
    if not a:
        return None
    n_cols = len(a[0])
    aug = [list(row) + [Fraction(bv)] for row, bv in zip(a, b)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [F0] * n_cols
    pivots_in_a = [p for p in pivots if p < n_cols]
    for i, pc in enumerate(pivots_in_a):
        x[pc] = red[i][-1]
    return x


def invert(a: Matrix) -> Optional[Matrix]:
    """Exact inverse of a square matrix, or None when singular."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("invert expects a square matrix")
    aug = [list(row) + ident_row for row, ident_row in zip(a, identity(n))]
    red, pivots = rref(aug)
    if [p for p in pivots if p < n] != list(range(n)):
        return None
    return [row[n:] for row in red[:n]]


def lp_feasibility(a_eq: Matrix, b_eq: Sequence) -> tuple[Optional[Row], Optional[Row]]:
    """Exact feasibility of {x >= 0 : a_eq x = b_eq} with dual certificate.

    Phase-1 simplex with Bland's rule (guaranteed termination), all
    arithmetic in Fractions.  Returns (x, None) on feasibility and
    (None, y) on infeasibility, where y is a verified Farkas vector:
    y^T a_eq <= 0 componentwise and y^T b_eq > 0.
    """
    m = len(a_eq)
    if m == 0:
        return [], None
    n = len(a_eq[0])
    # Normalize rows so the right-hand side is nonnegative.
    rows = []
    rhs = []
    flipped = []
    for row, bv in zip(a_eq, b_eq):
        bv = Fraction(bv)
        if bv < 0:
            rows.append([-Fraction(x) for x in row])
            rhs.append(-bv)
            flipped.append(True)
        else:
            rows.append([Fraction(x) for x in row])
            rhs.append(bv)
            flipped.append(False)
    # Tableau columns: n structural + m artificial + 1 rhs.
    tab = [rows[i] + [F1 if j == i else F0 for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # Phase-1 objective: minimize the sum of artificials.  Reduced-cost row.
    cost = [F0] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= tab[i][j]
    for j in range(n, n + m):
        cost[j] += F1

    total = n + m
    while True:
        enter = None
        for j in range(total):
            if cost[j] < 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise AssertionError("phase-1 objective is bounded below; no unbounded pivot")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter

    objective = -cost[-1]
    if objective != 0:
        # Duals from the artificial reduced costs: cost[n+i] = 1 - y_i.
        y_norm = [F1 - cost[n + i] for i in range(m)]
        y = [-yv if flip else yv for yv, flip in zip(y_norm, flipped)]
        # The certificate must verify exactly; fail loudly otherwise.
        for j in range(n):
            if sum(y[i] * Fraction(a_eq[i][j]) for i in range(m)) > 0:
                raise AssertionError("invalid Farkas certificate (column test)")
        if sum(y[i] * Fraction(b_eq[i]) for i in range(m)) <= 0:
            raise AssertionError("invalid Farkas certificate (rhs test)")
        return None, y
    x = [F0] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    return x, None


def lp_feasible(a_eq: Matrix, b_eq: Sequence) -> Optional[Row]:
    """Exact feasibility of {x >= 0 : a_eq x = b_eq}; solution or None."""
    x, _ = lp_feasibility(a_eq, b_eq)
    return x


def convex_combination(targets: Matrix, point: Sequence) -> Optional[Row]:
    """Weights w >= 0, sum 1 with ``targets @ w = point``; columns are candidates."""
    if not targets or not targets[0]:
        return None
    n = len(targets[0])
    a = [list(row) for row in targets]
    a.append([F1] * n)
    b = list(point) + [F1]
    return lp_feasible(a, b)
