import random
from fractions import Fraction

import numpy as np

from copekit import rational_linalg as rla


def _random_fraction_matrix(rng, m, n, den=5):
    return [
        [Fraction(rng.randint(-6, 6), rng.randint(1, den)) for _ in range(n)]
        for _ in range(m)
    ]


def test_rank_matches_numpy_on_random_matrices():
    rng = random.Random(7)
    for _ in range(200):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        a = _random_fraction_matrix(rng, m, n)
        arr = np.array([[float(x) for x in row] for row in a])
        assert rla.rank(a) == np.linalg.matrix_rank(arr, tol=1e-9)


def test_rank_factorization_reconstructs():
    rng = random.Random(11)
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        a = _random_fraction_matrix(rng, m, n)
        f, g = rla.rank_factorization(a)
        assert rla.mat_mul(f, g) == [[Fraction(x) for x in row] for row in a]
        r = rla.rank(a)
        if r > 0:
            assert rla.rank(f) == r
            assert rla.rank(g) == r


def test_solve_consistent_and_nullspace():
    rng = random.Random(13)
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        a = _random_fraction_matrix(rng, m, n)
        x_true = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)]
        b = rla.mat_vec(a, x_true)
        x = rla.solve_consistent(a, b)
        assert x is not None
        assert rla.mat_vec(a, x) == b
        for v in rla.nullspace(a):
            assert all(s == 0 for s in rla.mat_vec(a, v))


def test_invert():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = rla.invert(a)
    assert rla.mat_mul(a, inv) == rla.identity(2)
    singular = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert rla.invert(singular) is None


def test_lp_feasibility_simple_cases():
    # x1 + x2 = 1, x1 - x2 = 0 -> x = (1/2, 1/2)
    a = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)]]
    x, y = rla.lp_feasibility(a, [Fraction(1), Fraction(0)])
    assert y is None
    assert x == [Fraction(1, 2), Fraction(1, 2)]
    # x1 + x2 = -1 with x >= 0 is infeasible.
    x, y = rla.lp_feasibility([[Fraction(1), Fraction(1)]], [Fraction(-1)])
    assert x is None and y is not None


def test_lp_feasibility_matches_scipy_and_farkas_verifies():
    import scipy.optimize

    rng = random.Random(5)
    for _ in range(150):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        a = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)]
        b = [Fraction(rng.randint(-3, 3)) for _ in range(m)]
        x, farkas = rla.lp_feasibility(a, b)
        arr = np.array([[float(v) for v in row] for row in a])
        rhs = np.array([float(v) for v in b])
        res = scipy.optimize.linprog(
            c=np.zeros(n), A_eq=arr, b_eq=rhs, bounds=(0, None), method="highs"
        )
        if x is not None:
            assert res.success
            assert all(v >= 0 for v in x)
            assert [sum(ai * xi for ai, xi in zip(row, x)) for row in a] == b
        else:
            assert not res.success
            # Farkas: y^T A <= 0 and y^T b > 0, exactly.
            for j in range(n):
                assert sum(farkas[i] * a[i][j] for i in range(m)) <= 0
            assert sum(farkas[i] * b[i] for i in range(m)) > 0


def test_convex_combination_basic():
    cols = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    mid = [Fraction(1, 2), Fraction(1, 2)]
    w = rla.convex_combination(cols, mid)
    assert w is not None and sum(w) == 1
    outside = [Fraction(2), Fraction(-1)]
    assert rla.convex_combination(cols, outside) is None
