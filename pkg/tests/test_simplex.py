from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from tribox.simplex import feasible_point, solve


def test_random_feasibility_matches_highs(rng):
    for _ in range(60):
        m, n = int(rng.integers(2, 7)), int(rng.integers(3, 12))
        A = rng.integers(-3, 4, (m, n)).astype(float)
        b = rng.integers(-3, 4, m).astype(float)
        ref = linprog(np.zeros(n), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        res = feasible_point(A, b)
        assert res.feasible == (ref.status == 0)
        if res.feasible:
            assert np.allclose(A @ res.x, b, atol=1e-8) and res.x.min() >= -1e-12
        else:
            y = res.farkas
            # y·A <= 0 on every column and y·b > 0
            assert np.all(y @ A <= 1e-8) and y @ b > 1e-9


def test_optimum_matches_highs(rng):
    for _ in range(30):
        m, n = 3, 6
        A = rng.uniform(0, 1, (m, n))
        b = A @ rng.uniform(0, 1, n)
        c = rng.normal(size=n)
        ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        res = solve(c, A, b)
        if ref.status == 0:
            assert res.status == "optimal" and res.objective == pytest.approx(ref.fun, abs=1e-7)
        else:
            assert res.status == "unbounded"


def test_exact_arithmetic():
    A = [[Fraction(1), Fraction(1), Fraction(0)], [Fraction(1), Fraction(-1), Fraction(1)]]
    b = [Fraction(1), Fraction(1, 3)]
    res = feasible_point(A, b, exact=True)
    assert res.feasible and all(isinstance(v, Fraction) for v in res.x)
    assert sum(A[0][j] * res.x[j] for j in range(3)) == 1
    res = feasible_point([[Fraction(1), Fraction(1)]], [Fraction(-1)], exact=True)
    assert not res.feasible


def test_redundant_rows():
    A = np.array([[1.0, 1.0], [2.0, 2.0], [1.0, 0.0]])
    res = feasible_point(A, np.array([1.0, 2.0, 0.25]))
    assert res.feasible and np.allclose(res.x, [0.25, 0.75])
