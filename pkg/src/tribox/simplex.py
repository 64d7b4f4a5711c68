"""Two-phase dense tableau simplex with Bland's rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``.  Works in floating point or, with
``exact=True``, over ``fractions.Fraction`` (numpy object arrays).  When the
problem is infeasible the phase-1 duals give a Farkas certificate ``y`` with
``y @ A <= 0`` and ``y @ b > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exceptions import LPNumericalFailure

FEAS_TOL = 1e-8
PIVOT_TOL = 1e-11


@dataclass
class LPResult:
    status: str                   # "optimal", "infeasible" or "unbounded"
    x: Optional[np.ndarray]
    objective: Optional[float]
    farkas: Optional[np.ndarray]  # certificate of infeasibility, one entry per row of A
    phase1_objective: float
    iterations: int

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


class _Tableau:
    def __init__(self, A, b, exact: bool, tol: float):
        self.exact = exact
        self.tol = 0 if exact else tol
        m, n = A.shape
        self.m, self.n = m, n
        dtype = object if exact else float
        zero = Fraction(0) if exact else 0.0
        one = Fraction(1) if exact else 1.0
        T = np.full((m + 1, n + m + 1), zero, dtype=dtype)
        T[:m, :n] = A
        for r in range(m):
            T[r, n + r] = one
        T[:m, -1] = b
        self.T = T
        self.basis = list(range(n, n + m))
        self.iterations = 0

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] = T[r] / T[r, j]
        col = T[:, j].copy()
        col[r] = 0
        nz = np.flatnonzero(col != 0) if self.exact else np.flatnonzero(np.abs(col) > 0)
        if nz.size:
            T[nz] -= np.outer(col[nz], T[r])
        if not self.exact:
            T[:, j] = 0.0
            T[r, j] = 1.0
        self.basis[r] = j
        self.iterations += 1

    def run(self, allowed: np.ndarray, max_iter: int) -> str:
        """Iterate on the objective row until optimal; Bland's rule throughout."""
        T, tol = self.T, self.tol
        rows = [r for r in range(len(self.basis))]
        while True:
            if self.iterations > max_iter:
                raise LPNumericalFailure(f"simplex did not converge in {max_iter} pivots")
            rc = T[-1, :-1]
            cand = np.flatnonzero(allowed & (rc < -tol)) if not self.exact else [
                j for j in np.flatnonzero(allowed) if rc[j] < 0
            ]
            if len(cand) == 0:
                return "optimal"
            j = int(cand[0])
            best, leave = None, None
            for r in rows:
                a = T[r, j]
                if a > (0 if self.exact else PIVOT_TOL):
                    ratio = T[r, -1] / a
                    if (best is None or ratio < best - (0 if self.exact else 1e-14)
                            or (ratio <= best + (0 if self.exact else 1e-14) and self.basis[r] < self.basis[leave])):
                        best, leave = ratio, r
            if leave is None:
                return "unbounded"
            self.pivot(leave, j)


def solve(c, A, b, exact: bool = False, tol: float = FEAS_TOL, max_iter: int = 10000) -> LPResult:
    """Minimize ``c @ x`` subject to ``A @ x == b`` and ``x >= 0``."""
    if exact:
        A = np.array([[Fraction(v) for v in row] for row in np.asarray(A, dtype=object)], dtype=object)
        b = np.array([Fraction(v) for v in b], dtype=object)
        c = np.array([Fraction(v) for v in c], dtype=object)
    else:
        A = np.array(A, dtype=float)
        b = np.array(b, dtype=float)
        c = np.array(c, dtype=float)
    m, n = A.shape
    signs = np.array([-1 if v < 0 else 1 for v in b])
    A = A * signs[:, None]
    b = b * signs

    tab = _Tableau(A, b, exact, tol)
    T = tab.T
    # phase 1: minimize the sum of artificials
    T[-1, :] = 0
    T[-1, n:n + m] = 1
    T[-1] = T[-1] - T[:m].sum(axis=0)
    allowed = np.ones(n + m, dtype=bool)
    tab.run(allowed, max_iter)
    phase1 = -T[-1, -1]
    phase1_f = float(phase1)
    if phase1 > tab.tol:
        # y_k = 1 - reduced cost of artificial k; undo the row sign flips
        y = (1 - T[-1, n:n + m]) * signs
        return LPResult("infeasible", None, None, y, phase1_f, tab.iterations)

    # drive artificials out of the basis; rows where that is impossible are redundant
    keep = []
    for r in range(m):
        if tab.basis[r] >= n:
            row = T[r, :n]
            nz = [j for j in range(n) if (row[j] != 0 if exact else abs(row[j]) > PIVOT_TOL)]
            if nz:
                tab.pivot(r, nz[0])
                keep.append(r)
        else:
            keep.append(r)
    if len(keep) < m:
        tab.T = T = np.vstack([T[keep], T[-1:]])
        tab.basis = [tab.basis[r] for r in keep]

    # phase 2
    T[-1, :] = 0
    T[-1, :n] = c
    for r, j in enumerate(tab.basis):
        if T[-1, j] != 0:
            T[-1] = T[-1] - T[-1, j] * T[r]
    allowed = np.zeros(n + m, dtype=bool)
    allowed[:n] = True
    status = tab.run(allowed, max_iter)
    x = np.full(n, Fraction(0) if exact else 0.0, dtype=object if exact else float)
    for r, j in enumerate(tab.basis):
        if j < n:
            x[j] = T[r, -1]
    if status == "unbounded":
        return LPResult("unbounded", x, None, None, phase1_f, tab.iterations)
    obj = c @ x
    return LPResult("optimal", x, obj if exact else float(obj), None, phase1_f, tab.iterations)


def feasible_point(A, b, exact: bool = False, tol: float = FEAS_TOL) -> LPResult:
    """Find ``x >= 0`` with ``A x = b`` (phase 2 with a zero objective)."""
    n = np.asarray(A).shape[1]
    return solve(np.zeros(n, dtype=int), A, b, exact=exact, tol=tol)
