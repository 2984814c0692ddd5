"""Exact rational simplex (two phases, Bland's rule, explicit certificates).

Solves   min c.x   subject to  A x = b,  x >= 0   entirely over Fractions.
Bland's rule makes every run deterministic and cycle-free; speed is traded
away deliberately, these LPs are desk-sized.

The returned duals refer to the *original* equality rows, and an infeasible
system comes back with a Farkas vector y (y.A <= 0, y.b > 0) that callers
turn into separating functionals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    objective: Fraction | None = None
    dual: list[Fraction] | None = None
    farkas: list[Fraction] | None = None


class _Tableau:
    def __init__(self, A: list[list[Fraction]], b: list[Fraction]):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        rows = []
        rhs = []
        self.flip = [False] * self.m
        for i in range(self.m):
            if b[i] < 0:
                rows.append([-v for v in A[i]])
                rhs.append(-b[i])
                self.flip[i] = True
            else:
                rows.append(list(A[i]))
                rhs.append(b[i])
        # columns: n structural, m artificial, rhs
        self.T = []
        for i in range(self.m):
            row = rows[i] + [ZERO] * self.m + [rhs[i]]
            row[self.n + i] = ONE
            self.T.append(row)
        self.basis = [self.n + i for i in range(self.m)]
        self.live_rows = list(range(self.m))  # original row ids of surviving rows

    @property
    def width(self) -> int:
        return self.n + self.m + 1

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        ncols = self.n + self.m
        y_rowsums: list[tuple[Fraction, list[Fraction]]] = []
        for r, bcol in enumerate(self.basis):
            cb = cost[bcol]
            if cb != 0:
                y_rowsums.append((cb, self.T[r]))
        red = list(cost[:ncols])
        for cb, row in y_rowsums:
            for j in range(ncols):
                rv = row[j]
                if rv != 0:
                    red[j] -= cb * rv
        return red

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        prow = T[row]
        pv = prow[col]
        if pv != 1:
            T[row] = prow = [v / pv for v in prow]
        for i in range(len(T)):
            if i == row:
                continue
            f = T[i][col]
            if f != 0:
                ri = T[i]
                T[i] = [vi - f * vp for vi, vp in zip(ri, prow)]
        self.basis[row] = col

    def run(self, cost: list[Fraction], barred: set[int]) -> str:
        """Bland's-rule iterations for min cost; returns 'optimal'/'unbounded'."""
        ncols = self.n + self.m
        while True:
            red = self.reduced_costs(cost)
            enter = -1
            for j in range(ncols):
                if j in barred:
                    continue
                if red[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best_ratio = None
            for i in range(len(self.T)):
                coef = self.T[i][enter]
                if coef > 0:
                    ratio = self.T[i][-1] / coef
                    if best_ratio is None or ratio < best_ratio or (
                        ratio == best_ratio and self.basis[i] < self.basis[leave]
                    ):
                        best_ratio = ratio
                        leave = i
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter)

    def value_of(self, col: int) -> Fraction:
        for i, bcol in enumerate(self.basis):
            if bcol == col:
                return self.T[i][-1]
        return ZERO

    def duals_from(self, cost: list[Fraction]) -> list[Fraction]:
        """One multiplier per original row, read off the artificial columns."""
        red = self.reduced_costs(cost)
        duals = [cost[self.n + i] - red[self.n + i] for i in range(self.m)]
        return [-v if f else v for v, f in zip(duals, self.flip)]


def solve_lp(
    A: list[list[Fraction]],
    b: list[Fraction],
    c: list[Fraction],
    maximize: bool = False,
) -> LPResult:
    """Exact solution of min/max c.x subject to A x = b, x >= 0."""
    m = len(A)
    if m == 0:
        raise ValueError("LP needs at least one constraint row")
    n = len(A[0])
    if any(len(row) != n for row in A) or len(b) != m or len(c) != n:
        raise ValueError("inconsistent LP dimensions")
    cost = [(-v if maximize else v) for v in c]

    tab = _Tableau(A, b)
    phase1_cost = [ZERO] * tab.n + [ONE] * tab.m
    status = tab.run(phase1_cost, barred=set())
    if status != "optimal":  # phase 1 is bounded below by 0
        raise RuntimeError("phase 1 cannot be unbounded")
    infeasibility = sum((tab.value_of(tab.n + i) for i in range(tab.m)), ZERO)
    if infeasibility > 0:
        y = tab.duals_from(phase1_cost)
        return LPResult(status="infeasible", farkas=y)

    # Drive remaining zero-valued artificials out of the basis.
    for i in range(len(tab.T) - 1, -1, -1):
        if tab.basis[i] >= tab.n:
            pivot_col = next((j for j in range(tab.n) if tab.T[i][j] != 0), None)
            if pivot_col is None:
                del tab.T[i]
                del tab.basis[i]
                del tab.live_rows[i]
            else:
                tab.pivot(i, pivot_col)

    phase2_cost = cost + [ZERO] * tab.m
    barred = {tab.n + i for i in range(tab.m)}
    status = tab.run(phase2_cost, barred=barred)
    if status == "unbounded":
        return LPResult(status="unbounded")
    x = [tab.value_of(j) for j in range(n)]
    obj = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    dual = tab.duals_from(phase2_cost)
    if maximize:
        dual = [-v for v in dual]
    return LPResult(status="optimal", x=x, objective=obj, dual=dual)


def feasible_point(A: list[list[Fraction]], b: list[Fraction]) -> LPResult:
    """Pure feasibility of A x = b, x >= 0 (phase 1 only)."""
    n = len(A[0])
    return solve_lp(A, b, [ZERO] * n)
