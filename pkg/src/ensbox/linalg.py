"""Exact Gaussian elimination helpers over Fractions and integers."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Row = list[Fraction]


def row_reduce(rows: list[Row], ncols: int) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form.  Returns (reduced nonzero rows, pivot columns).

    Deterministic: pivots are chosen left to right, first nonzero row wins.
    """
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pv = mat[rank][col]
        if pv != 1:
            mat[rank] = [v / pv for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                factor = mat[i][col]
                row_i = mat[i]
                row_p = mat[rank]
                mat[i] = [vi - factor * vp for vi, vp in zip(row_i, row_p)]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat[:rank], pivots


def matrix_rank(rows: list[Row], ncols: int) -> int:
    reduced, pivots = row_reduce(rows, ncols)
    return len(pivots)


def kernel_vector(rows: list[Row], ncols: int) -> list[Fraction] | None:
    """First basis vector of the kernel of the row system, or None if trivial.

    Deterministic: the free variable with the smallest column index is set
    to 1 and the result is scaled to integers with positive leading entry.
    """
    reduced, pivots = row_reduce(rows, ncols)
    pivot_set = set(pivots)
    free = next((c for c in range(ncols) if c not in pivot_set), None)
    if free is None:
        return None
    vec = [Fraction(0)] * ncols
    vec[free] = Fraction(1)
    for row, pc in zip(reduced, pivots):
        if row[free] != 0:
            vec[pc] = -row[free]
    return integerize(vec)


def kernel_basis(rows: list[Row], ncols: int) -> list[list[Fraction]]:
    reduced, pivots = row_reduce(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            if row[free] != 0:
                vec[pc] = -row[free]
        basis.append(integerize(vec))
    return basis


def integerize(vec: list[Fraction]) -> list[Fraction]:
    """Scale a rational vector to coprime integers, leading nonzero positive."""
    denoms = [v.denominator for v in vec if v != 0]
    if not denoms:
        return [Fraction(0)] * len(vec)
    mult = 1
    for d in denoms:
        mult = mult * d // gcd(mult, d)
    ints = [int(v * mult) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return [Fraction(v) for v in ints]


def affine_rank(points: list[list[Fraction]]) -> int:
    """Dimension of the affine span of a list of points."""
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[v - b for v, b in zip(p, base)] for p in points[1:]]
    return matrix_rank(diffs, len(base))


def invert_matrix(rows: list[Row]) -> list[Row]:
    """Exact inverse of a square matrix; raises ValueError when singular."""
    n = len(rows)
    aug = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, r in enumerate(rows)]
    reduced, pivots = row_reduce(aug, 2 * n)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in reduced]
