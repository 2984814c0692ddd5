"""Exact geometry of the no-signaling polytope.

Extremality is decided by a kernel-rank test on the tight-constraint system:
a valid behavior p is a vertex iff the only direction v that (i) keeps all
normalization and no-signaling sums unchanged and (ii) vanishes wherever p
does is v = 0.  A nonzero kernel vector doubles as the perturbation
certificate and drives the recursive vertex decomposition.

Membership in the convex hull of an explicit vertex list is an exact LP;
both verdicts carry witnesses that are re-verified before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Behavior, BellFunctional, Scenario, uniform_box, validate
from .linalg import kernel_vector
from .simplex import solve_lp

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Extremality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremalityCertificate:
    extremal: bool
    perturbation: tuple[Fraction, ...] | None  # nonzero direction iff not extremal

    @property
    def verdict(self) -> str:
        return "Extremal" if self.extremal else "NonExtremal"


def _equality_rows_on_support(b: Behavior, support: list[int]) -> list[list[Fraction]]:
    """Normalization + no-signaling rows restricted to the support columns."""
    s = b.scenario
    col_of = {cell: j for j, cell in enumerate(support)}
    rows: list[list[Fraction]] = []

    def row_from(cells: list[tuple[int, int]]) -> list[Fraction]:
        row = [ZERO] * len(support)
        for idx, sign in cells:
            j = col_of.get(idx)
            if j is not None:
                row[j] += sign
        return row

    for x in range(s.X):
        for y in range(s.Y):
            rows.append(row_from([(s.index(x, y, a, bb), 1) for a in range(s.A) for bb in range(s.B)]))
    for x in range(s.X):
        for a in range(s.A):
            for y in range(1, s.Y):
                cells = [(s.index(x, 0, a, bb), 1) for bb in range(s.B)]
                cells += [(s.index(x, y, a, bb), -1) for bb in range(s.B)]
                rows.append(row_from(cells))
    for y in range(s.Y):
        for bb in range(s.B):
            for x in range(1, s.X):
                cells = [(s.index(0, y, a, bb), 1) for a in range(s.A)]
                cells += [(s.index(x, y, a, bb), -1) for a in range(s.A)]
                rows.append(row_from(cells))
    return rows


def extremality_certificate(b: Behavior) -> ExtremalityCertificate:
    report = validate(b)
    if not report.ok:
        raise ValueError(f"behavior is not a valid NS point: {report.violations[0]}")
    support = [i for i, v in enumerate(b.table) if v != 0]
    rows = _equality_rows_on_support(b, support)
    kv = kernel_vector(rows, len(support))
    if kv is None:
        return ExtremalityCertificate(extremal=True, perturbation=None)
    full = [ZERO] * b.scenario.size
    for j, idx in enumerate(support):
        full[idx] = kv[j]
    return ExtremalityCertificate(extremal=False, perturbation=tuple(full))


def is_extremal(b: Behavior) -> bool:
    return extremality_certificate(b).extremal


def perturbation_steps(b: Behavior, v: tuple[Fraction, ...]) -> tuple[Fraction, Fraction]:
    """Largest alpha, beta > 0 with b + alpha*v and b - beta*v still valid."""
    alpha = None
    beta = None
    for p, d in zip(b.table, v):
        if d < 0:
            step = p / (-d)
            if alpha is None or step < alpha:
                alpha = step
        elif d > 0:
            step = p / d
            if beta is None or step < beta:
                beta = step
    if alpha is None or beta is None:
        raise ValueError("perturbation does not hit any positivity wall; not a kernel direction")
    return alpha, beta


# ---------------------------------------------------------------------------
# Vertex decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    terms: tuple[tuple[Fraction, Behavior], ...]

    def recombined(self) -> Behavior:
        first = self.terms[0][1]
        size = first.scenario.size
        acc = [ZERO] * size
        for w, vert in self.terms:
            for i, val in enumerate(vert.table):
                if val != 0:
                    acc[i] += w * val
        return Behavior(first.scenario, tuple(acc))


def _shift(b: Behavior, v: tuple[Fraction, ...], t: Fraction) -> Behavior:
    return Behavior(b.scenario, tuple(p + t * d for p, d in zip(b.table, v)))


def _vertex_below(p: Behavior) -> Behavior:
    """Follow kernel directions downhill until a vertex with support inside
    support(p) is reached; every step gains at least one zero."""
    while True:
        cert = extremality_certificate(p)
        if cert.extremal:
            return p
        v = cert.perturbation
        alpha, _ = perturbation_steps(p, v)
        p = _shift(p, v, alpha)


def decompose_into_vertices(b: Behavior) -> Decomposition:
    """Write b as an exact convex combination of NS vertices.

    Line-search recursion with one endpoint driven all the way to a vertex:
    from the current point, kernel steps lead to a vertex q in its support;
    the chord through q is then followed to the opposite wall, splitting the
    point into q and a remainder with strictly smaller support.  Both the
    downhill walk and the peeling strictly grow the zero set, so the whole
    run needs at most |support| certificates.
    """
    collected: dict[tuple, Fraction] = {}
    rem = b
    scale = ONE
    while True:
        cert = extremality_certificate(rem)
        if cert.extremal:
            collected[rem.table] = collected.get(rem.table, ZERO) + scale
            break
        q = _vertex_below(rem)
        lam = min(rv / qv for rv, qv in zip(rem.table, q.table) if qv != 0)
        if not 0 < lam < 1:
            raise RuntimeError("chord step left the open interval; q should differ from rem")
        collected[q.table] = collected.get(q.table, ZERO) + scale * lam
        rem = Behavior(
            rem.scenario,
            tuple((rv - lam * qv) / (1 - lam) for rv, qv in zip(rem.table, q.table)),
        )
        scale *= 1 - lam
    terms = tuple(
        (w, Behavior(b.scenario, table)) for table, w in sorted(collected.items())
    )
    deco = Decomposition(terms)
    _check_decomposition(deco, b)
    return deco


def _check_decomposition(deco: Decomposition, original: Behavior) -> None:
    total = sum((w for w, _ in deco.terms), ZERO)
    if total != 1 or any(w <= 0 for w, _ in deco.terms):
        raise RuntimeError("decomposition weights are not a convex combination")
    if deco.recombined().table != original.table:
        raise RuntimeError("decomposition does not recombine to the input behavior")
    for _, vert in deco.terms:
        if not is_extremal(vert):
            raise RuntimeError("decomposition produced a non-extremal term")


# ---------------------------------------------------------------------------
# Membership, visibility, functional maximization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MembershipResult:
    inside: bool
    weights: tuple[Fraction, ...] | None = None  # convex weights over the vertex list
    functional: BellFunctional | None = None     # separating functional when outside
    bound: Fraction | None = None                # with functional.value(vertex) <= bound < functional.value(b)

    @property
    def verdict(self) -> str:
        return "Inside" if self.inside else "Outside"


def _check_inside_witness(b: Behavior, vertices: list[Behavior], weights: list[Fraction]) -> None:
    if len(weights) != len(vertices):
        raise RuntimeError("weight vector length mismatch")
    if any(w < 0 for w in weights) or sum(weights, ZERO) != 1:
        raise RuntimeError("inside witness is not a convex combination")
    size = b.scenario.size
    acc = [ZERO] * size
    for w, vert in zip(weights, vertices):
        if w != 0:
            for i, val in enumerate(vert.table):
                if val != 0:
                    acc[i] += w * val
    if tuple(acc) != b.table:
        raise RuntimeError("inside witness does not reproduce the behavior")


def _check_outside_witness(b: Behavior, vertices: list[Behavior], f: BellFunctional, bound: Fraction) -> None:
    for vert in vertices:
        if f.value(vert) > bound:
            raise RuntimeError("outside witness fails on a vertex")
    if f.value(b) <= bound:
        raise RuntimeError("outside witness does not separate the behavior")


def membership(b: Behavior, vertices: list[Behavior]) -> MembershipResult:
    """Exact LP test of b in conv(vertices), with a verified witness either way."""
    if not vertices:
        raise ValueError("membership needs a nonempty vertex list")
    s = b.scenario
    if any(v.scenario != s for v in vertices):
        raise ValueError("vertices live in a different scenario than the behavior")
    size = s.size
    # rows: one per table cell plus the convex-combination row
    A = [[vert.table[i] for vert in vertices] for i in range(size)]
    A.append([ONE] * len(vertices))
    rhs = list(b.table) + [ONE]
    res = solve_lp(A, rhs, [ZERO] * len(vertices))
    if res.status == "optimal":
        weights = res.x
        _check_inside_witness(b, vertices, weights)
        return MembershipResult(inside=True, weights=tuple(weights))
    if res.status != "infeasible":
        raise RuntimeError(f"unexpected LP status {res.status}")
    y = res.farkas
    coeffs = tuple(y[:size])
    functional = BellFunctional(s, coeffs)
    bound = -y[size]
    _check_outside_witness(b, vertices, functional, bound)
    return MembershipResult(inside=False, functional=functional, bound=bound)


def critical_visibility(b: Behavior, vertices: list[Behavior]) -> Fraction:
    """Max v in [0,1] with v*b + (1-v)*uniform inside conv(vertices)."""
    res = visibility_lp(b, vertices)
    return res[0]


def visibility_lp(
    b: Behavior, vertices: list[Behavior]
) -> tuple[Fraction, tuple[Fraction, ...], BellFunctional | None, Fraction | None]:
    """Visibility LP with the optimal dual converted into a certificate.

    Returns (v*, weights, functional, bound).  For v* < 1 the functional
    satisfies functional(vertex) <= bound for every vertex in the list with
    equality pressure at the optimum; for v* = 1 the functional is None.
    """
    if not vertices:
        raise ValueError("visibility needs a nonempty vertex list")
    s = b.scenario
    if any(v.scenario != s for v in vertices):
        raise ValueError("vertices live in a different scenario than the behavior")
    size = s.size
    u = uniform_box(s)
    n = len(vertices)
    # variables: weights lambda_1..n, visibility v, slack t for v <= 1
    # rows: cell rows  sum_i lambda_i V_i - v*(b - u) = u ; convex row; v + t = 1
    A: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(size):
        row = [vert.table[i] for vert in vertices]
        row.append(u.table[i] - b.table[i])
        row.append(ZERO)
        A.append(row)
        rhs.append(u.table[i])
    A.append([ONE] * n + [ZERO, ZERO])
    rhs.append(ONE)
    A.append([ZERO] * n + [ONE, ONE])
    rhs.append(ONE)
    c = [ZERO] * n + [ONE, ZERO]
    res = solve_lp(A, rhs, c, maximize=True)
    if res.status == "infeasible":
        raise ValueError("even the v = 0 mixture (uniform box) lies outside the given hull")
    if res.status != "optimal":
        raise RuntimeError(f"visibility LP ended with status {res.status}")
    vstar = res.objective
    weights = tuple(res.x[:n])
    # mixture at the optimum must verify exactly
    mix = Behavior(s, tuple(vstar * pb + (1 - vstar) * pu for pb, pu in zip(b.table, u.table)))
    _check_inside_witness(mix, list(vertices), list(weights))
    if vstar == 1:
        return vstar, weights, None, None
    # max-LP optimality reads y.A_j >= c_j on every column; negating the cell
    # duals turns that into functional(vertex) <= bound over the vertex list
    y = res.dual
    coeffs = tuple(-v for v in y[:size])
    functional = BellFunctional(s, coeffs)
    bound = y[size]
    for vert in vertices:
        if functional.value(vert) > bound:
            raise RuntimeError("visibility dual fails on a vertex")
    return vstar, weights, functional, bound


def maximize_functional(f: BellFunctional, vertices: list[Behavior]) -> tuple[Fraction, Behavior]:
    """Exact maximum of the functional over a finite list; first argmax wins."""
    if not vertices:
        raise ValueError("cannot maximize over an empty vertex list")
    best_val = None
    best = None
    for vert in vertices:
        val = f.value(vert)
        if best_val is None or val > best_val:
            best_val = val
            best = vert
    return best_val, best
