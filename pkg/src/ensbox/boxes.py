"""Constructors for candidate extremal boxes and the named fixture correlations.

Two parametric families are provided.  The block family places a correlated
g x h rectangle of circulant blocks (identity on the first block row and
column) above a deterministic remainder; the permutation family tiles the
table with 1/d-weighted permutation matrices whose interior permutations
must act transitively on the outcomes.  The named constants (pr, box1..box5,
p_ms, p1, p2) are golden fixtures used across the test suite, and the magic
square behavior is independently reproduced from its quantum realization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .core import Behavior, BellFunctional, Scenario, behavior_from_rows, deterministic_behavior

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Block family with circulant interior
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Eq1Spec:
    """Spec for the circulant block family (requires A = B).

    The correlated region spans block rows 0..g-1 and columns 0..h-1: its
    first row and column hold (1/A)*identity, the interior holds cyclic
    shifts by `offsets[i-1][j-1]`.  Rows >= g are deterministic for Alice
    (uniform for Bob), columns >= h deterministic for Bob, and the corner
    block is fully deterministic.
    """

    scenario: Scenario
    g: int
    h: int
    offsets: tuple[tuple[int, ...], ...]  # shape (g-1) x (h-1)

    def __post_init__(self):
        s = self.scenario
        if s.A != s.B:
            raise ValueError("the block family needs A = B")
        if not (2 <= self.g <= s.X and 2 <= self.h <= s.Y):
            raise ValueError(f"need 2 <= g <= X and 2 <= h <= Y, got g={self.g}, h={self.h}")
        if len(self.offsets) != self.g - 1 or any(len(r) != self.h - 1 for r in self.offsets):
            raise ValueError("offsets must have shape (g-1) x (h-1)")
        if any(not (0 <= o < s.A) for row in self.offsets for o in row):
            raise ValueError("offsets must lie in [0, A)")

    def coprime_only(self) -> bool:
        return all(gcd(o, self.scenario.A) == 1 for row in self.offsets for o in row)


def eq1_box(spec: Eq1Spec) -> Behavior:
    s = spec.scenario
    A = s.A
    inv_a = Fraction(1, A)
    table = [ZERO] * s.size

    def put_shift(x: int, y: int, offset: int) -> None:
        for a in range(A):
            table[s.index(x, y, a, (a + offset) % A)] = inv_a

    for x in range(s.X):
        for y in range(s.Y):
            corr_x, corr_y = x < spec.g, y < spec.h
            if corr_x and corr_y:
                if x == 0 or y == 0:
                    put_shift(x, y, 0)
                else:
                    put_shift(x, y, spec.offsets[x - 1][y - 1])
            elif corr_x:  # deterministic column region: b = 0
                for a in range(A):
                    table[s.index(x, y, a, 0)] = inv_a
            elif corr_y:  # deterministic row region: a = 0
                for b in range(A):
                    table[s.index(x, y, 0, b)] = inv_a
            else:
                table[s.index(x, y, 0, 0)] = ONE
    return Behavior(s, tuple(table))


def enumerate_eq1(s: Scenario, coprime_only: bool = False) -> Iterator[tuple[Eq1Spec, Behavior]]:
    """All block-family specs of `s`, optionally only full-cycle shifts."""
    if s.A != s.B:
        raise ValueError("the block family needs A = B")
    allowed = [o for o in range(s.A) if not coprime_only or gcd(o, s.A) == 1]
    for g in range(2, s.X + 1):
        for h in range(2, s.Y + 1):
            cells = (g - 1) * (h - 1)
            for combo in itertools.product(allowed, repeat=cells):
                offsets = tuple(
                    tuple(combo[i * (h - 1) + j] for j in range(h - 1)) for i in range(g - 1)
                )
                spec = Eq1Spec(s, g, h, offsets)
                yield spec, eq1_box(spec)


# ---------------------------------------------------------------------------
# Permutation family (A = B = d, all nonzero entries 1/d)
# ---------------------------------------------------------------------------


def _perm_order(p: tuple[int, ...]) -> int:
    order = 1
    cur = p
    ident = tuple(range(len(p)))
    while cur != ident:
        cur = tuple(p[i] for i in cur)
        order += 1
    return order


def _transitive(perms: Sequence[tuple[int, ...]], d: int) -> bool:
    reach = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for p in perms:
            for w in (p[v],):
                if w not in reach:
                    reach.add(w)
                    frontier.append(w)
            inv = p.index(v)
            if inv not in reach:
                reach.add(inv)
                frontier.append(inv)
    return len(reach) == d


@dataclass(frozen=True)
class NsddSpec:
    """Spec for the permutation-tiled family in (X, Y, d, d).

    Blocks on the first input row/column are (1/d)*identity; interior block
    (x, y), x, y >= 1, is the 1/d-weighted permutation perms[x-1][y-1].  The
    distinguished (1,1) permutation must have order exactly k, and all the
    interior permutations together must act transitively on the outcomes
    (otherwise the box splits into a convex mixture along the orbits).
    """

    scenario: Scenario
    k: int
    perms: tuple[tuple[tuple[int, ...], ...], ...]  # shape (X-1) x (Y-1)

    def __post_init__(self):
        s = self.scenario
        if s.A != s.B:
            raise ValueError("the permutation family needs A = B = d")
        d = s.A
        if len(self.perms) != s.X - 1 or any(len(r) != s.Y - 1 for r in self.perms):
            raise ValueError("perms must have shape (X-1) x (Y-1)")
        for row in self.perms:
            for p in row:
                if sorted(p) != list(range(d)):
                    raise ValueError(f"{p!r} is not a permutation of range({d})")
        if _perm_order(self.perms[0][0]) != self.k:
            raise ValueError("the distinguished permutation must have order exactly k")
        flat = [p for row in self.perms for p in row]
        if not _transitive(flat, d):
            raise ValueError("interior permutations must act transitively on the outcomes")


def nsdd_box(spec: NsddSpec) -> Behavior:
    s = spec.scenario
    d = s.A
    w = Fraction(1, d)
    table = [ZERO] * s.size
    ident = tuple(range(d))
    for x in range(s.X):
        for y in range(s.Y):
            perm = ident if (x == 0 or y == 0) else spec.perms[x - 1][y - 1]
            for a in range(d):
                table[s.index(x, y, a, perm[a])] = w
    return Behavior(s, tuple(table))


def enumerate_nsdd(s: Scenario) -> Iterator[tuple[NsddSpec, Behavior]]:
    """All valid permutation-family specs of `s` (can be large)."""
    d = s.A
    cells = (s.X - 1) * (s.Y - 1)
    all_perms = list(itertools.permutations(range(d)))
    for combo in itertools.product(all_perms, repeat=cells):
        perms = tuple(tuple(combo[i * (s.Y - 1) + j] for j in range(s.Y - 1)) for i in range(s.X - 1))
        if not _transitive([p for row in perms for p in row], d):
            continue
        k = _perm_order(perms[0][0])
        spec = NsddSpec(s, k, perms)
        yield spec, nsdd_box(spec)


# ---------------------------------------------------------------------------
# Local deterministic boxes and the PR box
# ---------------------------------------------------------------------------


def local_deterministic_boxes(s: Scenario, max_count: int = 100_000) -> list[Behavior]:
    count = s.A**s.X * s.B**s.Y
    if count > max_count:
        raise ValueError(f"{count} deterministic boxes exceed the guard ({max_count})")
    boxes = []
    for a_of_x in itertools.product(range(s.A), repeat=s.X):
        for b_of_y in itertools.product(range(s.B), repeat=s.Y):
            boxes.append(deterministic_behavior(s, a_of_x, b_of_y))
    return boxes


def pr_box() -> Behavior:
    """The (2,2,2,2) box with p(ab|xy) = 1/2 iff a xor b = x*y."""
    s = Scenario(2, 2, 2, 2)
    half = Fraction(1, 2)
    table = [ZERO] * s.size
    for x in range(2):
        for y in range(2):
            for a in range(2):
                b = a ^ (x & y)
                table[s.index(x, y, a, b)] = half
    return Behavior(s, tuple(table))


# ---------------------------------------------------------------------------
# Named fixture boxes (golden test data, entered as integer grids)
# ---------------------------------------------------------------------------

_BOX1_ROWS = [
    [0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 1, 0],
    [2, 0, 0, 2, 0, 2],
    [0, 2, 0, 2, 0, 2],
    [1, 0, 0, 1, 1, 0],
    [1, 0, 1, 0, 0, 1],
    [0, 1, 0, 1, 1, 0],
    [0, 1, 1, 0, 0, 1],
    [2, 0, 0, 2, 0, 2],
]

_BOX2_ROWS = [
    [0, 1, 0, 1, 0, 1],
    [0, 1, 0, 1, 1, 0],
    [1, 0, 1, 0, 0, 1],
    [0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1],
    [1, 0, 0, 1, 1, 0],
    [0, 1, 0, 1, 1, 0],
    [0, 1, 1, 0, 0, 1],
    [1, 0, 0, 1, 0, 1],
]

_BOX3_ROWS = [
    [0, 0, 2, 0, 0, 2, 0, 0, 2],
    [0, 1, 0, 0, 1, 0, 0, 1, 0],
    [1, 0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 1, 0],
    [0, 0, 1, 0, 1, 0, 1, 0, 0],
    [1, 1, 0, 1, 0, 1, 0, 0, 2],
]

_BOX4_ROWS = [
    [0, 0, 1, 0, 0, 1, 0, 0, 1],
    [0, 1, 0, 0, 1, 0, 0, 0, 1],
    [2, 0, 0, 2, 0, 0, 1, 1, 0],
    [0, 0, 1, 0, 1, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 1, 1, 0, 0],
    [2, 0, 0, 2, 0, 0, 0, 0, 2],
]

_BOX5_ROWS = [
    [0, 0, 1, 0, 0, 1, 0, 0, 1],
    [0, 1, 0, 0, 1, 0, 0, 1, 0],
    [1, 0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 1, 0],
    [0, 1, 0, 0, 1, 0, 1, 0, 0],
    [1, 0, 0, 1, 0, 0, 0, 0, 1],
]

_PMS_ROWS = [
    [1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0],
    [1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1],
    [0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1],
    [0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0],
    [1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1],
    [1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0],
    [0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0],
    [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
    [1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1],
    [1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0],
    [0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0],
    [0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1],
]

_P1_ROWS = [
    [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
    [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1],
]

_P2_ROWS = [
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
    [0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0],
]


def box1() -> Behavior:
    return behavior_from_rows(Scenario(3, 3, 3, 2), _BOX1_ROWS, Fraction(1, 4))


def box2() -> Behavior:
    return behavior_from_rows(Scenario(3, 3, 3, 2), _BOX2_ROWS, Fraction(1, 3))


def box3() -> Behavior:
    return behavior_from_rows(Scenario(2, 3, 3, 3), _BOX3_ROWS, Fraction(1, 4))


def box4() -> Behavior:
    return behavior_from_rows(Scenario(2, 3, 3, 3), _BOX4_ROWS, Fraction(1, 4))


def box5() -> Behavior:
    return behavior_from_rows(Scenario(2, 3, 3, 3), _BOX5_ROWS, Fraction(1, 3))


def magic_square_behavior() -> Behavior:
    return behavior_from_rows(Scenario(3, 3, 4, 4), _PMS_ROWS, Fraction(1, 8))


def magic_square_functional() -> BellFunctional:
    b = magic_square_behavior()
    coeffs = tuple(ONE if v != 0 else ZERO for v in b.table)
    return BellFunctional(b.scenario, coeffs)


def magic_square_p1_p2() -> tuple[Behavior, Behavior]:
    s = Scenario(3, 3, 4, 4)
    return (
        behavior_from_rows(s, _P1_ROWS, Fraction(1, 4)),
        behavior_from_rows(s, _P2_ROWS, Fraction(1, 4)),
    )


# Measurement bases of the two-ququart realization, one integer vector per
# (outcome | input); rows and columns of the parity game square.
_ALICE_VECTORS = [
    [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
    [(1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)],
    [(1, 1, 1, -1), (1, 1, -1, 1), (1, -1, 1, 1), (-1, 1, 1, 1)],
]

_BOB_VECTORS = [
    [(1, 1, 0, 0), (1, -1, 0, 0), (0, 0, 1, 1), (0, 0, 1, -1)],
    [(1, 0, 1, 0), (1, 0, -1, 0), (0, 1, 0, 1), (0, 1, 0, -1)],
    [(1, 0, 0, -1), (1, 0, 0, 1), (0, 1, -1, 0), (0, 1, 1, 0)],
]


def quantum_realization() -> Behavior:
    """Magic square correlations from the maximally entangled two-ququart state.

    For real rank-1 projectors onto v (Alice) and w (Bob) and the state
    (1/2) * sum_i |ii>, the Born rule gives p = (v.w)^2 / (4 |v|^2 |w|^2),
    which is exact in rationals for integer vectors.
    """
    s = Scenario(3, 3, 4, 4)
    table = [ZERO] * s.size
    for x in range(3):
        for y in range(3):
            for a in range(4):
                va = _ALICE_VECTORS[x][a]
                na = sum(v * v for v in va)
                for b in range(4):
                    wb = _BOB_VECTORS[y][b]
                    nb = sum(w * w for w in wb)
                    dot = sum(v * w for v, w in zip(va, wb))
                    table[s.index(x, y, a, b)] = Fraction(dot * dot, 4 * na * nb)
    return Behavior(s, tuple(table))


FIXTURES = {
    "pr": pr_box,
    "box1": box1,
    "box2": box2,
    "box3": box3,
    "box4": box4,
    "box5": box5,
    "p_ms": magic_square_behavior,
    "p1": lambda: magic_square_p1_p2()[0],
    "p2": lambda: magic_square_p1_p2()[1],
}
