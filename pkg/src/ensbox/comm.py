"""Classical simulation cost: local strategies plus a one-way d-valued message.

A deterministic strategy fixes Alice's output a(x), a message m(x) with d
possible values, and Bob's output b(y, m).  Exact maximization of a linear
functional over all strategies never enumerates Bob's exponentially many
tables: for a fixed Alice side the objective separates over (y, message)
pairs, so Bob is optimized greedily, and message labels only matter through
the partition of Alice's inputs they induce.

Membership of a behavior in the d-message polytope runs an exact LP over a
growing vertex subset, with the greedy maximizer as the separation oracle;
verdicts either way come with certificates checked against the full
strategy set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .core import Behavior, BellFunctional, Scenario
from .polytope import MembershipResult, membership, visibility_lp

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class CommStrategy:
    scenario: Scenario
    d: int
    alice_out: tuple[int, ...]            # a(x)
    message: tuple[int, ...]              # m(x) in [0, d)
    bob_out: tuple[tuple[int, ...], ...]  # b(y, m), indexed [y][m]

    def __post_init__(self):
        s = self.scenario
        if self.d < 1:
            raise ValueError("message alphabet size must be >= 1")
        if len(self.alice_out) != s.X or any(not 0 <= a < s.A for a in self.alice_out):
            raise ValueError("alice_out must map every input to an output")
        if len(self.message) != s.X or any(not 0 <= m < self.d for m in self.message):
            raise ValueError("message must map every input into [0, d)")
        if len(self.bob_out) != s.Y or any(
            len(row) != self.d or any(not 0 <= b < s.B for b in row) for row in self.bob_out
        ):
            raise ValueError("bob_out must map every (input, message) pair to an output")


def strategy_behavior(st: CommStrategy) -> Behavior:
    """The deterministic table of a strategy.  May signal from Alice to Bob,
    so it is a valid *table* (normalized) but not necessarily an NS point."""
    s = st.scenario
    table = [ZERO] * s.size
    for x in range(s.X):
        a = st.alice_out[x]
        m = st.message[x]
        for y in range(s.Y):
            table[s.index(x, y, a, st.bob_out[y][m])] = ONE
    return Behavior(s, tuple(table))


def raw_strategy_count(s: Scenario, d: int) -> int:
    return s.A**s.X * d**s.X * s.B ** (s.Y * d)


def enumerate_strategies(s: Scenario, d: int, max_raw: int = 2_000_000) -> Iterator[CommStrategy]:
    """Every strategy exactly once up to equality of the produced behavior."""
    raw = raw_strategy_count(s, d)
    if raw > max_raw:
        raise ValueError(f"{raw} raw strategies exceed the guard ({max_raw})")
    seen: set[tuple] = set()
    bob_rows = list(itertools.product(range(s.B), repeat=d))
    for alice_out in itertools.product(range(s.A), repeat=s.X):
        for message in itertools.product(range(d), repeat=s.X):
            for bob in itertools.product(bob_rows, repeat=s.Y):
                st = CommStrategy(s, d, alice_out, message, bob)
                key = strategy_behavior(st).table
                if key not in seen:
                    seen.add(key)
                    yield st


# ---------------------------------------------------------------------------
# Exact functional maximization (Alice loop + greedy Bob)
# ---------------------------------------------------------------------------


def _partitions_with_max_blocks(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings over n items with fewer than or d blocks."""
    rgs = [0] * n

    def rec(i: int, mx: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(rgs)
            return
        for label in range(min(mx + 1, d - 1) + 1):
            rgs[i] = label
            yield from rec(i + 1, max(mx, label))

    yield from rec(1, 0) if n > 0 else iter(())


def _integer_coefficients(f: BellFunctional) -> tuple[list[list[list[list[int]]]], int]:
    s = f.scenario
    denom = 1
    for v in f.coefficients:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    nested = [
        [[[int(f.coefficients[s.index(x, y, a, b)] * denom) for b in range(s.B)] for a in range(s.A)]
         for y in range(s.Y)]
        for x in range(s.X)
    ]
    return nested, denom


def strategy_oracle(f: BellFunctional, d: int) -> tuple[Fraction, CommStrategy]:
    """Exact max of the functional over all d-message strategies, with a
    deterministic argmax strategy."""
    s = f.scenario
    coeffs, denom = _integer_coefficients(f)
    best_val: int | None = None
    best_key = None
    for alice_out in itertools.product(range(s.A), repeat=s.X):
        # G[y][b][x] with Alice's outputs substituted
        g = [[[coeffs[x][y][alice_out[x]][b] for x in range(s.X)] for b in range(s.B)] for y in range(s.Y)]
        for rgs in _partitions_with_max_blocks(s.X, d):
            nblocks = max(rgs) + 1
            members: list[list[int]] = [[] for _ in range(nblocks)]
            for x, lab in enumerate(rgs):
                members[lab].append(x)
            total = 0
            bob = []
            for y in range(s.Y):
                row = []
                gy = g[y]
                for blk in members:
                    best_b, best_s = 0, sum(gy[0][x] for x in blk)
                    for b in range(1, s.B):
                        sb = sum(gy[b][x] for x in blk)
                        if sb > best_s:
                            best_b, best_s = b, sb
                    total += best_s
                    row.append(best_b)
                row.extend([0] * (d - nblocks))
                bob.append(tuple(row))
            if best_val is None or total > best_val:
                best_val = total
                best_key = (alice_out, rgs, tuple(bob))
    alice_out, rgs, bob = best_key
    strategy = CommStrategy(s, d, alice_out, rgs, bob)
    return Fraction(best_val, denom), strategy


def lhvd_value(f: BellFunctional, d: int) -> Fraction:
    """Exact optimum of the functional over local strategies with a d-valued
    one-way message."""
    value, _ = strategy_oracle(f, d)
    return value


# ---------------------------------------------------------------------------
# The m-input diagonal family and its tilted-correlation functional
# ---------------------------------------------------------------------------


def diagonal_box(m: int) -> Behavior:
    """(m, m, 2, 2) box: anti-correlated on equal non-first inputs, else
    perfectly correlated, all entries 0 or 1/2."""
    if m < 2:
        raise ValueError("need at least two inputs per side")
    s = Scenario(m, m, 2, 2)
    half = Fraction(1, 2)
    table = [ZERO] * s.size
    for x in range(m):
        for y in range(m):
            flip = 1 if (x == y and x >= 1) else 0
            for a in range(2):
                table[s.index(x, y, a, a ^ flip)] = half
    return Behavior(s, tuple(table))


def build_F(m: int) -> BellFunctional:
    """Coefficients +1 on the support pattern of the diagonal box, -1 off it
    (equals 4*diagonal_box(m) - 1 entrywise)."""
    if m < 2:
        raise ValueError("need at least two inputs per side")
    s = Scenario(m, m, 2, 2)
    coeffs = []
    for x, y, a, b in s.cells():
        target = 1 if (x == y and x >= 1) else 0
        coeffs.append(ONE if (a + b) % 2 == target else -ONE)
    return BellFunctional(s, tuple(coeffs))


# ---------------------------------------------------------------------------
# Membership and visibility against the d-message polytope (lazy exact LP)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DitMembership:
    d: int
    result: MembershipResult
    vertices: tuple[Behavior, ...]  # the strategy behaviors the witness refers to
    oracle_max: Fraction | None     # max of the separating functional over all strategies


def _local_strategy_seeds(s: Scenario, d: int) -> list[CommStrategy]:
    seeds = []
    for alice_out in itertools.product(range(s.A), repeat=s.X):
        for bob_const in itertools.product(range(s.B), repeat=s.Y):
            seeds.append(
                CommStrategy(s, d, alice_out, (0,) * s.X, tuple((b,) * d for b in bob_const))
            )
    return seeds


def membership_dit(b: Behavior, d: int, max_rounds: int = 10_000) -> DitMembership:
    """Exact membership of b in the d-message polytope via lazy vertex generation."""
    s = b.scenario
    vertices: list[Behavior] = []
    seen: set[tuple] = set()
    for st in _local_strategy_seeds(s, d):
        beh = strategy_behavior(st)
        if beh.table not in seen:
            seen.add(beh.table)
            vertices.append(beh)
    for _ in range(max_rounds):
        res = membership(b, vertices)
        if res.inside:
            return DitMembership(d, res, tuple(vertices), None)
        mx, strat = strategy_oracle(res.functional, d)
        if mx <= res.bound:
            return DitMembership(d, res, tuple(vertices), mx)
        beh = strategy_behavior(strat)
        if beh.table in seen:
            raise RuntimeError("separation oracle returned a known vertex; no progress")
        seen.add(beh.table)
        vertices.append(beh)
    raise RuntimeError("membership loop did not converge within the round guard")


def comm_visibility(b: Behavior, d: int, max_rounds: int = 10_000) -> Fraction:
    """Critical visibility of b with respect to the d-message polytope."""
    s = b.scenario
    vertices: list[Behavior] = []
    seen: set[tuple] = set()
    for st in _local_strategy_seeds(s, d):
        beh = strategy_behavior(st)
        if beh.table not in seen:
            seen.add(beh.table)
            vertices.append(beh)
    for _ in range(max_rounds):
        vstar, _, functional, bound = visibility_lp(b, vertices)
        if functional is None:
            return vstar
        mx, strat = strategy_oracle(functional, d)
        if mx <= bound:
            return vstar
        beh = strategy_behavior(strat)
        if beh.table in seen:
            raise RuntimeError("separation oracle returned a known vertex; no progress")
        seen.add(beh.table)
        vertices.append(beh)
    raise RuntimeError("visibility loop did not converge within the round guard")


@dataclass(frozen=True)
class MinDitResult:
    min_d: int | None                  # None when the cap was exceeded
    cap: int
    memberships: tuple[DitMembership, ...]  # results for d = 1, 2, ...

    @property
    def last_outside(self) -> DitMembership | None:
        outs = [m for m in self.memberships if not m.result.inside]
        return outs[-1] if outs else None


def min_dit(b: Behavior, d_max: int = 5) -> MinDitResult:
    """Smallest message alphabet whose polytope contains b, up to d_max."""
    results = []
    for d in range(1, d_max + 1):
        res = membership_dit(b, d)
        results.append(res)
        if res.result.inside:
            return MinDitResult(d, d_max, tuple(results))
    return MinDitResult(None, d_max, tuple(results))
