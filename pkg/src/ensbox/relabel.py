"""Relabeling symmetries of a Bell scenario and classification up to them.

A relabeling optionally swaps the parties (legal only for X = Y, A = B),
permutes each party's inputs, and permutes each party's outputs separately
for every input.  Cells transform as

    no swap:  (x, y, a, b) -> (pX[x], pY[y], sA[x][a], sB[y][b])
    swap:     (x, y, a, b) -> (pX[y], pY[x], sA[y][b], sB[x][a])

where the output permutations are indexed by the *source* input.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core import Behavior, Scenario, transpose_parties

Perm = tuple[int, ...]


def _is_perm(p: Perm, n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


def _compose_perm(outer: Perm, inner: Perm) -> Perm:
    """outer after inner: result[i] = outer[inner[i]]."""
    return tuple(outer[i] for i in inner)


def _invert_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


@dataclass(frozen=True)
class Relabeling:
    scenario: Scenario
    swap: bool
    x_perm: Perm
    y_perm: Perm
    a_perms: tuple[Perm, ...]
    b_perms: tuple[Perm, ...]

    def __post_init__(self):
        s = self.scenario
        if self.swap and (s.X != s.Y or s.A != s.B):
            raise ValueError("party swap is only legal when X = Y and A = B")
        if not _is_perm(self.x_perm, s.X):
            raise ValueError("x_perm is not a permutation of the inputs")
        if not _is_perm(self.y_perm, s.Y):
            raise ValueError("y_perm is not a permutation of the inputs")
        if len(self.a_perms) != s.X or any(not _is_perm(p, s.A) for p in self.a_perms):
            raise ValueError("a_perms must hold one permutation of [A] per Alice input")
        if len(self.b_perms) != s.Y or any(not _is_perm(p, s.B) for p in self.b_perms):
            raise ValueError("b_perms must hold one permutation of [B] per Bob input")

    def cell_image(self, x: int, y: int, a: int, b: int) -> tuple[int, int, int, int]:
        if self.swap:
            return (self.x_perm[y], self.y_perm[x], self.a_perms[y][b], self.b_perms[x][a])
        return (self.x_perm[x], self.y_perm[y], self.a_perms[x][a], self.b_perms[y][b])


def identity_relabeling(s: Scenario) -> Relabeling:
    return Relabeling(
        scenario=s,
        swap=False,
        x_perm=tuple(range(s.X)),
        y_perm=tuple(range(s.Y)),
        a_perms=tuple(tuple(range(s.A)) for _ in range(s.X)),
        b_perms=tuple(tuple(range(s.B)) for _ in range(s.Y)),
    )


def random_relabeling(s: Scenario, rng: random.Random, allow_swap: bool = True) -> Relabeling:
    def rp(n: int) -> Perm:
        p = list(range(n))
        rng.shuffle(p)
        return tuple(p)

    swap = allow_swap and s.X == s.Y and s.A == s.B and rng.random() < 0.5
    return Relabeling(
        scenario=s,
        swap=swap,
        x_perm=rp(s.X),
        y_perm=rp(s.Y),
        a_perms=tuple(rp(s.A) for _ in range(s.X)),
        b_perms=tuple(rp(s.B) for _ in range(s.Y)),
    )


def group_generators(s: Scenario) -> list[Relabeling]:
    """Adjacent transpositions of inputs/outputs plus the party swap."""
    gens: list[Relabeling] = []
    ident = identity_relabeling(s)

    def transpose(n: int, i: int) -> Perm:
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        return tuple(p)

    for i in range(s.X - 1):
        gens.append(Relabeling(s, False, transpose(s.X, i), ident.y_perm, ident.a_perms, ident.b_perms))
    for i in range(s.Y - 1):
        gens.append(Relabeling(s, False, ident.x_perm, transpose(s.Y, i), ident.a_perms, ident.b_perms))
    for x in range(s.X):
        for i in range(s.A - 1):
            a_perms = list(ident.a_perms)
            a_perms[x] = transpose(s.A, i)
            gens.append(Relabeling(s, False, ident.x_perm, ident.y_perm, tuple(a_perms), ident.b_perms))
    for y in range(s.Y):
        for i in range(s.B - 1):
            b_perms = list(ident.b_perms)
            b_perms[y] = transpose(s.B, i)
            gens.append(Relabeling(s, False, ident.x_perm, ident.y_perm, ident.a_perms, tuple(b_perms)))
    if s.X == s.Y and s.A == s.B:
        gens.append(Relabeling(s, True, ident.x_perm, ident.y_perm, ident.a_perms, ident.b_perms))
    return gens


def apply_relabeling(b: Behavior, r: Relabeling) -> Behavior:
    if b.scenario != r.scenario:
        raise ValueError("relabeling was built for a different scenario")
    s = b.scenario
    table = [Fraction(0)] * s.size
    for x, y, a, bb in s.cells():
        nx, ny, na, nb = r.cell_image(x, y, a, bb)
        table[s.index(nx, ny, na, nb)] = b.prob(x, y, a, bb)
    return Behavior(s, tuple(table))


def compose(second: Relabeling, first: Relabeling) -> Relabeling:
    """The relabeling acting as `first` followed by `second`."""
    if second.scenario != first.scenario:
        raise ValueError("cannot compose relabelings of different scenarios")
    s = first.scenario
    s1, s2 = first.swap, second.swap
    if not s1 and not s2:
        return Relabeling(
            s, False,
            _compose_perm(second.x_perm, first.x_perm),
            _compose_perm(second.y_perm, first.y_perm),
            tuple(_compose_perm(second.a_perms[first.x_perm[x]], first.a_perms[x]) for x in range(s.X)),
            tuple(_compose_perm(second.b_perms[first.y_perm[y]], first.b_perms[y]) for y in range(s.Y)),
        )
    if s1 and not s2:
        return Relabeling(
            s, True,
            _compose_perm(second.x_perm, first.x_perm),
            _compose_perm(second.y_perm, first.y_perm),
            tuple(_compose_perm(second.a_perms[first.x_perm[y]], first.a_perms[y]) for y in range(s.Y)),
            tuple(_compose_perm(second.b_perms[first.y_perm[x]], first.b_perms[x]) for x in range(s.X)),
        )
    if not s1 and s2:
        return Relabeling(
            s, True,
            _compose_perm(second.x_perm, first.y_perm),
            _compose_perm(second.y_perm, first.x_perm),
            tuple(_compose_perm(second.a_perms[first.y_perm[y]], first.b_perms[y]) for y in range(s.Y)),
            tuple(_compose_perm(second.b_perms[first.x_perm[x]], first.a_perms[x]) for x in range(s.X)),
        )
    return Relabeling(
        s, False,
        _compose_perm(second.x_perm, first.y_perm),
        _compose_perm(second.y_perm, first.x_perm),
        tuple(_compose_perm(second.a_perms[first.y_perm[x]], first.b_perms[x]) for x in range(s.X)),
        tuple(_compose_perm(second.b_perms[first.x_perm[y]], first.a_perms[y]) for y in range(s.Y)),
    )


def inverse(r: Relabeling) -> Relabeling:
    s = r.scenario
    ix = _invert_perm(r.x_perm)
    iy = _invert_perm(r.y_perm)
    if not r.swap:
        return Relabeling(
            s, False, ix, iy,
            tuple(_invert_perm(r.a_perms[ix[x]]) for x in range(s.X)),
            tuple(_invert_perm(r.b_perms[iy[y]]) for y in range(s.Y)),
        )
    return Relabeling(
        s, True,
        iy, ix,
        tuple(_invert_perm(r.b_perms[ix[y]]) for y in range(s.Y)),
        tuple(_invert_perm(r.a_perms[iy[x]]) for x in range(s.X)),
    )


# ---------------------------------------------------------------------------
# Canonical form: the lexicographically minimal table over the full orbit.
#
# Branch-and-prune: the table is built stripe by stripe in flat-index order
# (block (0,0), then (0,1), ..., then stripe x=1, ...).  At every level only
# the choices attaining the current minimal prefix survive, so a branch is
# cut the moment its partial table exceeds the best one.
# ---------------------------------------------------------------------------


def _integer_table(b: Behavior) -> tuple[list[list[list[list[int]]]], int]:
    """Nested [x][y][a][b] integer table over the common denominator."""
    s = b.scenario
    denom = 1
    for v in b.table:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    nested = [
        [[[int(b.prob(x, y, a, bb) * denom) for bb in range(s.B)] for a in range(s.A)] for y in range(s.Y)]
        for x in range(s.X)
    ]
    return nested, denom


def _min_table_no_swap(t, X: int, Y: int, A: int, B: int) -> tuple[int, ...]:
    """Lexicographic minimum of the permuted flat table over the non-swap group."""
    a_perms = list(itertools.permutations(range(A)))
    b_perms = list(itertools.permutations(range(B)))

    def block(x_src: int, sa: Perm, y_src: int, sb: Perm) -> tuple[int, ...]:
        blk = t[x_src][y_src]
        # entry (a', b') of the permuted block comes from (sa^-1 a', sb^-1 b')
        out = [0] * (A * B)
        for a in range(A):
            ra = sa[a] * B
            row = blk[a]
            for b in range(B):
                out[ra + sb[b]] = row[b]
        return tuple(out)

    # Branch state: (used_x tuple of (src, sa), used_y tuple of (src, sb)).
    # Level order: (x0, sa0, y0, sb0); then (y_j, sb_j) for j = 1..Y-1;
    # then (x_i, sa_i) for i = 1..X-1.  Prefixes are equal across live
    # branches by construction, so only the choice values are compared.
    best_block: tuple[int, ...] | None = None
    branches: list[tuple[tuple, tuple]] = []
    for x0 in range(X):
        for sa0 in a_perms:
            for y0 in range(Y):
                for sb0 in b_perms:
                    blk = block(x0, sa0, y0, sb0)
                    if best_block is None or blk < best_block:
                        best_block = blk
                        branches = [(((x0, sa0),), ((y0, sb0),))]
                    elif blk == best_block:
                        branches.append((((x0, sa0),), ((y0, sb0),)))
    prefix: list[int] = list(best_block)

    for _ in range(1, Y):
        best: tuple[int, ...] | None = None
        new_branches: list[tuple[tuple, tuple]] = []
        for used_x, used_y in branches:
            x0, sa0 = used_x[0]
            used_ys = {src for src, _ in used_y}
            for y_src in range(Y):
                if y_src in used_ys:
                    continue
                for sb in b_perms:
                    blk = block(x0, sa0, y_src, sb)
                    if best is None or blk < best:
                        best = blk
                        new_branches = [(used_x, used_y + ((y_src, sb),))]
                    elif blk == best:
                        new_branches.append((used_x, used_y + ((y_src, sb),)))
        prefix.extend(best)
        branches = _dedupe_y_branches(new_branches, t, X)

    for _ in range(1, X):
        best_str: tuple[int, ...] | None = None
        new_branches = []
        for used_x, used_y in branches:
            used_xs = {src for src, _ in used_x}
            for x_src in range(X):
                if x_src in used_xs:
                    continue
                for sa in a_perms:
                    stripe = []
                    for y_src, sb in used_y:
                        stripe.extend(block(x_src, sa, y_src, sb))
                    stripe = tuple(stripe)
                    if best_str is None or stripe < best_str:
                        best_str = stripe
                        new_branches = [(used_x + ((x_src, sa),), used_y)]
                    elif stripe == best_str:
                        new_branches.append((used_x + ((x_src, sa),), used_y))
        prefix.extend(best_str)
        branches = new_branches

    return tuple(prefix)


def _dedupe_y_branches(branches, t, X: int):
    """Drop branches whose remaining search is forced to agree.

    Once the y side is (partially) fixed, the future of a branch depends on
    the chosen column data and on the multiset of untouched rows; branches
    identical under that key explore the same subtree.
    """
    if len(branches) <= 1:
        return branches
    seen = {}
    for used_x, used_y in branches:
        x0, sa0 = used_x[0]
        # Future stripes read block(x, sa, y_src, sb), whose data as a
        # function of the still-free sa is t[x][y_src][a][inv_sb[b']].
        fixed_cols = []
        for y_src, sb in used_y:
            inv_sb = _invert_perm(sb)
            fixed_cols.append(
                tuple(
                    tuple(t[x][y_src][a][inv_sb[b]] for b in range(len(sb)))
                    for x in range(X)
                    for a in range(len(t[x][y_src]))
                )
            )
        key = (x0, sa0, tuple(fixed_cols), frozenset(src for src, _ in used_y))
        if key not in seen:
            seen[key] = (used_x, used_y)
    return list(seen.values())


def canonical_form(b: Behavior) -> Behavior:
    """Lexicographically minimal relabeled table; constant on orbits."""
    s = b.scenario
    t, denom = _integer_table(b)
    if len(set(b.table)) == 1:
        return Behavior(s, tuple(b.table))
    best = _min_table_no_swap(t, s.X, s.Y, s.A, s.B)
    if s.X == s.Y and s.A == s.B:
        tb = transpose_parties(b)
        tt, denom_t = _integer_table(tb)
        cand = _min_table_no_swap(tt, s.X, s.Y, s.A, s.B)
        if cand < best:
            best = cand
    return Behavior(s, tuple(Fraction(v, denom) for v in best))


@dataclass(frozen=True)
class BehaviorClass:
    representative: Behavior
    size: int
    members: tuple[Behavior, ...]


def _orbit_partition(distinct: list[Behavior]) -> list[list[Behavior]] | None:
    """Union-find partition via group generators; None if the set is not
    closed under the relabeling group."""
    if not distinct:
        return []
    s = distinct[0].scenario
    index = {b.table: i for i, b in enumerate(distinct)}
    parent = list(range(len(distinct)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    gens = group_generators(s)
    for i, b in enumerate(distinct):
        for g in gens:
            img = apply_relabeling(b, g)
            j = index.get(img.table)
            if j is None:
                return None
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[Behavior]] = {}
    for i, b in enumerate(distinct):
        groups.setdefault(find(i), []).append(b)
    return [groups[k] for k in sorted(groups)]


def classify(behaviors: list[Behavior]) -> list[BehaviorClass]:
    """Partition behaviors into relabeling classes.

    When the input happens to be closed under the group (a full vertex
    list), orbits are found by a cheap union-find over the generators;
    otherwise each behavior is canonicalized.  Classes come back sorted by
    their canonical representative.
    """
    if not behaviors:
        return []
    s = behaviors[0].scenario
    if any(b.scenario != s for b in behaviors):
        raise ValueError("classify requires behaviors of a single scenario")

    counts: dict[tuple, int] = {}
    order: list[Behavior] = []
    for b in behaviors:
        if b.table not in counts:
            counts[b.table] = 0
            order.append(b)
        counts[b.table] += 1

    partition = _orbit_partition(order)
    classes: list[BehaviorClass] = []
    if partition is not None:
        for members in partition:
            rep = canonical_form(members[0])
            size = sum(counts[m.table] for m in members)
            classes.append(BehaviorClass(rep, size, tuple(members)))
    else:
        by_canon: dict[tuple, list[Behavior]] = {}
        for b in order:
            by_canon.setdefault(canonical_form(b).table, []).append(b)
        for canon_table, members in by_canon.items():
            rep = Behavior(s, canon_table)
            size = sum(counts[m.table] for m in members)
            classes.append(BehaviorClass(rep, size, tuple(members)))
    classes.sort(key=lambda c: c.representative.table)
    return classes
