"""Complete vertex enumeration of no-signaling polytopes by double description.

The polytope is handled in its minimal affine parametrization (party
marginals plus joint terms for all but the last outcome), homogenized with
one extra coordinate.  The H-representation is then exactly the A*B*X*Y
positivity inequalities written in those coordinates, with integer rows.

Rays are integer vectors reduced to content 1.  Adjacency of two rays uses
the combinatorial zero-set test, accelerated with numpy uint64 bitmasks:
a candidate pair survives iff no third ray's zero set contains the pair's
common zero set.  Constraint insertion order is the classic max-cutoff
heuristic (most violated first), with seed-saturated constraints given
priority, which keeps the intermediate ray counts close to the final one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .core import Behavior, Scenario, ns_dimension, validate
from .linalg import invert_matrix, row_reduce

ZERO = Fraction(0)


class EnumerationGuardError(RuntimeError):
    """Raised when a scenario exceeds the configured resource ceilings."""


@dataclass(frozen=True)
class GuardLimits:
    max_dimension: int = 36
    max_rays: int = 2_000_000


# ---------------------------------------------------------------------------
# Affine (marginal + joint) coordinates
# ---------------------------------------------------------------------------


class _CGMap:
    """Index bookkeeping for the marginal/joint parametrization of `s`."""

    def __init__(self, s: Scenario):
        self.s = s
        self.dim = ns_dimension(s)
        self.n_alice = s.X * (s.A - 1)
        self.n_bob = s.Y * (s.B - 1)

    def alice(self, x: int, a: int) -> int:
        return x * (self.s.A - 1) + a

    def bob(self, y: int, b: int) -> int:
        return self.n_alice + y * (self.s.B - 1) + b

    def joint(self, x: int, y: int, a: int, b: int) -> int:
        s = self.s
        return self.n_alice + self.n_bob + ((x * s.Y + y) * (s.A - 1) + a) * (s.B - 1) + b

    def cell_row(self, x: int, y: int, a: int, b: int) -> list[int]:
        """Integer row r with p(ab|xy) = r . (coords, t)."""
        s = self.s
        row = [0] * (self.dim + 1)
        la, lb = a < s.A - 1, b < s.B - 1
        if la and lb:
            row[self.joint(x, y, a, b)] = 1
        elif la:
            row[self.alice(x, a)] = 1
            for bb in range(s.B - 1):
                row[self.joint(x, y, a, bb)] -= 1
        elif lb:
            row[self.bob(y, b)] = 1
            for aa in range(s.A - 1):
                row[self.joint(x, y, aa, b)] -= 1
        else:
            row[self.dim] = 1
            for aa in range(s.A - 1):
                row[self.alice(x, aa)] -= 1
            for bb in range(s.B - 1):
                row[self.bob(y, bb)] -= 1
            for aa in range(s.A - 1):
                for bb in range(s.B - 1):
                    row[self.joint(x, y, aa, bb)] += 1
        return row

    def behavior_to_coords(self, b: Behavior) -> list[Fraction]:
        s = self.s
        coords = [ZERO] * (self.dim + 1)
        for x in range(s.X):
            for a in range(s.A - 1):
                coords[self.alice(x, a)] = b.alice_marginal(a, x)
        for y in range(s.Y):
            for bb in range(s.B - 1):
                coords[self.bob(y, bb)] = b.bob_marginal(bb, y)
        for x in range(s.X):
            for y in range(s.Y):
                for a in range(s.A - 1):
                    for bb in range(s.B - 1):
                        coords[self.joint(x, y, a, bb)] = b.prob(x, y, a, bb)
        coords[self.dim] = Fraction(1)
        return coords

    def coords_to_behavior(self, coords: list[Fraction]) -> Behavior:
        s = self.s
        rows = self.all_rows()
        table = []
        for x, y, a, b in s.cells():
            row = rows[s.index(x, y, a, b)]
            table.append(sum((Fraction(r) * c for r, c in zip(row, coords) if r), ZERO))
        return Behavior(s, tuple(table))

    def all_rows(self) -> list[list[int]]:
        if not hasattr(self, "_rows"):
            s = self.s
            self._rows = [self.cell_row(x, y, a, b) for x, y, a, b in s.cells()]
        return self._rows


def _reduce_ray(vec: list[int]) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g > 1:
        vec = [v // g for v in vec]
    return tuple(vec)


def _dot(row: list[int], vec: tuple[int, ...]) -> int:
    return sum(r * v for r, v in zip(row, vec) if r)


# ---------------------------------------------------------------------------
# Double description core
# ---------------------------------------------------------------------------


def _initial_cone(rows: list[list[int]], dim: int) -> tuple[list[int], list[tuple[int, ...]]]:
    """Pick dim independent rows; simplicial cone rays = scaled inverse cols."""
    frac_rows = [[Fraction(v) for v in r] for r in rows]
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    rank = 0
    for i, fr in enumerate(frac_rows):
        trial = basis + [fr]
        reduced, pivots = row_reduce(trial, dim)
        if len(pivots) > rank:
            rank = len(pivots)
            basis = reduced
            chosen.append(i)
            if rank == dim:
                break
    if rank < dim:
        raise RuntimeError("positivity rows do not span the homogenized space")
    inv = invert_matrix([[Fraction(v) for v in rows[i]] for i in chosen])
    rays = []
    for j in range(dim):
        col = [inv[i][j] for i in range(dim)]
        denom_lcm = 1
        for v in col:
            denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
        rays.append(_reduce_ray([int(v * denom_lcm) for v in col]))
    return chosen, rays


def _masks_for(rays_masks: list[int], lanes: int) -> np.ndarray:
    out = np.zeros((len(rays_masks), lanes), dtype=np.uint64)
    for i, m in enumerate(rays_masks):
        for l in range(lanes):
            out[i, l] = (m >> (64 * l)) & 0xFFFFFFFFFFFFFFFF
    return out


def _zero_mask(ray: tuple[int, ...], rows: list[list[int]]) -> int:
    m = 0
    for k, row in enumerate(rows):
        if _dot(row, ray) == 0:
            m |= 1 << k
    return m


def _double_description(
    rows: list[list[int]],
    dim: int,
    order_hint: list[int],
    limits: GuardLimits,
    ordering: str = "mincut",
) -> list[tuple[int, ...]]:
    nrows = len(rows)
    lanes = (nrows + 63) // 64
    chosen_local, rays = _initial_cone([rows[i] for i in order_hint], dim)
    chosen = {order_hint[i] for i in chosen_local}
    processed_mask = 0
    for i in chosen:
        processed_mask |= 1 << i
    masks = [_zero_mask(r, rows) for r in rays]
    remaining = [i for i in order_hint if i not in chosen]
    # dot products of every remaining constraint with every current ray,
    # kept in sync incrementally (this is the hot bookkeeping)
    ray_dots: dict[int, list[int]] = {i: [_dot(rows[i], r) for r in rays] for i in remaining}

    while remaining:
        if ordering == "static":
            idx = remaining[0]
        else:
            sign = -1 if ordering == "maxcut" else 1
            best_i, best_key = None, None
            for i in remaining:
                neg_count = sum(1 for d in ray_dots[i] if d < 0)
                key = sign * neg_count
                if best_key is None or key < best_key:
                    best_key, best_i = key, i
            idx = best_i
        dots = ray_dots.pop(idx)
        remaining.remove(idx)

        if all(d >= 0 for d in dots):
            processed_mask |= 1 << idx
            continue

        pos = [k for k, d in enumerate(dots) if d > 0]
        neg = [k for k, d in enumerate(dots) if d < 0]
        zero = [k for k, d in enumerate(dots) if d == 0]

        pm_lanes = np.zeros(lanes, dtype=np.uint64)
        for l in range(lanes):
            pm_lanes[l] = np.uint64((processed_mask >> (64 * l)) & 0xFFFFFFFFFFFFFFFF)
        mask_arr = _masks_for(masks, lanes)
        masked = mask_arr & pm_lanes  # zero sets w.r.t. processed constraints

        # one bitset over rays per processed constraint: which rays are tight
        nrays = len(rays)
        ray_bitsets: dict[int, int] = {}
        for c in range(nrows):
            if not (processed_mask >> c) & 1:
                continue
            col = (masked[:, c // 64] >> np.uint64(c % 64)) & np.uint64(1)
            packed = np.packbits(col.astype(np.uint8), bitorder="little")
            ray_bitsets[c] = int.from_bytes(packed.tobytes(), "little")

        pos_arr = np.array(pos, dtype=np.int64)
        neg_arr = np.array(neg, dtype=np.int64)
        new_rays: list[tuple[int, ...]] = []
        new_masks: list[int] = []
        need = dim - 2

        # candidate filter by common-zero popcount, then an exact dominator
        # count: a (pos, neg) pair is adjacent iff exactly the two rays
        # themselves are tight on the pair's common zero set
        verdict_cache: dict[tuple[int, ...], bool] = {}
        chunk = max(1, 8_000_000 // max(1, len(neg)))
        for start in range(0, len(pos), chunk):
            pblock = pos_arr[start : start + chunk]
            inter = masked[pblock][:, None, :] & masked[neg_arr][None, :, :]
            cnt = np.bitwise_count(inter).sum(axis=2)
            cand_p, cand_n = np.nonzero(cnt >= need)
            inter_flat = inter[cand_p, cand_n]
            for row_idx, (cp, cn) in enumerate(zip(cand_p.tolist(), cand_n.tolist())):
                key = tuple(int(v) for v in inter_flat[row_idx])
                verdict = verdict_cache.get(key)
                if verdict is None:
                    dom = -1
                    for lane_idx, lane in enumerate(key):
                        while lane:
                            lsb = lane & -lane
                            c = 64 * lane_idx + lsb.bit_length() - 1
                            lane ^= lsb
                            bs = ray_bitsets[c]
                            dom = bs if dom == -1 else dom & bs
                            if dom == 0:
                                break
                        if dom == 0:
                            break
                    verdict = dom != -1 and dom.bit_count() == 2
                    verdict_cache[key] = verdict
                if not verdict:
                    continue
                ip = int(pblock[cp])
                im = int(neg[cn])
                dp, dn = dots[ip], dots[im]
                vec = [dp * vn - dn * vp for vp, vn in zip(rays[ip], rays[im])]
                ray = _reduce_ray(vec)
                new_rays.append(ray)
                new_masks.append(_zero_mask(ray, rows))

        keep = pos + zero
        rays = [rays[k] for k in keep] + new_rays
        masks = [masks[k] for k in keep] + new_masks
        for j in remaining:
            old = ray_dots[j]
            ray_dots[j] = [old[k] for k in keep] + [_dot(rows[j], r) for r in new_rays]
        processed_mask |= 1 << idx
        if len(rays) > limits.max_rays:
            raise EnumerationGuardError(
                f"intermediate ray count {len(rays)} exceeds the guard ({limits.max_rays})"
            )
    return rays


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------


def enumerate_vertices(
    s: Scenario,
    seeds: list[Behavior] | None = None,
    limits: GuardLimits = GuardLimits(),
    ordering: str = "mincut",
) -> list[Behavior]:
    """All vertices of the NS polytope of `s`, in deterministic table order.

    Seeds must be valid extremal behaviors of `s`; they prioritize the
    constraints they saturate in the insertion order and are checked to be
    present in the output.
    """
    from .polytope import is_extremal  # local import to avoid a cycle at import time

    dim = ns_dimension(s)
    if dim > limits.max_dimension:
        raise EnumerationGuardError(
            f"ns_dimension {dim} of {s} exceeds the guard ({limits.max_dimension})"
        )
    seeds = list(seeds or [])
    for seed in seeds:
        if seed.scenario != s:
            raise ValueError("seed lives in a different scenario")
        rep = validate(seed)
        if not rep.ok:
            raise ValueError(f"seed is not a valid behavior: {rep.violations[0]}")
        if not is_extremal(seed):
            raise ValueError("seed is not extremal")

    cg = _CGMap(s)
    rows = cg.all_rows()

    # order hint: constraints saturated by many seeds first, stable by index
    sat_counts = [0] * len(rows)
    for seed in seeds:
        for i, v in enumerate(seed.table):
            if v == 0:
                sat_counts[i] += 1
    order_hint = sorted(range(len(rows)), key=lambda i: (-sat_counts[i], i))

    rays = _double_description(rows, dim + 1, order_hint, limits, ordering=ordering)

    vertices = []
    for ray in rays:
        t = ray[-1]
        if t <= 0:
            raise RuntimeError("unbounded direction found; the NS polytope must be bounded")
        coords = [Fraction(v, t) for v in ray]
        vertices.append(cg.coords_to_behavior(coords))
    vertices.sort(key=lambda b: b.table)

    for seed in seeds:
        if not any(v.table == seed.table for v in vertices):
            raise RuntimeError("a verified extremal seed is missing from the enumeration")
    return vertices
