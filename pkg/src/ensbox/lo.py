"""Exclusivity graphs of independent behavior copies and clique witnesses.

Events of k independent copies multiply their probabilities; two joint
events are exclusive (adjacent) when some copy gives one party the same
input but different outputs.  A set of pairwise exclusive events whose
probabilities sum above 1 witnesses an orthogonality violation, so the
search below is an exact maximum-weight clique solver over rational weights.

Event strings follow the convention a1 b1 a2 b2 ... | x1 y1 x2 y2 ...,
one digit per symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core import Behavior, Scenario, validate

ZERO = Fraction(0)

Copy = tuple[int, int, int, int]  # (a, b, x, y)


@dataclass(frozen=True)
class JointEvent:
    copies: tuple[Copy, ...]
    weight: Fraction

    @property
    def k(self) -> int:
        return len(self.copies)


def format_event(e: JointEvent) -> str:
    outputs = "".join(f"{a}{b}" for a, b, _, _ in e.copies)
    inputs = "".join(f"{x}{y}" for _, _, x, y in e.copies)
    return f"{outputs}|{inputs}"


def parse_event(text: str, scenario: Scenario, k: int, behavior: Behavior | None = None) -> JointEvent:
    """Parse 'a1b1a2b2|x1y1x2y2'-style strings; digits must fit the scenario."""
    text = text.strip()
    if text.count("|") != 1:
        raise ValueError(f"event string needs exactly one '|': {text!r}")
    out_part, in_part = text.split("|")
    if len(out_part) != 2 * k or len(in_part) != 2 * k:
        raise ValueError(f"event string {text!r} does not encode {k} copies")
    if not (out_part.isdigit() and in_part.isdigit()):
        raise ValueError(f"event string {text!r} has non-digit symbols")
    copies = []
    for i in range(k):
        a, b = int(out_part[2 * i]), int(out_part[2 * i + 1])
        x, y = int(in_part[2 * i]), int(in_part[2 * i + 1])
        if a >= scenario.A or b >= scenario.B or x >= scenario.X or y >= scenario.Y:
            raise ValueError(f"event {text!r} has a digit outside scenario {scenario}")
        copies.append((a, b, x, y))
    weight = Fraction(1)
    if behavior is not None:
        for a, b, x, y in copies:
            weight *= behavior.prob(x, y, a, b)
    return JointEvent(tuple(copies), weight)


def events_orthogonal(e: JointEvent, f: JointEvent) -> bool:
    """Some copy gives one party equal input but different output."""
    for (a1, b1, x1, y1), (a2, b2, x2, y2) in zip(e.copies, f.copies):
        if x1 == x2 and a1 != a2:
            return True
        if y1 == y2 and b1 != b2:
            return True
    return False


@dataclass(frozen=True)
class ExclusivityGraph:
    scenario: Scenario
    k: int
    events: tuple[JointEvent, ...]
    adjacency: tuple[int, ...]  # bitmask per event

    def index_of(self, e: JointEvent) -> int:
        try:
            return self._index[e.copies]
        except AttributeError:
            object.__setattr__(self, "_index", {ev.copies: i for i, ev in enumerate(self.events)})
            return self._index[e.copies]


def build_exclusivity_graph(b: Behavior, k: int, allow_large: bool = False, max_vertices: int = 20_000) -> ExclusivityGraph:
    report = validate(b)
    if not report.ok:
        raise ValueError(f"behavior is not valid: {report.violations[0]}")
    if k not in (1, 2) and not allow_large:
        raise ValueError("copy counts beyond 2 sit behind allow_large=True")
    s = b.scenario
    single = [((a, bb, x, y), b.prob(x, y, a, bb)) for x, y, a, bb in s.cells() if b.prob(x, y, a, bb) > 0]
    count = len(single) ** k
    if count > max_vertices:
        raise ValueError(f"{count} joint events exceed the vertex guard ({max_vertices})")

    events: list[JointEvent] = []

    def extend(prefix: tuple[Copy, ...], weight: Fraction, depth: int) -> None:
        if depth == k:
            events.append(JointEvent(prefix, weight))
            return
        for copy, w in single:
            extend(prefix + (copy,), weight * w, depth + 1)

    extend((), Fraction(1), 0)
    events.sort(key=lambda e: e.copies)
    n = len(events)
    adjacency = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if events_orthogonal(events[i], events[j]):
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i
    return ExclusivityGraph(s, k, tuple(events), tuple(adjacency))


# ---------------------------------------------------------------------------
# Exact maximum-weight clique (Ostergard-style branch and bound on bitsets)
# ---------------------------------------------------------------------------


class _MaxWeightClique:
    def __init__(self, adjacency: tuple[int, ...], weights: list[int]):
        self.adj = adjacency
        self.w = weights
        self.n = len(weights)
        self.c = [0] * (self.n + 1)
        self.best = 0
        self.best_mask = 0

    def _weight_of(self, mask: int) -> int:
        total = 0
        w = self.w
        while mask:
            lsb = mask & -mask
            total += w[lsb.bit_length() - 1]
            mask ^= lsb
        return total

    def _expand(self, cand: int, current: int, mask: int, floor_idx: int) -> None:
        while cand:
            if current + self._weight_of(cand) <= self.best:
                return
            lsb = cand & -cand
            v = lsb.bit_length() - 1
            if current + self.c[v] <= self.best:
                return
            cand ^= lsb
            new_current = current + self.w[v]
            new_mask = mask | lsb
            rest = cand & self.adj[v]
            if rest == 0:
                if new_current > self.best:
                    self.best = new_current
                    self.best_mask = new_mask
            else:
                self._expand(rest, new_current, new_mask, floor_idx)

    def solve(self) -> tuple[int, int]:
        full = (1 << self.n) - 1
        for v in range(self.n - 1, -1, -1):
            above = full >> (v + 1) << (v + 1)
            cand = self.adj[v] & above
            if self.w[v] > self.best and cand == 0:
                self.best = self.w[v]
                self.best_mask = 1 << v
            else:
                self._expand(cand, self.w[v], 1 << v, v)
            self.c[v] = self.best
        return self.best, self.best_mask

    def exists_with(self, fixed_mask: int, cand: int, target: int) -> bool:
        """Is there a clique of total weight >= target extending fixed_mask?"""
        fixed_weight = self._weight_of(fixed_mask)
        if fixed_weight >= target:
            return True
        saved_best, saved_mask = self.best, self.best_mask
        self.best = target - 1
        self.best_mask = 0
        self._expand(cand, fixed_weight, fixed_mask, 0)
        ok = self.best >= target and self.best_mask != 0
        found = self.best_mask
        self.best, self.best_mask = saved_best, saved_mask
        return ok and self._weight_of(found) >= target


@dataclass(frozen=True)
class CliqueWitness:
    events: tuple[JointEvent, ...]
    total_weight: Fraction

    @property
    def violates(self) -> bool:
        return self.total_weight > 1

    @property
    def size(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class CliqueSearchResult:
    max_weight: Fraction
    best_clique: CliqueWitness
    witness: CliqueWitness | None  # present iff max_weight > 1


def _scaled_weights(events: tuple[JointEvent, ...]) -> tuple[list[int], int]:
    denom = 1
    for e in events:
        denom = denom * e.weight.denominator // gcd(denom, e.weight.denominator)
    return [int(e.weight * denom) for e in events], denom


def _lexmin_mask(solver: _MaxWeightClique, target: int) -> int:
    """Lexicographically least vertex set among cliques of weight >= target."""
    n = solver.n
    fixed = 0
    cand = (1 << n) - 1
    weight_fixed = 0
    for v in range(n):
        bit = 1 << v
        if not cand & bit:
            continue
        trial_fixed = fixed | bit
        trial_cand = cand & solver.adj[v]
        if solver.exists_with(trial_fixed, trial_cand & ~((bit << 1) - 1), target):
            fixed = trial_fixed
            cand = trial_cand
            weight_fixed += solver.w[v]
            if weight_fixed >= target:
                return fixed
    return fixed


def find_violating_clique(g: ExclusivityGraph) -> CliqueSearchResult:
    """Exact max-weight clique; the reported witness is the lexicographically
    least clique attaining the maximum weight."""
    weights, denom = _scaled_weights(g.events)
    solver = _MaxWeightClique(g.adjacency, weights)
    best, _ = solver.solve()
    mask = _lexmin_mask(solver, best)
    events = tuple(g.events[i] for i in range(len(g.events)) if mask >> i & 1)
    total = sum((e.weight for e in events), ZERO)
    witness = CliqueWitness(events, total)
    if total != Fraction(best, denom):
        raise RuntimeError("lexmin extraction does not reach the proven maximum")
    return CliqueSearchResult(
        max_weight=total,
        best_clique=witness,
        witness=witness if witness.violates else None,
    )


def verify_clique(g: ExclusivityGraph, events: list[JointEvent]) -> CliqueWitness:
    """Check pairwise adjacency inside the graph and total the weights."""
    idx = []
    for e in events:
        try:
            idx.append(g.index_of(e))
        except KeyError:
            raise ValueError(f"event {format_event(e)} is not a vertex of the graph") from None
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if not (g.adjacency[idx[i]] >> idx[j]) & 1:
                raise ValueError(
                    f"events {format_event(events[i])} and {format_event(events[j])} are not exclusive"
                )
    total = sum((g.events[i].weight for i in idx), ZERO)
    return CliqueWitness(tuple(g.events[i] for i in idx), total)


@dataclass(frozen=True)
class ConditionProfile:
    x: int  # events of weight 1/4
    y: int  # events of weight 1/16
    z: int  # events of weight 1/8

    @property
    def violates(self) -> bool:
        return Fraction(self.x, 4) + Fraction(self.y, 16) + Fraction(self.z, 8) > 1


_PROFILE_CLASSES = {Fraction(1, 4): "x", Fraction(1, 16): "y", Fraction(1, 8): "z"}


def clique_condition_profile(g: ExclusivityGraph, clique: CliqueWitness) -> ConditionProfile:
    counts = {"x": 0, "y": 0, "z": 0}
    for e in clique.events:
        cls = _PROFILE_CLASSES.get(e.weight)
        if cls is None:
            raise ValueError(f"event weight {e.weight} is outside the 1/4, 1/16, 1/8 classes")
        counts[cls] += 1
    return ConditionProfile(counts["x"], counts["y"], counts["z"])
