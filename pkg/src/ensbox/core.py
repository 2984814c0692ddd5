"""Scenarios, behaviors, and the exact no-signaling constraint checks.

Every probability is a `fractions.Fraction`; nothing in a decision path ever
touches floating point.  The flat table layout is fixed once and for all:
entry (x, y, a, b) lives at index ((x*Y + y)*A + a)*B + b, and every
serialization format uses that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions; reject floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True, order=True)
class Scenario:
    """A bipartite Bell scenario: X/Y input settings, A/B outcomes per party."""

    X: int
    Y: int
    A: int
    B: int

    def __post_init__(self):
        for name in ("X", "Y", "A", "B"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 2:
                raise ValueError(f"scenario cardinality {name} must be an int >= 2, got {v!r}")

    @property
    def size(self) -> int:
        return self.X * self.Y * self.A * self.B

    def index(self, x: int, y: int, a: int, b: int) -> int:
        return ((x * self.Y + y) * self.A + a) * self.B + b

    def cells(self) -> Iterator[tuple[int, int, int, int]]:
        for x in range(self.X):
            for y in range(self.Y):
                for a in range(self.A):
                    for b in range(self.B):
                        yield x, y, a, b

    def transposed(self) -> Scenario:
        return Scenario(self.Y, self.X, self.B, self.A)

    def __str__(self) -> str:
        return f"({self.X},{self.Y},{self.A},{self.B})"


def ns_dimension(s: Scenario) -> int:
    """Affine dimension of the no-signaling polytope of `s`."""
    return s.X * s.Y * (s.A - 1) * (s.B - 1) + s.X * (s.A - 1) + s.Y * (s.B - 1)


@dataclass(frozen=True)
class Behavior:
    """A conditional probability table p(ab|xy) with exact rational entries.

    The constructor only enforces the shape; use `validate` to check
    positivity, normalization, and no-signaling.  Instances are immutable
    and hashable, so they can be deduplicated in sets and dicts.
    """

    scenario: Scenario
    table: tuple[Fraction, ...]

    def __post_init__(self):
        table = tuple(as_fraction(v) for v in self.table)
        if len(table) != self.scenario.size:
            raise ValueError(
                f"table has {len(table)} entries, scenario {self.scenario} needs {self.scenario.size}"
            )
        object.__setattr__(self, "table", table)

    def prob(self, x: int, y: int, a: int, b: int) -> Fraction:
        return self.table[self.scenario.index(x, y, a, b)]

    def alice_marginal(self, a: int, x: int, y: int = 0) -> Fraction:
        s = self.scenario
        return sum((self.prob(x, y, a, b) for b in range(s.B)), ZERO)

    def bob_marginal(self, b: int, y: int, x: int = 0) -> Fraction:
        s = self.scenario
        return sum((self.prob(x, y, a, b) for a in range(s.A)), ZERO)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.table) if v != 0)

    def zero_count(self) -> int:
        return sum(1 for v in self.table if v == 0)

    def is_deterministic(self) -> bool:
        return all(v == 0 or v == 1 for v in self.table)

    def is_full_output(self) -> bool:
        """True when every single-party marginal p(a|x), p(b|y) is positive."""
        s = self.scenario
        for x in range(s.X):
            for a in range(s.A):
                if self.alice_marginal(a, x) == 0:
                    return False
        for y in range(s.Y):
            for b in range(s.B):
                if self.bob_marginal(b, y) == 0:
                    return False
        return True


@dataclass(frozen=True)
class BellFunctional:
    """A linear functional on behaviors: value(p) = sum of coeff * p entries."""

    scenario: Scenario
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_fraction(v) for v in self.coefficients)
        if len(coeffs) != self.scenario.size:
            raise ValueError("coefficient table does not match the scenario shape")
        object.__setattr__(self, "coefficients", coeffs)

    def value(self, b: Behavior) -> Fraction:
        if b.scenario != self.scenario:
            raise ValueError("behavior and functional live in different scenarios")
        return sum((c * v for c, v in zip(self.coefficients, b.table) if c != 0), ZERO)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate(b: Behavior) -> ValidationReport:
    """Check positivity, normalization, and no-signaling, all exactly.

    Each violated constraint is reported by name so callers (and the CLI)
    can point at the offending cell.
    """
    s = b.scenario
    violations: list[str] = []
    for x, y, a, bb in s.cells():
        v = b.prob(x, y, a, bb)
        if v < 0:
            violations.append(f"positivity: p({a}{bb}|{x}{y}) = {v} < 0")
    for x in range(s.X):
        for y in range(s.Y):
            total = sum((b.prob(x, y, a, bb) for a in range(s.A) for bb in range(s.B)), ZERO)
            if total != 1:
                violations.append(f"normalization: sum_ab p(ab|{x}{y}) = {total} != 1")
    for x in range(s.X):
        for a in range(s.A):
            ref = b.alice_marginal(a, x, 0)
            for y in range(1, s.Y):
                got = b.alice_marginal(a, x, y)
                if got != ref:
                    violations.append(
                        f"no-signaling (Alice): sum_b p({a}b|{x}y) depends on y ({ref} at y=0, {got} at y={y})"
                    )
    for y in range(s.Y):
        for bb in range(s.B):
            ref = b.bob_marginal(bb, y, 0)
            for x in range(1, s.X):
                got = b.bob_marginal(bb, y, x)
                if got != ref:
                    violations.append(
                        f"no-signaling (Bob): sum_a p(a{bb}|xy={x}{y}) depends on x ({ref} at x=0, {got} at x={x})"
                    )
    return ValidationReport(ok=not violations, violations=tuple(violations))


def uniform_box(s: Scenario) -> Behavior:
    """The white-noise behavior: every entry 1/(A*B)."""
    v = Fraction(1, s.A * s.B)
    return Behavior(s, (v,) * s.size)


def deterministic_behavior(s: Scenario, a_of_x: Sequence[int], b_of_y: Sequence[int]) -> Behavior:
    """Local deterministic box from output assignments a(x), b(y)."""
    if len(a_of_x) != s.X or len(b_of_y) != s.Y:
        raise ValueError("output assignment lengths do not match the scenario")
    table = [ZERO] * s.size
    for x in range(s.X):
        for y in range(s.Y):
            table[s.index(x, y, a_of_x[x], b_of_y[y])] = ONE
    return Behavior(s, tuple(table))


def transpose_parties(b: Behavior) -> Behavior:
    """Swap the two parties: p'(ba|yx) = p(ab|xy) in scenario (Y, X, B, A)."""
    s = b.scenario
    t = s.transposed()
    table = [ZERO] * t.size
    for x, y, a, bb in s.cells():
        table[t.index(y, x, bb, a)] = b.prob(x, y, a, bb)
    return Behavior(t, tuple(table))


def behavior_from_rows(s: Scenario, rows: Sequence[Sequence], scale: Fraction | int = 1) -> Behavior:
    """Build a behavior from X*A rows of Y*B entries (block-matrix layout).

    Row x*A + a holds the entries for Alice's pair (x, a); column y*B + b
    holds Bob's pair (y, b).  `scale` multiplies every entry, which keeps
    integer-grid constants readable.
    """
    sc = as_fraction(scale)
    if len(rows) != s.X * s.A:
        raise ValueError(f"expected {s.X * s.A} rows, got {len(rows)}")
    table = [ZERO] * s.size
    for r, row in enumerate(rows):
        if len(row) != s.Y * s.B:
            raise ValueError(f"row {r} has {len(row)} entries, expected {s.Y * s.B}")
        x, a = divmod(r, s.A)
        for c, entry in enumerate(row):
            y, bb = divmod(c, s.B)
            table[s.index(x, y, a, bb)] = as_fraction(entry) * sc
    return Behavior(s, tuple(table))


# ---------------------------------------------------------------------------
# Serialization.  Text format:
#   line 1: "X Y A B"
#   then X*Y lines (index x*Y + y), each with A*B rationals in index a*B + b.
# JSON mirror: {"scenario": [X, Y, A, B], "table": ["num/den", ...]}.
# ---------------------------------------------------------------------------


def format_rational(v: Fraction) -> str:
    return str(v)


def behavior_to_text(b: Behavior) -> str:
    s = b.scenario
    lines = [f"{s.X} {s.Y} {s.A} {s.B}"]
    for x in range(s.X):
        for y in range(s.Y):
            entries = [format_rational(b.prob(x, y, a, bb)) for a in range(s.A) for bb in range(s.B)]
            lines.append(" ".join(entries))
    return "\n".join(lines) + "\n"


def behavior_from_text(text: str) -> Behavior:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty behavior file")
    head = lines[0].split()
    if len(head) != 4:
        raise ValueError(f"header must be 'X Y A B', got {lines[0]!r}")
    try:
        s = Scenario(*(int(t) for t in head))
    except ValueError as exc:
        raise ValueError(f"bad scenario header: {exc}") from exc
    if len(lines) != 1 + s.X * s.Y:
        raise ValueError(f"expected {s.X * s.Y} table lines, got {len(lines) - 1}")
    table = [ZERO] * s.size
    for i, line in enumerate(lines[1:]):
        x, y = divmod(i, s.Y)
        entries = line.split()
        if len(entries) != s.A * s.B:
            raise ValueError(f"line {i + 2}: expected {s.A * s.B} entries, got {len(entries)}")
        for j, tok in enumerate(entries):
            a, bb = divmod(j, s.B)
            try:
                table[s.index(x, y, a, bb)] = Fraction(tok)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"line {i + 2}: bad rational {tok!r}") from exc
    return Behavior(s, tuple(table))


def behavior_to_json_obj(b: Behavior) -> dict:
    s = b.scenario
    return {"scenario": [s.X, s.Y, s.A, s.B], "table": [format_rational(v) for v in b.table]}


def behavior_from_json_obj(obj: dict) -> Behavior:
    try:
        s = Scenario(*(int(v) for v in obj["scenario"]))
        table = tuple(Fraction(str(v)) for v in obj["table"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad behavior JSON: {exc}") from exc
    return Behavior(s, table)


def behavior_to_json(b: Behavior) -> str:
    return json.dumps(behavior_to_json_obj(b), indent=None, separators=(",", ":")) + "\n"


def behavior_from_json(text: str) -> Behavior:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    return behavior_from_json_obj(obj)


def functional_to_json_obj(f: BellFunctional, bound: Fraction | None = None) -> dict:
    s = f.scenario
    obj = {"scenario": [s.X, s.Y, s.A, s.B], "table": [format_rational(v) for v in f.coefficients]}
    if bound is not None:
        obj["bound"] = format_rational(bound)
    return obj


def functional_from_json_obj(obj: dict) -> tuple[BellFunctional, Fraction | None]:
    s = Scenario(*(int(v) for v in obj["scenario"]))
    coeffs = tuple(Fraction(str(v)) for v in obj["table"])
    bound = Fraction(str(obj["bound"])) if "bound" in obj else None
    return BellFunctional(s, coeffs), bound
