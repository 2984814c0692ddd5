"""Hypothesis strategies and random-mixture helpers shared by the suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from ensbox import Behavior, Scenario, deterministic_behavior

small_scenarios = st.builds(
    Scenario,
    X=st.integers(2, 3),
    Y=st.integers(2, 3),
    A=st.integers(2, 3),
    B=st.integers(2, 3),
)


@st.composite
def scenario_and_behavior(draw):
    """A random valid behavior: a rational convex mixture of deterministic boxes."""
    s = draw(small_scenarios)
    n_terms = draw(st.integers(1, 4))
    table = [Fraction(0)] * s.size
    raw = [draw(st.integers(1, 8)) for _ in range(n_terms)]
    total = sum(raw)
    for w in raw:
        a_of_x = [draw(st.integers(0, s.A - 1)) for _ in range(s.X)]
        b_of_y = [draw(st.integers(0, s.B - 1)) for _ in range(s.Y)]
        det = deterministic_behavior(s, a_of_x, b_of_y)
        for i, v in enumerate(det.table):
            table[i] += Fraction(w, total) * v
    return s, Behavior(s, tuple(table))


def random_mixture(s: Scenario, rng: random.Random, components: list[Behavior], terms: int = 3) -> Behavior:
    """Random rational convex mixture of the given behaviors."""
    picks = [components[rng.randrange(len(components))] for _ in range(terms)]
    raw = [Fraction(rng.randint(1, 9)) for _ in range(terms)]
    total = sum(raw)
    weights = [w / total for w in raw]
    table = [Fraction(0)] * s.size
    for w, b in zip(weights, picks):
        for i, v in enumerate(b.table):
            table[i] += w * v
    return Behavior(s, tuple(table))
