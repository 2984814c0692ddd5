"""Relabeling group axioms, canonical forms, classification."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ensbox import (
    Behavior,
    Scenario,
    apply_relabeling,
    canonical_form,
    classify,
    compose,
    deterministic_behavior,
    group_generators,
    identity_relabeling,
    inverse,
    local_deterministic_boxes,
    pr_box,
    random_relabeling,
    transpose_parties,
    uniform_box,
    validate,
)
from ensbox.relabel import Relabeling

from strategies import scenario_and_behavior


@st.composite
def behavior_and_relabelings(draw):
    from strategies import scenario_and_behavior as sab

    s, b = draw(sab())
    seed1, seed2 = draw(st.integers(0, 10**6)), draw(st.integers(0, 10**6))
    r1 = random_relabeling(s, random.Random(seed1))
    r2 = random_relabeling(s, random.Random(seed2))
    return b, r1, r2


@given(behavior_and_relabelings())
@settings(max_examples=40, deadline=None)
def test_group_action_axioms(data):
    b, r1, r2 = data
    s = b.scenario
    ident = identity_relabeling(s)
    assert apply_relabeling(b, ident) == b
    # composition law
    assert apply_relabeling(apply_relabeling(b, r1), r2) == apply_relabeling(b, compose(r2, r1))
    # inverses
    assert apply_relabeling(apply_relabeling(b, r1), inverse(r1)) == b
    assert compose(r1, inverse(r1)).cell_image(0, 0, 0, 0) == (0, 0, 0, 0)


@given(behavior_and_relabelings())
@settings(max_examples=30, deadline=None)
def test_relabeling_preserves_validity(data):
    b, r1, _ = data
    assert validate(apply_relabeling(b, r1)).ok


def test_party_swap_illegal_on_asymmetric_scenarios():
    s = Scenario(2, 3, 3, 2)
    with pytest.raises(ValueError):
        Relabeling(
            s, True,
            tuple(range(s.X)), tuple(range(s.Y)),
            tuple(tuple(range(s.A)) for _ in range(s.X)),
            tuple(tuple(range(s.B)) for _ in range(s.Y)),
        )


def test_swap_relabeling_matches_transpose():
    b = pr_box()
    s = b.scenario
    ident = identity_relabeling(s)
    swap = Relabeling(s, True, ident.x_perm, ident.y_perm, ident.a_perms, ident.b_perms)
    assert apply_relabeling(b, swap) == transpose_parties(b)


def test_canonical_form_invariant_on_orbit(fixture_boxes):
    rng = random.Random(20240817)
    for name in ("pr", "box1", "box5"):
        b = fixture_boxes[name]
        canon = canonical_form(b)
        for _ in range(25):
            r = random_relabeling(b.scenario, rng)
            assert canonical_form(apply_relabeling(b, r)) == canon


def test_canonical_form_idempotent(fixture_boxes):
    for b in fixture_boxes.values():
        c = canonical_form(b)
        assert canonical_form(c) == c


def test_canonical_form_of_uniform_box_is_itself():
    u = uniform_box(Scenario(3, 3, 4, 4))
    assert canonical_form(u) == u


def test_pr_orbit_single_canonical_form():
    """All eight output-flip variants of the PR box share one canonical form."""
    s = Scenario(2, 2, 2, 2)
    half = Fraction(1, 2)
    variants = []
    for alpha, beta, gamma in itertools.product((0, 1), repeat=3):
        table = [Fraction(0)] * s.size
        for x in range(2):
            for y in range(2):
                for a in range(2):
                    b = a ^ (x * y) ^ (alpha * x) ^ (beta * y) ^ gamma
                    table[s.index(x, y, a, b)] = half
        variants.append(Behavior(s, tuple(table)))
    canons = {canonical_form(v).table for v in variants}
    assert len(canons) == 1
    assert canonical_form(pr_box()).table in canons


def test_local_boxes_one_class():
    boxes = local_deterministic_boxes(Scenario(2, 2, 2, 2))
    classes = classify(boxes)
    assert len(classes) == 1
    assert classes[0].size == 16


def test_classify_singleton():
    classes = classify([pr_box()])
    assert len(classes) == 1
    assert classes[0].size == 1


def test_classify_rejects_mixed_scenarios():
    with pytest.raises(ValueError):
        classify([pr_box(), uniform_box(Scenario(2, 2, 2, 3))])


def test_classify_partitions_orbit_samples(fixture_boxes):
    b = fixture_boxes["box2"]
    rng = random.Random(7)
    sample = [apply_relabeling(b, random_relabeling(b.scenario, rng)) for _ in range(6)]
    other = fixture_boxes["box1"]
    classes = classify(sample + [other])
    assert len(classes) == 2
    sizes = sorted(c.size for c in classes)
    assert sizes == [1, 6]
