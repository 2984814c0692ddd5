"""Scenario/behavior basics: validation, dimension formula, serialization."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from ensbox import (
    Behavior,
    Scenario,
    behavior_from_json,
    behavior_from_text,
    behavior_to_json,
    behavior_to_text,
    deterministic_behavior,
    local_deterministic_boxes,
    ns_dimension,
    transpose_parties,
    uniform_box,
    validate,
)
from ensbox.linalg import affine_rank

from strategies import scenario_and_behavior, small_scenarios


def brute_force_ns_dimension(s: Scenario) -> int:
    """Oracle: affine rank of the span of all deterministic behaviors."""
    points = [list(b.table) for b in local_deterministic_boxes(s)]
    return affine_rank(points)


@pytest.mark.parametrize(
    "scenario,expected",
    [
        (Scenario(2, 2, 2, 2), 8),
        (Scenario(3, 3, 3, 2), 27),
    ],
)
def test_ns_dimension_against_affine_rank_oracle(scenario, expected):
    assert ns_dimension(scenario) == expected
    assert brute_force_ns_dimension(scenario) == expected


@given(small_scenarios)
@settings(max_examples=15, deadline=None)
def test_ns_dimension_matches_oracle_on_small_scenarios(s):
    assert ns_dimension(s) == brute_force_ns_dimension(s)


def test_ns_dimension_symmetric_under_transposition():
    s = Scenario(2, 3, 3, 2)
    assert ns_dimension(s) == ns_dimension(s.transposed())


def test_scenario_rejects_degenerate_cardinalities():
    with pytest.raises(ValueError):
        Scenario(1, 2, 2, 2)
    with pytest.raises(ValueError):
        Scenario(2, 2, 2, 0)


def test_uniform_box_is_valid_everywhere():
    for s in [Scenario(2, 2, 2, 2), Scenario(3, 3, 3, 2), Scenario(2, 3, 3, 3)]:
        u = uniform_box(s)
        assert validate(u).ok
        assert all(v == Fraction(1, s.A * s.B) for v in u.table)


def test_validate_flags_broken_tables(fixture_boxes):
    b = fixture_boxes["box1"]
    assert validate(b).ok
    table = list(b.table)
    hole = next(i for i, v in enumerate(table) if v != 0)
    table[hole] = Fraction(0)
    report = validate(Behavior(b.scenario, tuple(table)))
    assert not report.ok
    kinds = " ".join(report.violations)
    assert "normalization" in kinds
    assert "no-signaling" in kinds


def test_validate_flags_negative_entries():
    s = Scenario(2, 2, 2, 2)
    table = list(uniform_box(s).table)
    table[0] -= Fraction(1, 2)
    table[1] += Fraction(1, 2)
    report = validate(Behavior(s, tuple(table)))
    assert any("positivity" in v for v in report.violations)


def test_behavior_shape_mismatch_raises():
    with pytest.raises(ValueError):
        Behavior(Scenario(2, 2, 2, 2), (Fraction(1),) * 15)


def test_transpose_is_involution(fixture_boxes):
    for b in fixture_boxes.values():
        assert transpose_parties(transpose_parties(b)) == b


def test_transpose_of_uniform_is_uniform():
    s = Scenario(2, 3, 3, 3)
    assert transpose_parties(uniform_box(s)) == uniform_box(s.transposed())


def test_transpose_preserves_validity(fixture_boxes):
    t = transpose_parties(fixture_boxes["box3"])
    assert t.scenario == Scenario(3, 2, 3, 3)
    assert validate(t).ok


def test_local_deterministic_counts():
    assert len(local_deterministic_boxes(Scenario(2, 2, 2, 2))) == 16
    assert len(local_deterministic_boxes(Scenario(3, 3, 3, 2))) == 27 * 8


def test_deterministic_box_structure():
    s = Scenario(2, 3, 3, 2)
    b = deterministic_behavior(s, [2, 0], [1, 1, 0])
    assert validate(b).ok
    assert b.is_deterministic()
    assert b.prob(0, 0, 2, 1) == 1


@given(scenario_and_behavior())
@settings(max_examples=30, deadline=None)
def test_text_round_trip(sb):
    _, b = sb
    assert behavior_from_text(behavior_to_text(b)) == b


@given(scenario_and_behavior())
@settings(max_examples=30, deadline=None)
def test_json_round_trip(sb):
    _, b = sb
    assert behavior_from_json(behavior_to_json(b)) == b


def test_text_round_trip_fixtures(fixture_boxes):
    for b in fixture_boxes.values():
        assert behavior_from_text(behavior_to_text(b)) == b


def test_text_parse_errors():
    with pytest.raises(ValueError):
        behavior_from_text("")
    with pytest.raises(ValueError):
        behavior_from_text("2 2 2\n")
    with pytest.raises(ValueError):
        behavior_from_text("2 2 2 2\n1/2 0 0 1/2\n")  # missing lines
    good = behavior_to_text(uniform_box(Scenario(2, 2, 2, 2)))
    with pytest.raises(ValueError):
        behavior_from_text(good.replace("1/4", "1/x", 1))


def test_fixture_scenarios(fixture_boxes):
    assert fixture_boxes["box1"].scenario == Scenario(3, 3, 3, 2)
    assert fixture_boxes["box2"].scenario == Scenario(3, 3, 3, 2)
    for k in ("box3", "box4", "box5"):
        assert fixture_boxes[k].scenario == Scenario(2, 3, 3, 3)
    assert fixture_boxes["p_ms"].scenario == Scenario(3, 3, 4, 4)


def test_fixtures_all_validate(fixture_boxes):
    for name, b in fixture_boxes.items():
        assert validate(b).ok, name


def test_fixture_zero_counts(fixture_boxes):
    # the three (2,3,3,3) fixtures carry 34, 35, 36 zeros respectively
    assert fixture_boxes["box3"].zero_count() == 34
    assert fixture_boxes["box4"].zero_count() == 35
    assert fixture_boxes["box5"].zero_count() == 36
