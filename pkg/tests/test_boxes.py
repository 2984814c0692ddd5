"""Constructors: block family, permutation family, magic square, fixtures."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from ensbox import (
    Eq1Spec,
    NsddSpec,
    Scenario,
    canonical_form,
    classify,
    enumerate_eq1,
    enumerate_nsdd,
    enumerate_vertices,
    eq1_box,
    is_extremal,
    local_deterministic_boxes,
    magic_square_behavior,
    magic_square_functional,
    magic_square_p1_p2,
    maximize_functional,
    ns_dimension,
    nsdd_box,
    pr_box,
    quantum_realization,
    uniform_box,
    validate,
)
from ensbox.boxes import _perm_order, _transitive


# --- block family -------------------------------------------------------------


def test_eq1_pr_box_from_minimal_spec():
    s = Scenario(2, 2, 2, 2)
    spec = Eq1Spec(s, 2, 2, ((1,),))
    assert eq1_box(spec) == pr_box()


def test_eq1_validates_for_any_offsets():
    for dims in [(2, 3, 2, 2), (3, 3, 3, 3), (3, 2, 4, 4)]:
        s = Scenario(*dims)
        for g in range(2, s.X + 1):
            for h in range(2, s.Y + 1):
                offsets = tuple(tuple((i + j) % s.A for j in range(h - 1)) for i in range(g - 1))
                assert validate(eq1_box(Eq1Spec(s, g, h, offsets))).ok


def test_eq1_a2_coprime_extremal_exhaustive():
    """Full-cycle shifts with A = 2: every family member is a vertex."""
    for X in (2, 3):
        for Y in (2, 3):
            for spec, box in enumerate_eq1(Scenario(X, Y, 2, 2), coprime_only=True):
                assert is_extremal(box), spec


def test_eq1_all_zero_offsets_not_extremal():
    """The degenerate all-identity interior is a mixture of two locals."""
    s = Scenario(3, 3, 2, 2)
    spec = Eq1Spec(s, 2, 2, ((0,),))
    assert validate(eq1_box(spec)).ok
    assert not is_extremal(eq1_box(spec))


def test_eq1_order2_circulant_on_a4_not_guaranteed_extremal():
    """gcd(2,4) = 2: the offset-2 block may break extremality; record it."""
    s = Scenario(2, 2, 4, 4)
    box = eq1_box(Eq1Spec(s, 2, 2, ((2,),)))
    assert validate(box).ok
    assert not is_extremal(box)


def test_eq1_coprime_offsets_extremal_on_a3_a4():
    for A in (3, 4):
        s = Scenario(2, 2, A, A)
        for (spec, box) in enumerate_eq1(s, coprime_only=True):
            assert is_extremal(box), spec


def test_enumerate_eq1_2222_yields_exactly_pr_class():
    s = Scenario(2, 2, 2, 2)
    emitted = [box for _, box in enumerate_eq1(s)]
    assert all(validate(b).ok for b in emitted)
    extremal_nonlocal = [b for b in emitted if is_extremal(b) and not b.is_deterministic()]
    assert extremal_nonlocal
    classes = classify(extremal_nonlocal)
    assert len(classes) == 1
    assert classes[0].representative == canonical_form(pr_box())


def test_enumerate_eq1_coprime_filter_on_a4():
    s = Scenario(2, 2, 4, 4)
    offsets = {spec.offsets[0][0] for spec, _ in enumerate_eq1(s, coprime_only=True)}
    assert offsets == {1, 3}


def test_eq1_spec_validation():
    s = Scenario(2, 2, 2, 2)
    with pytest.raises(ValueError):
        Eq1Spec(s, 1, 2, ())
    with pytest.raises(ValueError):
        Eq1Spec(s, 2, 2, ((2,),))  # offset out of range
    with pytest.raises(ValueError):
        Eq1Spec(Scenario(2, 2, 2, 3), 2, 2, ((1,),))  # A != B


# --- permutation family ---------------------------------------------------------


def cyclic(d: int, shift: int = 1) -> tuple[int, ...]:
    return tuple((i + shift) % d for i in range(d))


def test_nsdd_pr_class_for_d2():
    s = Scenario(2, 2, 2, 2)
    spec = NsddSpec(s, 2, (((1, 0),),))
    box = nsdd_box(spec)
    assert canonical_form(box) == canonical_form(pr_box())


def test_nsdd_entries_and_zero_count():
    for dims, k_perms in [
        ((2, 2, 3, 3), (((1, 2, 0),),)),
        ((2, 3, 3, 3), ((cyclic(3), (0, 1, 2)),)),
        ((3, 3, 2, 2), (((1, 0), (1, 0)), ((1, 0), (0, 1)))),
    ]:
        s = Scenario(*dims)
        spec = NsddSpec(s, _perm_order(k_perms[0][0]), k_perms)
        box = nsdd_box(spec)
        assert validate(box).ok
        d = s.A
        assert all(v == 0 or v == Fraction(1, d) for v in box.table)
        assert box.zero_count() == s.X * s.Y * d * (d - 1)
        if s.X == 2 and s.Y == 2:
            # in the two-input square the zero count meets the polytope dimension
            assert box.zero_count() == ns_dimension(s)


def test_nsdd_requires_transitive_interior():
    s = Scenario(2, 2, 3, 3)
    with pytest.raises(ValueError):
        NsddSpec(s, 2, (((1, 0, 2),),))  # transposition fixes outcome 2


def test_nsdd_order_must_match():
    s = Scenario(2, 2, 3, 3)
    with pytest.raises(ValueError):
        NsddSpec(s, 2, (((1, 2, 0),),))  # 3-cycle has order 3, not 2


def test_nsdd_all_valid_specs_extremal_d_le_3():
    for dims in [(2, 2, 2, 2), (2, 3, 2, 2), (3, 2, 2, 2), (2, 2, 3, 3), (2, 3, 3, 3), (3, 2, 3, 3)]:
        s = Scenario(*dims)
        count = 0
        for spec, box in enumerate_nsdd(s):
            assert is_extremal(box), spec
            count += 1
        assert count > 0


def test_nsdd_sampled_specs_extremal_3333():
    """Four interior blocks: check a deterministic slice of the family."""
    s = Scenario(3, 3, 3, 3)
    checked = 0
    for i, (spec, box) in enumerate(enumerate_nsdd(s)):
        if i % 17 == 0:
            assert is_extremal(box), spec
            checked += 1
    assert checked >= 40


def test_nsdd_matches_box5_class(fixture_boxes):
    s = Scenario(2, 3, 3, 3)
    spec = NsddSpec(s, 3, ((cyclic(3), (0, 1, 2)),))
    assert canonical_form(nsdd_box(spec)) == canonical_form(fixture_boxes["box5"])


# --- magic square ---------------------------------------------------------------


def test_quantum_realization_equals_magic_square_table():
    assert quantum_realization() == magic_square_behavior()


def test_quantum_vectors_orthogonal_per_input():
    from ensbox.boxes import _ALICE_VECTORS, _BOB_VECTORS

    for vecs in list(_ALICE_VECTORS) + list(_BOB_VECTORS):
        for u, v in itertools.combinations(vecs, 2):
            assert sum(a * b for a, b in zip(u, v)) == 0


def test_magic_square_entry_and_outcome_sums():
    pms = magic_square_behavior()
    assert pms.prob(0, 0, 0, 0) == Fraction(1, 8)
    for x in range(3):
        for y in range(3):
            total = sum(pms.prob(x, y, a, b) for a in range(4) for b in range(4))
            assert total == 1


def test_magic_square_functional_value_nine(fixture_boxes):
    bms = magic_square_functional()
    assert bms.value(fixture_boxes["p_ms"]) == 9
    assert bms.value(fixture_boxes["p1"]) == 9
    assert bms.value(fixture_boxes["p2"]) == 9


def test_magic_square_game_value_normalization(fixture_boxes):
    bms = magic_square_functional()
    game_value = bms.value(fixture_boxes["p_ms"]) / 9
    assert game_value == 1


def test_magic_square_local_bound_below_nine():
    bms = magic_square_functional()
    locals_ = local_deterministic_boxes(Scenario(3, 3, 4, 4))
    best, _ = maximize_functional(bms, locals_)
    assert best < 9


def test_p1_p2_extremal_and_midpoint(fixture_boxes):
    p1, p2 = fixture_boxes["p1"], fixture_boxes["p2"]
    assert validate(p1).ok and validate(p2).ok
    assert is_extremal(p1) and is_extremal(p2)
    mid = tuple((a + b) / 2 for a, b in zip(p1.table, p2.table))
    assert mid == fixture_boxes["p_ms"].table
