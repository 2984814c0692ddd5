"""Extremality certificates, decompositions, LP membership and visibility."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ensbox import (
    Behavior,
    BellFunctional,
    Scenario,
    apply_relabeling,
    critical_visibility,
    decompose_into_vertices,
    deterministic_behavior,
    extremality_certificate,
    is_extremal,
    local_deterministic_boxes,
    magic_square_behavior,
    magic_square_functional,
    magic_square_p1_p2,
    maximize_functional,
    membership,
    perturbation_steps,
    pr_box,
    random_relabeling,
    uniform_box,
    validate,
)

from strategies import random_mixture


def mix(b1: Behavior, b2: Behavior, w: Fraction) -> Behavior:
    return Behavior(b1.scenario, tuple(w * u + (1 - w) * v for u, v in zip(b1.table, b2.table)))


# --- extremality ------------------------------------------------------------


def test_pr_box_extremal():
    assert is_extremal(pr_box())


def test_fixture_boxes_extremal(fixture_boxes):
    for name in ("box1", "box2", "box3", "box4", "box5", "p1", "p2"):
        assert is_extremal(fixture_boxes[name]), name


def test_local_deterministic_boxes_extremal():
    for b in local_deterministic_boxes(Scenario(2, 2, 2, 2)):
        assert is_extremal(b)


def test_uniform_box_not_extremal():
    cert = extremality_certificate(uniform_box(Scenario(2, 2, 2, 2)))
    assert not cert.extremal
    assert any(v != 0 for v in cert.perturbation)


def test_magic_square_not_extremal(fixture_boxes):
    cert = extremality_certificate(fixture_boxes["p_ms"])
    assert not cert.extremal


def test_nonextremal_certificate_verifies(fixture_boxes):
    """b +- eps*v must stay valid for the explicit line-search step sizes."""
    for b in (uniform_box(Scenario(2, 2, 2, 2)), fixture_boxes["p_ms"]):
        cert = extremality_certificate(b)
        v = cert.perturbation
        alpha, beta = perturbation_steps(b, v)
        assert alpha > 0 and beta > 0
        hi = Behavior(b.scenario, tuple(p + alpha * d for p, d in zip(b.table, v)))
        lo = Behavior(b.scenario, tuple(p - beta * d for p, d in zip(b.table, v)))
        assert validate(hi).ok and validate(lo).ok
        assert hi.zero_count() > b.zero_count()
        assert lo.zero_count() > b.zero_count()


def test_perturbation_vanishes_on_zeros(fixture_boxes):
    b = fixture_boxes["p_ms"]
    cert = extremality_certificate(b)
    for p, d in zip(b.table, cert.perturbation):
        if p == 0:
            assert d == 0


def test_midpoint_of_two_vertices_not_extremal():
    s = Scenario(2, 2, 2, 2)
    d1 = deterministic_behavior(s, [0, 0], [0, 0])
    d2 = deterministic_behavior(s, [1, 0], [1, 1])
    assert not is_extremal(mix(d1, d2, Fraction(1, 2)))


def test_extremality_on_invalid_behavior_raises():
    s = Scenario(2, 2, 2, 2)
    bad = Behavior(s, tuple([Fraction(1)] + [Fraction(0)] * 15))
    with pytest.raises(ValueError):
        extremality_certificate(bad)


def test_pr_single_output_flips_remain_extremal():
    """Orbit oracle: every single-flip image of the PR box is still a vertex."""
    b = pr_box()
    s = b.scenario
    rng = random.Random(11)
    for x_flip in range(2):
        perms = [tuple(range(2)), tuple(range(2))]
        perms[x_flip] = (1, 0)
        from ensbox.relabel import Relabeling

        r = Relabeling(s, False, (0, 1), (0, 1), tuple(perms), (tuple(range(2)),) * 2)
        assert is_extremal(apply_relabeling(b, r))


# --- decomposition ------------------------------------------------------------


def test_decompose_deterministic_single_term():
    s = Scenario(2, 2, 2, 2)
    d = deterministic_behavior(s, [0, 1], [1, 0])
    deco = decompose_into_vertices(d)
    assert len(deco.terms) == 1
    assert deco.terms[0][0] == 1
    assert deco.terms[0][1] == d


def test_decompose_midpoint_recovers_both_vertices():
    s = Scenario(2, 2, 2, 2)
    d = deterministic_behavior(s, [0, 1], [1, 0])
    p = pr_box()
    deco = decompose_into_vertices(mix(p, d, Fraction(1, 2)))
    assert len(deco.terms) == 2
    tables = {t[1].table for t in deco.terms}
    assert tables == {p.table, d.table}
    assert all(w == Fraction(1, 2) for w, _ in deco.terms)


def test_decompose_magic_square(fixture_boxes):
    pms = fixture_boxes["p_ms"]
    deco = decompose_into_vertices(pms)
    assert deco.recombined() == pms
    assert all(is_extremal(v) for _, v in deco.terms)
    assert len(deco.terms) >= 2


def test_p1_p2_midpoint_is_magic_square(fixture_boxes):
    p1, p2 = fixture_boxes["p1"], fixture_boxes["p2"]
    assert mix(p1, p2, Fraction(1, 2)) == fixture_boxes["p_ms"]


def test_decompose_random_mixtures_of_locals():
    s = Scenario(2, 2, 2, 2)
    locals_ = local_deterministic_boxes(s)
    rng = random.Random(5)
    for _ in range(5):
        b = random_mixture(s, rng, locals_ + [pr_box()], terms=3)
        deco = decompose_into_vertices(b)
        assert deco.recombined() == b


# --- membership / visibility ---------------------------------------------------


def test_membership_inside_for_constructed_mixture():
    s = Scenario(2, 2, 2, 2)
    locals_ = local_deterministic_boxes(s)
    rng = random.Random(3)
    b = random_mixture(s, rng, locals_[:8], terms=3)
    res = membership(b, locals_)
    assert res.inside
    assert sum(res.weights, Fraction(0)) == 1


def test_membership_pr_outside_local_polytope():
    locals_ = local_deterministic_boxes(Scenario(2, 2, 2, 2))
    res = membership(pr_box(), locals_)
    assert not res.inside
    f, bound = res.functional, res.bound
    local_max = max(f.value(v) for v in locals_)
    assert local_max <= bound < f.value(pr_box())


def test_membership_errors():
    with pytest.raises(ValueError):
        membership(pr_box(), [])
    with pytest.raises(ValueError):
        membership(pr_box(), [uniform_box(Scenario(2, 2, 2, 3))])


def test_critical_visibility_pr_vs_locals_is_half():
    locals_ = local_deterministic_boxes(Scenario(2, 2, 2, 2))
    assert critical_visibility(pr_box(), locals_) == Fraction(1, 2)


def test_critical_visibility_inside_is_one():
    s = Scenario(2, 2, 2, 2)
    locals_ = local_deterministic_boxes(s)
    assert critical_visibility(locals_[3], locals_) == 1
    assert critical_visibility(uniform_box(s), locals_) == 1


def test_maximize_functional_magic_square(fixture_boxes):
    bms = magic_square_functional()
    value, arg = maximize_functional(bms, [fixture_boxes["p_ms"]])
    assert value == 9
    assert arg == fixture_boxes["p_ms"]


def test_maximize_functional_single_vertex():
    s = Scenario(2, 2, 2, 2)
    f = BellFunctional(s, tuple(Fraction(i, 7) for i in range(s.size)))
    v = deterministic_behavior(s, [0, 1], [0, 1])
    value, arg = maximize_functional(f, [v])
    assert value == f.value(v)
    assert arg == v
