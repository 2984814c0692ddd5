"""Shared fixtures."""

from __future__ import annotations

import pytest

from ensbox import (
    Behavior,
    box1,
    box2,
    box3,
    box4,
    box5,
    magic_square_behavior,
    magic_square_p1_p2,
    pr_box,
)


@pytest.fixture(scope="session")
def fixture_boxes() -> dict[str, Behavior]:
    p1, p2 = magic_square_p1_p2()
    return {
        "pr": pr_box(),
        "box1": box1(),
        "box2": box2(),
        "box3": box3(),
        "box4": box4(),
        "box5": box5(),
        "p_ms": magic_square_behavior(),
        "p1": p1,
        "p2": p2,
    }
