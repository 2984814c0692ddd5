"""Exact-arithmetic analysis of extremal non-signaling boxes."""

from .core import (
    Behavior,
    BellFunctional,
    Scenario,
    ValidationReport,
    behavior_from_json,
    behavior_from_rows,
    behavior_from_text,
    behavior_to_json,
    behavior_to_text,
    deterministic_behavior,
    ns_dimension,
    transpose_parties,
    uniform_box,
    validate,
)
from .relabel import (
    BehaviorClass,
    Relabeling,
    apply_relabeling,
    canonical_form,
    classify,
    compose,
    group_generators,
    identity_relabeling,
    inverse,
    random_relabeling,
)
from .polytope import (
    Decomposition,
    ExtremalityCertificate,
    MembershipResult,
    critical_visibility,
    decompose_into_vertices,
    extremality_certificate,
    is_extremal,
    maximize_functional,
    membership,
    perturbation_steps,
)
from .vertexenum import EnumerationGuardError, GuardLimits, enumerate_vertices
from .boxes import (
    Eq1Spec,
    NsddSpec,
    box1,
    box2,
    box3,
    box4,
    box5,
    enumerate_eq1,
    enumerate_nsdd,
    eq1_box,
    local_deterministic_boxes,
    magic_square_behavior,
    magic_square_functional,
    magic_square_p1_p2,
    nsdd_box,
    pr_box,
    quantum_realization,
)
from .lo import (
    CliqueSearchResult,
    CliqueWitness,
    ConditionProfile,
    ExclusivityGraph,
    JointEvent,
    build_exclusivity_graph,
    clique_condition_profile,
    events_orthogonal,
    find_violating_clique,
    format_event,
    parse_event,
    verify_clique,
)
from .comm import (
    CommStrategy,
    DitMembership,
    MinDitResult,
    build_F,
    comm_visibility,
    diagonal_box,
    enumerate_strategies,
    lhvd_value,
    membership_dit,
    min_dit,
    strategy_behavior,
    strategy_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
