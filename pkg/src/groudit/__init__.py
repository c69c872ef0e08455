"""Groudits: groupoid-valued registers with exact nondeterministic semantics."""

from .biunitary import (
    Biunitary,
    BiunitaryCheck,
    EnumerationGuardError,
    balancers_to_biunitary,
    biunitary_to_balancers,
    check_biunitary,
    count_balancer_pairs,
    enumerate_balancer_pairs,
    enumerate_biunitaries,
)
from .groupoid import (
    CompositionError,
    Dit,
    Group,
    Groudit,
    Groupoid,
    GroupoidError,
    Morphism,
    compose,
    groudit_from_json,
    load_groudit,
    make_cyclic_groudit,
    make_groubit,
)
from .netsim import MultisetState, Step, SystemRegistry, run_program, states_equal_up_to_scalar

__all__ = [
    "Biunitary", "BiunitaryCheck", "CompositionError", "Dit", "EnumerationGuardError", "Group",
    "Groudit", "Groupoid", "GroupoidError", "Morphism", "MultisetState", "Step", "SystemRegistry",
    "balancers_to_biunitary", "biunitary_to_balancers", "check_biunitary", "compose",
    "count_balancer_pairs", "enumerate_balancer_pairs", "enumerate_biunitaries", "groudit_from_json",
    "load_groudit", "make_cyclic_groudit", "make_groubit", "run_program", "states_equal_up_to_scalar",
]
