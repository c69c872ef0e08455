"""Free profunctors between finite groupoids and the N-valued spans between them."""

from .chain import Diagram, between, compose_chain, flat_label, whisker, wires_of
from .generators import (
    Measurement,
    biunitary_span,
    half_turn,
    measurement_span,
    mirror,
    morphism_span,
    read_span,
    rotate,
    rotate_boundary,
    tick_span,
    wires_for,
    write_span,
)
from .profunctor import (
    EngineTypeError,
    EquivarianceError,
    FreenessError,
    Profunctor,
    Protransformation,
    adjoint,
    associator,
    boundary_left,
    boundary_right,
    cap,
    compose_all,
    compose_horizontal,
    compose_horizontal_profunctors,
    compose_horizontal_sum_form,
    compose_vertical,
    cup,
    dagger,
    equal_up_to_scalar,
    identity_profunctor,
    identity_span,
    left_unitor,
    measurement_profunctor,
    right_unitor,
)

__all__ = [
    "Diagram",
    "EngineTypeError",
    "EquivarianceError",
    "FreenessError",
    "Measurement",
    "Profunctor",
    "Protransformation",
    "adjoint",
    "associator",
    "between",
    "biunitary_span",
    "boundary_left",
    "boundary_right",
    "cap",
    "compose_all",
    "compose_chain",
    "compose_horizontal",
    "compose_horizontal_profunctors",
    "compose_horizontal_sum_form",
    "compose_vertical",
    "cup",
    "dagger",
    "equal_up_to_scalar",
    "flat_label",
    "half_turn",
    "identity_profunctor",
    "identity_span",
    "left_unitor",
    "measurement_profunctor",
    "measurement_span",
    "mirror",
    "morphism_span",
    "read_span",
    "right_unitor",
    "rotate",
    "rotate_boundary",
    "tick_span",
    "whisker",
    "wires_for",
    "wires_of",
    "write_span",
]
