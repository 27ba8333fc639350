"""Fundamental medial bikei of virtual knots and links."""
from .algebra import (
    AxiomViolation,
    BikeiTable,
    Isomorphism,
    alexander_bikei,
    cartesian_product,
    check_bikei_axioms,
    check_medial,
    core_kei,
    invariant_profile,
    is_isomorphic,
    takasaki_kei,
    unknot_bikei,
    vertical_mirror,
)
from .diagram import DiagramCode, diagram_to_presentation, parse_gauss_code
from .engine import CompletionOutcome, EngineConfig, Status, ZeroStrategy, complete, saturate
from .presentation import Presentation, PresentationMatrix, parse_presentation, to_short_form

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "BikeiTable",
    "Isomorphism",
    "alexander_bikei",
    "cartesian_product",
    "check_bikei_axioms",
    "check_medial",
    "core_kei",
    "invariant_profile",
    "is_isomorphic",
    "takasaki_kei",
    "unknot_bikei",
    "vertical_mirror",
    "DiagramCode",
    "diagram_to_presentation",
    "parse_gauss_code",
    "CompletionOutcome",
    "EngineConfig",
    "Status",
    "ZeroStrategy",
    "complete",
    "saturate",
    "Presentation",
    "PresentationMatrix",
    "parse_presentation",
    "to_short_form",
]
