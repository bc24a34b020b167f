"""Numerical laboratory for weighted group algebras ``l1(G, w)`` on ``Z^d x prod Z_m``."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .algebra import (
    AlgebraElement,
    DualElement,
    attaining_dual,
    compare_radii,
    convolve,
    dual_pair,
    involution,
    norm_l1w,
    power,
    spectral_radius_normlimit,
)
from .errors import (
    AliasingError,
    ConditioningError,
    DomainError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    SamplingError,
    SpecMismatchError,
    SubmultiplicativityError,
    UnsupportedError,
    WeightNormalizationError,
    WGAError,
)
from .group import GroupElement, GroupSpec, ball_size, enumerate_ball, make_group_spec, op_elements
from .parsing import parse_element, parse_group, parse_measure, parse_weight
from .representation import (
    Functional,
    SpectralMeasure,
    gram_positivity_check,
    modulate,
    synthesize_functional,
    translate_character,
)
from .spectrum import (
    Character,
    CharacterSpace,
    character_space,
    finite_gelfand_probe,
    gelfand_eval,
    inverse_gelfand,
    separating_element,
    spectral_radius_oracle,
    validate_character,
    w_pointwise_product,
)
from .weight import (
    Constant,
    Exp,
    Poly,
    SubExp,
    Table,
    Weight,
    bd_partial_sums,
    check_submultiplicative,
    classify_weight,
    evaluate_weight,
    omega,
    weight_diagnostics,
    weight_radius,
    wstar,
)

__all__ = [name for name in dir() if not name.startswith("_")]
