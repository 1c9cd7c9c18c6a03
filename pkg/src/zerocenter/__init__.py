"""Infinitesimal centers of zero-cycle deformations f(z) + eps g(z) = t."""
__version__ = "0.1.0"

from .algebra import (
    BadEpsilonSet,
    Deformation,
    GaussRational,
    Polynomial,
    affine_in,
    bad_epsilons,
    common_right_factors,
    compose,
    derivative,
    discriminant_t,
    eval_poly,
    express_in,
    parse_coefficient,
    poly_from_strings,
    right_factors,
)
from .center import (
    CenterDecision,
    DisplacementSample,
    MelnikovSeries,
    TangentialResult,
    cycle_on_f,
    decide_infinitesimal,
    decide_tangential,
    displacement,
    melnikov1,
    melnikov2_formula,
    melnikov_fit,
)
from .cycles import ProjectedCycle, ZeroCycle, act, is_trivial, make_cycle, project
from .monodromy import (
    GroupClass,
    LoopBasis,
    PermGroup,
    Permutation,
    block_systems,
    classify,
    closure,
    deformation_group,
    is_transitive,
    is_two_transitive,
    loop_basis,
    monodromy_at,
)
from .numerics import LabeledFiber, PathSpec, TrackerConfig, critical_values, fiber, track_fiber
