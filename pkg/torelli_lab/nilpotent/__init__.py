"""Free group words, Magnus expansion, surface nilpotent quotients and lambda_k."""

from .lie import (
    LieElement,
    NotInGammaK,
    NotLieElement,
    free_lie_rank,
    leading_lie_term,
    lyndon_basis,
    surface_rank,
)
from .magnus import MagnusSeries, free_nilpotent_equal, in_gamma, magnus
from .markings import (
    LambdaMap,
    NkMarking,
    NotNkTrivial,
    PiMarking,
    apply_move_pi,
    arc_to_cycle_matrix,
    boundary_word,
    lambda_between,
    lambda_k,
    lambda_k_markings,
    residual_nk,
    tautological_pi_marking,
)
from .surface import DegreeTooHigh, SurfaceQuotient, surface_reduce
from .words import FreeWord, commutator

__all__ = [
    "DegreeTooHigh",
    "FreeWord",
    "LambdaMap",
    "LieElement",
    "MagnusSeries",
    "NkMarking",
    "NotInGammaK",
    "NotLieElement",
    "NotNkTrivial",
    "PiMarking",
    "SurfaceQuotient",
    "apply_move_pi",
    "arc_to_cycle_matrix",
    "boundary_word",
    "commutator",
    "free_lie_rank",
    "free_nilpotent_equal",
    "in_gamma",
    "lambda_between",
    "lambda_k",
    "lambda_k_markings",
    "leading_lie_term",
    "lyndon_basis",
    "magnus",
    "residual_nk",
    "surface_rank",
    "surface_reduce",
    "tautological_pi_marking",
]
