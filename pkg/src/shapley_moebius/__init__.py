"""Shapley effects and Shapley-Owen interaction effects via Möbius inversion."""
from .analysis import all_pairs, evaluate, shapley_moebius, shapley_permutation
from .errors import (
    ConfigurationError,
    DimensionError,
    DomainError,
    EvaluationError,
    ShapleyError,
)
from .estimators import ValueTable, build_value_table, substitute_superset
from .marginals import DependenceSpec, InputTransform, MarginalSpec
from .models import MODELS, get_model
from .moebius import (
    MoebiusTable,
    ShapleyReport,
    first_and_total,
    moebius_invert,
    owen_bounds,
    shapley_effects,
    shapley_owen,
)
from .oracles import exact_shapley, gfunction_game, ishigami_game, quadratic_risk
from .permutation import heap_permutations, permutation_shapley
from .pickfreeze import ModelHandle, evaluate_base, mixed_block
from .qmc import UniformDesign, generate_design

__version__ = "0.1.0"
