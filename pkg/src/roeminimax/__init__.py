"""Minimax lower bounds for ratio costs on finite design x state instances."""
from ._accel import BACKEND
from .generators import (
    SkiRentalParams,
    SplitMix64,
    gen_constant_ratio,
    gen_random,
    gen_ski_rental,
    random_corpus,
    random_distribution,
)
from .model import (
    Distribution,
    GameInstance,
    ParseError,
    RatioValue,
    SolveResult,
    SolverFailure,
    ToleranceConfig,
    ValidationError,
    dump_instance,
    load_distribution,
    load_instance,
    make_distribution,
    point_mass,
    read_instance,
    uniform,
)
from .ratio import (
    act_second_min,
    dominance_witness,
    eor_lower_bound,
    eor_value,
    fraction_compare,
    fraction_monotonicity,
    pure_minimax,
    ratio_cost,
    roe_lower_bound,
    roe_value,
    worst_state_pure,
)
from .solver import (
    adversary_sup_roe_fixed_design,
    best_adversary_eor,
    best_adversary_roe,
    parametric_gap,
    solve_matrix_game,
    zero_sum_value,
)
from .verifier import (
    ChainReport,
    check_dominance,
    check_eor_chain,
    check_roe_chain,
    check_weak_equalities,
    verify_instance,
)

__version__ = "0.1.0"
