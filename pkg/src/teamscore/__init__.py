"""Team selection by individual test scores.

Exact evaluation of the expected sum of a team's h best contributions,
the potential and conditional-quantile test scores, greedy and exhaustive
selection, and adversarial instances on which no test score works.
"""
from .errors import (
    BudgetExceeded,
    EmptyUniverse,
    IndexOutOfRange,
    InvalidAlpha,
    InvalidH,
    InvalidParams,
    LengthMismatch,
    MassExceedsOne,
    NegativeValue,
    NonPositiveMass,
    TeamScoreError,
    UnknownCandidate,
)
from .rv import (
    Candidate,
    DiscreteRV,
    QuantileSplit,
    WeightedBernoulli,
    conditional_quantile_score,
    expectation,
    make_rv,
    potential_score,
    split_top_quantile,
)
from .selection import (
    SelectionReport,
    brute_force_optimal,
    canonical_bound,
    greedy_hill_climb,
    lambda_bound,
    mu_bound,
    select_by_test,
    select_top_k_by_score,
    wb_greedy,
)
from .team_value import (
    DependentEnsemble,
    TeamInstance,
    expected_max_wb,
    g_h_dependent,
    g_h_exact,
    g_h_monte_carlo,
    omega_h_pointwise,
)

__version__ = "0.1.0"
