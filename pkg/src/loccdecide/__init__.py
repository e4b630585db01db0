"""Deciders and certified counterexamples for local convertibility of
bipartite pure-state distributions."""

from .errors import (
    CertificationError,
    ConditioningError,
    DimensionError,
    DomainError,
    ValidationError,
)
from .states import (
    ConditionalChannel,
    Ensemble,
    PureState,
    SchmidtVector,
    from_schmidt,
    sample_random_state,
    schmidt_decompose,
    x_param,
)
from .monotones import (
    MonotoneProfile,
    base_e,
    block_mixture_monotone,
    check_lemma1,
    check_lemma2,
    e_k,
    e_mu_from_base,
    ensemble_ek,
    ensemble_monotone,
    f_mu,
    f_mu_profile,
    piecewise_linear_profile,
    profile_from_spec,
    schmidt_profile,
    sqrt_profile,
    validate_profile,
)
from .locc import (
    TwoQubitDistInstance,
    critical_mu_set,
    dist_convert_closed_form,
    dist_convert_mu,
    nielsen_convertible,
    pure_to_ensemble_convertible,
    rational_mu_grid,
)
from .lp import FeasibilityProblem, build_problem, lp_feasible
from .counterexamples import (
    MonotoneEvaluator,
    Prop1Instance,
    Theorem1Instance,
    default_ek_evaluators,
    default_mu_grid,
    find_mu_witness,
    gen_prop1_instance,
    gen_theorem1_instance,
    verify_prop1,
    verify_theorem1,
)
from .reports import DecisionReport
from .audit import recheck_report

__version__ = "0.1.0"
