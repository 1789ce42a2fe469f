"""Optimal-design selection of preference pairs with simulated labelers.

Pipeline: build an instance of per-context action sets, compute an
approximate G-optimal design over the difference arms, round it to duel
counts, collect Bernoulli preference labels, fit the projected logistic MLE
and predict one arm per context.  The evaluation layer measures simple
regret against the analysis' upper bounds and two lower-bound constructions.
"""

from .design import (
    Design,
    DesignMatrix,
    FrankWolfeResult,
    KWCertificate,
    design_matrix_of,
    frank_wolfe_design,
    g_value,
    kw_certificate,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    InstanceParseError,
    InvalidScale,
    NormViolation,
    SingularMatrixError,
    SpanDeficientError,
    SpanDeficientWarning,
)
from .estimator import (
    EstimatorResult,
    confidence_radius,
    fit_estimator,
    h_map,
    likelihood_gradient,
    log_likelihood,
    mle,
    project_mle,
    sampling_design_matrix,
)
from .evaluation import (
    ExperimentConfig,
    RegretReport,
    bretagnolle_huber_rhs,
    chi2_bernoulli,
    corollary_bound,
    corollary_expected_bound,
    corollary_hp_bound,
    hypercube_regret_floor,
    kl_bernoulli,
    run_experiment,
    simple_regret,
    theorem1_bound,
    verify_hypercube_lower_bound,
    verify_online_lower_bound,
)
from .instances import (
    ActionSet,
    DifferenceArm,
    HypercubeInstance,
    Instance,
    OnlineConstruction,
    build_instance,
    make_hypercube_instance,
    make_online_lower_bound_instance,
    make_random_instance,
    make_rare_direction_instance,
    parse_instance,
    read_instance,
    write_instance,
)
from .pipeline import (
    Allocation,
    OdpoConfig,
    OdpoRun,
    Prediction,
    allocate,
    baseline_greedy_norm,
    baseline_uniform,
    predict,
    run_algorithm,
    run_odpo,
)
from .preference import (
    PreferenceSample,
    collect_feedback,
    sample_preference,
    sigmoid,
    sigmoid_prime,
)
from .rng import stream

__version__ = "0.1.0"
