"""Reconstruction and stability certification for analytic functions
sampled inside the unit disc.

The package brackets the worst-case magnitude of a unit-norm analytic
function that is small on a candidate set (certified lower bounds and
constructive upper estimates), reconstructs function values from samples
with an explicit error certificate, builds per-sample vanishing
thresholds from divergent boundary mass, and screens candidate sets
geometrically.
"""

from .diagnostics import (
    ArcSet,
    e_r_measure,
    non_blaschke_sum,
    rho_of_theta,
    rho_of_theta_batch,
    stolz_membership,
)
from .disc import (
    DISTINCT_TOL,
    EMPTY_CONFIGURATION,
    UNIT_WEIGHT,
    Configuration,
    QWeight,
    blaschke_abs_batch,
    blaschke_eval,
    blaschke_eval_excluding,
    blaschke_excluded_at_nodes,
    blaschke_log_abs,
    blaschke_upper_bound,
    bq_eval,
    gleason_distance,
    q_build_boundary_poly,
)
from .errors import (
    BudgetExceededError,
    DegenerateConfigurationError,
    DomainError,
    InsufficientMassError,
    ParseError,
    RangeError,
)
from .extremal import (
    Envelope,
    ExtremalRecord,
    PointSet,
    envelope_build,
    extremal_exhaustive,
    extremal_greedy,
    m_value,
    maximizer_sup_margin,
    mu_value,
    phi,
    rate_fit,
    v_value,
)
from .models import (
    FiniteBlaschke,
    HardyModel,
    Monomial,
    Polynomial,
    Product,
    ReproducingKernelPole,
    SingularInner,
    model_eval,
    model_from_dict,
    model_hp_norm,
    model_to_dict,
)
from .recovery import (
    RecoveryResult,
    coefficient_matrix,
    recover,
    recover_batch,
    recover_with_bound,
    recovery_coefficients,
    recovery_error_bound,
    recovery_error_bound_batch,
)
from .stability import (
    AlphaCertificate,
    LowerWitness,
    RateBundle,
    StabilityReport,
    UpperEstimate,
    UpperRow,
    alpha_for_radius,
    blaschke_disc_max,
    d_upper,
    d_upper_best,
    d_upper_scan,
    d_upper_sweep,
    finite_blaschke_for_eps,
    g_lower,
    stability_report,
    trivial_cap,
    verify_lower_witness,
)
from .uniqueness import (
    BlockAudit,
    BlockPartition,
    EtaWeights,
    UniquenessAudit,
    block_eta,
    block_partition,
    eta_weights,
    uniqueness_audit,
)

__version__ = "0.1.0"
