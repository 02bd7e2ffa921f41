"""Mermin-inequality workbench for generalized three-qubit GHZ states.

Builds the state cos(theta)|000> + i sin(theta)|111>, reconstructs the
two-setting measurement table consistent with its conditional-certainty
predictions, evaluates the three-party Mermin inequality against its
exact local-hidden-variable bound, locates the violation threshold, and
decides at which angle a nonlocality proof without inequalities exists.
"""

from .analysis import (
    AuditReport,
    AuditVerdict,
    ConditionalMarginal,
    OptimizationResult,
    ScanRow,
    audit_zheng_argument,
    optimize_settings,
    scan_theta,
    violation_threshold,
)
from .bell import (
    BellExpression,
    BellTerm,
    DeterministicStrategy,
    LhvBound,
    ParadoxCertificate,
    all_strategies,
    correlator,
    evaluate_quantum,
    lhv_bound,
    mermin_closed_form,
    mermin_expression,
    nlwi_certificate,
    parity_contradiction_check,
)
from .correlations import (
    CertaintyRow,
    ConditionalQuery,
    DegenerateConditioningError,
    MeasurementEvent,
    OutcomeSpec,
    ProductTarget,
    certainty_sweep,
    conditional_probability,
    joint_probability,
)
from .hilbert import (
    AngleTheta,
    LinearOperator,
    NumericalError,
    Projection,
    StateVector,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    expectation,
    ghz_state,
    lift,
    project,
    tensor,
)
from .observables import (
    BlochVector,
    ConstraintCheck,
    Observable,
    SettingsTable,
    ValidationReport,
    bloch_observable,
    validate_zheng_settings,
    zheng_settings,
)

__version__ = "0.1.0"

__all__ = [
    "AngleTheta",
    "AuditReport",
    "AuditVerdict",
    "BellExpression",
    "BellTerm",
    "BlochVector",
    "CertaintyRow",
    "ConditionalMarginal",
    "ConditionalQuery",
    "ConstraintCheck",
    "DegenerateConditioningError",
    "DeterministicStrategy",
    "LhvBound",
    "LinearOperator",
    "MeasurementEvent",
    "NumericalError",
    "Observable",
    "OptimizationResult",
    "OutcomeSpec",
    "ParadoxCertificate",
    "ProductTarget",
    "Projection",
    "ScanRow",
    "SettingsTable",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "StateVector",
    "ValidationReport",
    "all_strategies",
    "audit_zheng_argument",
    "bloch_observable",
    "certainty_sweep",
    "conditional_probability",
    "correlator",
    "evaluate_quantum",
    "expectation",
    "ghz_state",
    "joint_probability",
    "lhv_bound",
    "lift",
    "mermin_closed_form",
    "mermin_expression",
    "nlwi_certificate",
    "optimize_settings",
    "parity_contradiction_check",
    "project",
    "scan_theta",
    "tensor",
    "validate_zheng_settings",
    "violation_threshold",
    "zheng_settings",
]
