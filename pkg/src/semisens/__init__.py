"""Parameter sensitivities of semigroups generated by polynomial differential operators."""

from .errors import (
    ConfigError,
    DegreeConditionError,
    DimensionError,
    ExactScalarError,
    NumericFailure,
    SemisensError,
    StationarityError,
    TailBoundError,
    TruncationDegreeError,
)
from .functionals import (
    MomentFunctional,
    adjoint_apply,
    beta_moments,
    derivative_at_zero,
    dirac,
    gaussian_moments,
    pair,
    wf_stationary_derivative,
)
from .models import (
    ou_family,
    ou_moment_sensitivity_closed_form,
    wf_b_sequence,
    wf_basis,
    wf_family,
    wf_quasi_eigen_power,
    wf_xi_sensitivity,
)
from .operators import (
    GeneratorTerm,
    OperatorMatrix,
    ParametricGeneratorFamily,
    apply,
    derivative_family_at_zero,
    load_family,
    matrix,
)
from .oracle import OracleConfig, central_difference_sensitivity, evolved_pairing, stationarity_residual
from .polynomial import Polynomial, differentiate, evaluate, multiply
from .semigroup import apply_v0, integral_propagator, propagator
from .sensitivity import (
    SensitivityReport,
    first_order_prediction,
    nu_functional,
    product_condition_check,
    semigroup_sensitivity,
    sensitivity_report,
    stationary_derivative_check,
)

__version__ = "0.1.0"
