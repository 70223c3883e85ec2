"""kinklab: a numerical laboratory for kinks in the parametrically
driven sine-Gordon equation and its averaged variants."""

from .errors import (BlowUpError, ConfigurationError, ContractViolation,
                     KinklabError, OracleFailure, TrackingError,
                     UnsupportedVariant)
from .fields import FieldState, Grid1D, laplacian, sup_norm_diff
from .forcing import (ForcingStack, PeriodicForcing, antiderivative_zero_mean,
                      build_stack, mean_square)
from .integrate import IntegrationPlan, integrate, step
from .kinks import (KinkParams, audit_dsg_coefficients, dsg_kink, init_kink,
                    pi_kink, residual, static_kink_coefficients, track_kink)
from .models import ModelSpec, energy, potential_density, rhs
from .averaging import (ComparisonScenario, TransformCoeffs,
                        compare_full_vs_averaged, fit_scaling_order,
                        near_identity_apply)

__version__ = "0.1.0"
