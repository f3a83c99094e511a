"""Analytic PER engine for efficient incremental relaying."""

from eirelay.analytic.expansion import (
    K_MAX,
    CapabilityError,
    ExpansionCoefficients,
    NumericalCancellationError,
    expansion_coefficients,
    expansion_sum,
    per_conditional_approx,
    per_conditional_approx_closed,
    per_conditional_exact,
)
from eirelay.analytic.mgf import (
    log_mgf_ordered,
    mgf_af_combined,
    mgf_exponential,
    mgf_ordered,
)
from eirelay.analytic.model import FrameConfig, LinkBudget, RelayMode, db_to_linear, linear_to_db
from eirelay.analytic.per import (
    diversity_slope,
    efficiency,
    per_combined_af,
    per_combined_df,
    per_direct_ordered,
    per_direct_tail,
    per_rayleigh,
    per_relay_decoded,
    per_sr,
    per_total,
)
from eirelay.analytic.quadrature import QuadratureError, per_unconditional_quadrature

__all__ = [
    "K_MAX",
    "CapabilityError",
    "ExpansionCoefficients",
    "FrameConfig",
    "LinkBudget",
    "NumericalCancellationError",
    "QuadratureError",
    "RelayMode",
    "db_to_linear",
    "diversity_slope",
    "efficiency",
    "expansion_coefficients",
    "expansion_sum",
    "linear_to_db",
    "log_mgf_ordered",
    "mgf_af_combined",
    "mgf_exponential",
    "mgf_ordered",
    "per_combined_af",
    "per_combined_df",
    "per_conditional_approx",
    "per_conditional_approx_closed",
    "per_conditional_exact",
    "per_direct_ordered",
    "per_direct_tail",
    "per_rayleigh",
    "per_relay_decoded",
    "per_sr",
    "per_total",
    "per_unconditional_quadrature",
]
