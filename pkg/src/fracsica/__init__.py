"""Caputo fractional-order SICA HIV/AIDS epidemic model.

Library layout:

- fde_core: Adams-Bashforth-Moulton predictor-corrector for Caputo systems,
  Mittag-Leffler series, empirical convergence order.
- sica_model: the four-compartment vector field and its parameter set.
- equilibria: derived constants, R0, disease-free and endemic equilibria.
- stability: Jacobian, characteristic cubic, discriminant, fractional
  angle-condition classification of the disease-free equilibrium.
- lyapunov: linear and Volterra-type Lyapunov functions plus decay audits.
- cli: simulate / analyze / sweep subcommands over key = value configs.
"""

from .config import ConfigError, RunConfig, load_config
from .equilibria import (
    DerivedConstants,
    EquilibriumSet,
    compute_r0,
    derived_constants,
    disease_free_equilibrium,
    endemic_equilibrium,
    equilibrium_residual,
    equilibrium_set,
)
from .fde_core import (
    ConvergenceEstimate,
    MemoryPolicy,
    SolverConfig,
    SolverError,
    Trajectory,
    VectorField,
    abm_solve,
    estimate_convergence_order,
    mittag_leffler,
)
from .lyapunov import (
    AuditReport,
    LyapunovCoefficients,
    dfe_lyapunov,
    endemic_lyapunov,
    lyapunov_coefficients,
    monotonicity_audit,
)
from .sica_model import (
    ModelParameters,
    State,
    Violation,
    first_negative_step,
    force_of_infection,
    population_cap,
    rhs,
    total_population,
    validate_params,
    vector_field,
)
from .stability import (
    AppliedRule,
    CharPoly,
    StabilityReport,
    Verdict,
    classify_dfe,
    cubic_discriminant,
    cubic_roots,
    dfe_char_poly,
    jacobian_at_dfe,
    matignon_margin,
)

__version__ = "1.0.0"

__all__ = [
    "ModelParameters",
    "State",
    "Violation",
    "validate_params",
    "force_of_infection",
    "rhs",
    "vector_field",
    "total_population",
    "population_cap",
    "first_negative_step",
    "SolverConfig",
    "SolverError",
    "MemoryPolicy",
    "VectorField",
    "Trajectory",
    "abm_solve",
    "mittag_leffler",
    "ConvergenceEstimate",
    "estimate_convergence_order",
    "DerivedConstants",
    "EquilibriumSet",
    "derived_constants",
    "compute_r0",
    "disease_free_equilibrium",
    "endemic_equilibrium",
    "equilibrium_set",
    "equilibrium_residual",
    "CharPoly",
    "StabilityReport",
    "AppliedRule",
    "Verdict",
    "jacobian_at_dfe",
    "dfe_char_poly",
    "cubic_discriminant",
    "cubic_roots",
    "matignon_margin",
    "classify_dfe",
    "LyapunovCoefficients",
    "lyapunov_coefficients",
    "dfe_lyapunov",
    "endemic_lyapunov",
    "AuditReport",
    "monotonicity_audit",
    "ConfigError",
    "RunConfig",
    "load_config",
    "__version__",
]
