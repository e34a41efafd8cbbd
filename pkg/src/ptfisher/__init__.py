"""ptfisher: damping-rate estimation for a dissipative qubit.

Closed-form dynamics of a qubit under PT-symmetric non-Hermitian feedback,
an independent RK4 master-equation integrator (compiled kernel with a
pure-Python fallback), quantum/classical Fisher information along several
routes, and entangled no-jump probes with their precision bounds.
"""

from ._backend import BACKEND, available_backends
from .core import (
    DensityMatrix,
    NumericError,
    PhysicalityError,
    PTRegime,
    Regime,
    classify_regime,
    mat_exp_2x2,
)
from .dynamics import (
    FeedbackConfig,
    decay_factors,
    feedback_factor,
    feedback_propagator,
    initial_superposition,
    integrate_master,
    lindblad_rhs,
    rho_analytic,
    rho_no_feedback,
)
from .estimation import (
    FisherResult,
    StateFamily,
    classical_fisher_projective,
    drho_dgamma,
    feedback_family,
    fisher_projective_closed,
    fisher_rate_peak,
    no_feedback_family,
    qfi_closed_2x2,
    qfi_of_family,
    qfi_pure,
    qfi_spectral,
)
from .probes import (
    EigenstatePair,
    ProbeConfig,
    eigenstates_heff,
    evolve_probe,
    optimal_theta,
    precision_bound,
    qfi_eigenstate,
    qfi_probe_closed,
    qfi_probe_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "DensityMatrix",
    "NumericError",
    "PhysicalityError",
    "PTRegime",
    "Regime",
    "classify_regime",
    "mat_exp_2x2",
    "FeedbackConfig",
    "decay_factors",
    "feedback_factor",
    "feedback_propagator",
    "initial_superposition",
    "integrate_master",
    "lindblad_rhs",
    "rho_analytic",
    "rho_no_feedback",
    "FisherResult",
    "StateFamily",
    "classical_fisher_projective",
    "drho_dgamma",
    "feedback_family",
    "fisher_projective_closed",
    "fisher_rate_peak",
    "no_feedback_family",
    "qfi_closed_2x2",
    "qfi_of_family",
    "qfi_pure",
    "qfi_spectral",
    "EigenstatePair",
    "ProbeConfig",
    "eigenstates_heff",
    "evolve_probe",
    "optimal_theta",
    "precision_bound",
    "qfi_eigenstate",
    "qfi_probe_closed",
    "qfi_probe_oracle",
]
