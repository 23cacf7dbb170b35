"""Two-qubit phase estimation with Werner-state probes.

Bell-basis (global) versus diagonal-basis (local) measurement strategies,
their classical and quantum Fisher information, and seeded Monte Carlo
checks of the Cramer-Rao bound.
"""

from .channels import check_order_independence, depolarize, phase_generator, phase_imprint
from .estimation import (
    CrbReport,
    ExperimentConfig,
    TrialResult,
    crb,
    estimate_eta,
    mle_phi,
    run_monte_carlo,
    sample_counts,
)
from .fisher import (
    classical_fisher,
    fisher_bell_closed,
    fisher_local_closed,
    qfi_adaptive_closed,
    qfi_coherent_closed,
    qfi_unitary_family,
)
from .linalg import hermitian_eig, kron, matrix_sqrt, partial_trace
from .measurements import (
    OutcomeDistribution,
    Povm,
    VisibilityModelParams,
    adaptive_project,
    bell_povm,
    grouped_bell_povm,
    local_diag_povm,
    model_bell_probs,
    model_local_probs,
    probabilities,
)
from .states import DensityMatrix, PureState, bell_state, fidelity, purity, werner, werner_from_bell_mixture

__version__ = "0.1.0"
