"""Global depolarizing noise and phase imprinting exp(i H phi)."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, DomainError
from .linalg import ComplexMatrix, max_abs
from .states import DensityMatrix

# H = |1><1| (x) I + I (x) |1><1| in the |00>, |01>, |10>, |11> basis.
PHASE_GENERATOR_DIAG = np.array([0.0, 1.0, 1.0, 2.0])


def phase_generator() -> ComplexMatrix:
    return np.diag(PHASE_GENERATOR_DIAG).astype(np.complex128)


def _require_two_qubit(rho: DensityMatrix) -> None:
    if rho.dim != 4:
        raise DimensionError(f"expected a two-qubit state, got dim {rho.dim}")


def depolarize(rho: DensityMatrix, eta: float) -> DensityMatrix:
    """Mix with white noise: (1 - eta) I/4 + eta rho."""
    _require_two_qubit(rho)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    return DensityMatrix((1.0 - eta) * np.eye(4) / 4.0 + eta * rho.matrix)


def phase_unitary(phi: float) -> ComplexMatrix:
    return np.diag(np.exp(1j * phi * PHASE_GENERATOR_DIAG))


def phase_imprint(rho: DensityMatrix, phi: float) -> DensityMatrix:
    """Apply U rho U^dagger with U = exp(i H phi) = diag(1, e^{i phi}, e^{i phi}, e^{2i phi})."""
    _require_two_qubit(rho)
    u = np.exp(1j * phi * PHASE_GENERATOR_DIAG)
    return DensityMatrix(rho.matrix * np.outer(u, u.conj()))


def phase_derivative(rho_phi: DensityMatrix) -> ComplexMatrix:
    """d/dphi of U rho U^dagger, i.e. i [H, rho_phi]."""
    _require_two_qubit(rho_phi)
    h = PHASE_GENERATOR_DIAG
    return 1j * (h[:, None] - h[None, :]) * rho_phi.matrix


def check_order_independence(rho: DensityMatrix, eta: float, phi: float) -> float:
    """Max-norm gap between imprint-after-noise and noise-after-imprint."""
    a = phase_imprint(depolarize(rho, eta), phi)
    b = depolarize(phase_imprint(rho, phi), eta)
    return max_abs(a.matrix - b.matrix)
