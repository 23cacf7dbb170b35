"""Bell and Werner states, fidelity and purity.

Basis order is |00>, |01>, |10>, |11> with |0> = H and |1> = V polarization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from .errors import DimensionError, DomainError, InvalidStateError
from .linalg import ComplexMatrix, as_square, hermitian_eig, is_hermitian, matrix_sqrt

STATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size not in (2, 4):
            raise DimensionError(f"pure states live in dim 2 or 4, got {amps.size}")
        if abs(float(np.vdot(amps, amps).real) - 1.0) > 1e-10:
            raise InvalidStateError("state vector is not normalized")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def projector(self) -> ComplexMatrix:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix (Hermitian, unit trace, PSD within 1e-9).

    Invalid input is rejected, never silently repaired.
    """

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        m = as_square(self.matrix).copy()
        if m.shape[0] not in (2, 4):
            raise DimensionError(f"density matrices live in dim 2 or 4, got {m.shape[0]}")
        if not is_hermitian(m, STATE_TOL):
            raise InvalidStateError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidStateError(f"density matrix has trace {tr.real:.12g}, expected 1")
        lowest = hermitian_eig(m).eigenvalues[0]
        if lowest < -STATE_TOL:
            raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def to_dict(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DensityMatrix:
        m = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        if m.shape != (data["dim"], data["dim"]):
            raise DimensionError(f"declared dim {data['dim']} does not match shape {m.shape}")
        return cls(m)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> DensityMatrix:
        return cls.from_dict(json.loads(text))


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    return eta


def bell_state(k: int, j: int) -> PureState:
    """|B_kj> = (|0, j> + (-1)^k |1, 1 xor j>) / sqrt(2)."""
    if k not in (0, 1) or j not in (0, 1):
        raise DomainError(f"Bell indices must be bits, got ({k}, {j})")
    amps = np.zeros(4, dtype=np.complex128)
    amps[j] = 1.0
    amps[2 + (1 ^ j)] = (-1.0) ** k
    return PureState(amps / np.sqrt(2.0))


def werner(eta: float) -> DensityMatrix:
    """(1 - eta) I/4 + eta |B00><B00|."""
    eta = _check_eta(eta)
    return DensityMatrix((1.0 - eta) * np.eye(4) / 4.0 + eta * bell_state(0, 0).projector())


def werner_from_bell_mixture(eta: float) -> DensityMatrix:
    """Werner state written as a convex mixture of the four Bell projectors."""
    eta = _check_eta(eta)
    noise = sum(bell_state(k, j).projector() for k, j in ((1, 0), (0, 1), (1, 1)))
    return DensityMatrix((1.0 - eta) / 4.0 * noise + (1.0 + 3.0 * eta) / 4.0 * bell_state(0, 0).projector())


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), not squared."""
    if rho.dim != sigma.dim:
        raise DimensionError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    root = matrix_sqrt(rho.matrix)
    inner = root @ sigma.matrix @ root
    inner = 0.5 * (inner + inner.conj().T)
    value = float(np.trace(matrix_sqrt(inner)).real)
    return min(max(value, 0.0), 1.0)


def purity(rho: DensityMatrix) -> float:
    return float(np.trace(rho.matrix @ rho.matrix).real)
