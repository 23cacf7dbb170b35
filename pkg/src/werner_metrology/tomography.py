"""Two-qubit state tomography from local Pauli-basis measurements.

Nine basis pairs (X, Y, Z on each qubit) with four outcomes each give the
36 projector combinations.  Outcome ``+`` is the +1 eigenstate of the
Pauli operator (``|0>`` for Z), ``-`` the -1 eigenstate.  Reconstruction
is linear inversion over the Pauli basis followed by eigenvalue clipping.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import DomainError, IncompleteDataError, NotHermitianError
from .estimation import substream
from .linalg import ComplexMatrix, as_square, hermitian_eig, is_hermitian, kron
from .states import DensityMatrix, fidelity, purity

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

_S = 1.0 / np.sqrt(2.0)
EIGENSTATES = {
    "X": {"+": np.array([_S, _S]), "-": np.array([_S, -_S])},
    "Y": {"+": np.array([_S, 1j * _S]), "-": np.array([_S, -1j * _S])},
    "Z": {"+": np.array([1.0, 0.0]), "-": np.array([0.0, 1.0])},
}

BASIS_PAIRS = tuple(a + b for a, b in itertools.product("XYZ", repeat=2))
OUTCOMES = ("++", "+-", "-+", "--")
SIGNS = {"++": 1.0, "+-": -1.0, "-+": -1.0, "--": 1.0}


def _proj(v: np.ndarray) -> ComplexMatrix:
    v = np.asarray(v, dtype=np.complex128)
    return np.outer(v, v.conj())


def setting_projectors(bases: str) -> dict[str, ComplexMatrix]:
    """The four joint projectors of one basis pair, keyed by outcome."""
    a, b = bases
    return {
        out: kron(_proj(EIGENSTATES[a][out[0]]), _proj(EIGENSTATES[b][out[1]]))
        for out in OUTCOMES
    }


@dataclass(frozen=True)
class TomographySettings:
    shots_per_setting: int = 100_000
    seed: int = 0
    bases: tuple[str, ...] = BASIS_PAIRS

    def __post_init__(self) -> None:
        if self.shots_per_setting < 1:
            raise DomainError("shots_per_setting must be positive")
        if sorted(self.bases) != sorted(BASIS_PAIRS):
            raise DomainError("settings must be exactly the nine Pauli basis pairs")

    @property
    def n_projectors(self) -> int:
        return len(self.bases) * len(OUTCOMES)


# Per-setting data: {bases: {outcome: count or probability}}.
TomographyData = dict[str, dict[str, float]]


def exact_probabilities(rho: DensityMatrix) -> TomographyData:
    """Infinite-shot data: the trace-rule probabilities for every setting."""
    data: TomographyData = {}
    for bases in BASIS_PAIRS:
        projs = setting_projectors(bases)
        data[bases] = {out: float(np.trace(p @ rho.matrix).real) for out, p in projs.items()}
    return data


def generate_tomography_counts(rho: DensityMatrix, settings: TomographySettings) -> TomographyData:
    """Multinomial counts per setting; setting ``i`` uses substream ``(seed, i)``."""
    exact = exact_probabilities(rho)
    data: TomographyData = {}
    for i, bases in enumerate(settings.bases):
        p = np.clip([exact[bases][o] for o in OUTCOMES], 0.0, None)
        draws = substream(settings.seed, i).multinomial(settings.shots_per_setting, p / p.sum())
        data[bases] = {o: int(n) for o, n in zip(OUTCOMES, draws)}
    return data


def counts_to_json(data: TomographyData) -> str:
    return json.dumps(
        {"settings": [{"bases": b, "counts": dict(data[b])} for b in BASIS_PAIRS if b in data]}
    )


def counts_from_json(text: str) -> TomographyData:
    return {s["bases"]: dict(s["counts"]) for s in json.loads(text)["settings"]}


def _correlators(data: Mapping[str, Mapping[str, float]]) -> dict[str, float]:
    missing = [b for b in BASIS_PAIRS if b not in data]
    if missing:
        raise IncompleteDataError(f"missing tomography settings: {missing}")
    expect: dict[str, float] = {"II": 1.0}
    marg_a = {p: [0.0, 0.0] for p in "XYZ"}  # [signed sum, total]
    marg_b = {p: [0.0, 0.0] for p in "XYZ"}
    for bases in BASIS_PAIRS:
        counts = data[bases]
        n = np.array([counts.get(o, 0) for o in OUTCOMES], dtype=float)
        total = n.sum()
        if total <= 0:
            raise IncompleteDataError(f"setting {bases} has no counts")
        expect[bases] = float(sum(SIGNS[o] * k for o, k in zip(OUTCOMES, n)) / total)
        a, b = bases
        marg_a[a][0] += n[0] + n[1] - n[2] - n[3]
        marg_a[a][1] += total
        marg_b[b][0] += n[0] - n[1] + n[2] - n[3]
        marg_b[b][1] += total
    for p in "XYZ":
        expect[p + "I"] = marg_a[p][0] / marg_a[p][1]
        expect["I" + p] = marg_b[p][0] / marg_b[p][1]
    return expect


def linear_inversion(data: Mapping[str, Mapping[str, float]]) -> ComplexMatrix:
    """rho = (1/4) sum_ij <s_i s_j> s_i (x) s_j over the two-qubit Pauli basis.

    The result is Hermitian with unit trace but may have negative eigenvalues.
    """
    expect = _correlators(data)
    rho = np.zeros((4, 4), dtype=np.complex128)
    for key, value in expect.items():
        rho += value * kron(PAULI[key[0]], PAULI[key[1]])
    return rho / 4.0


def project_to_physical(m: ComplexMatrix) -> DensityMatrix:
    """Clip negative eigenvalues to zero and renormalize."""
    m = as_square(m)
    if not is_hermitian(m, 1e-9):
        raise NotHermitianError("project_to_physical needs a Hermitian matrix")
    if abs(np.trace(m) - 1.0) > 1e-6:
        raise DomainError(f"trace {np.trace(m).real:.6g} is not 1")
    dec = hermitian_eig(m)
    vals = np.clip(dec.eigenvalues, 0.0, None)
    vals /= vals.sum()
    v = dec.eigenvectors
    out = (v * vals) @ v.conj().T
    return DensityMatrix(0.5 * (out + out.conj().T))


@dataclass(frozen=True)
class TomographyReport:
    fidelity: float
    purity: float

    def to_dict(self) -> dict[str, Any]:
        return {"fidelity": self.fidelity, "purity": self.purity}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def reconstruct(data: Mapping[str, Mapping[str, float]]) -> DensityMatrix:
    return project_to_physical(linear_inversion(data))


def tomography_report(
    rho_target: DensityMatrix,
    settings: TomographySettings,
    rho_source: DensityMatrix | None = None,
    exact: bool = False,
) -> TomographyReport:
    """Measure ``rho_source`` (default: the target), reconstruct, compare with the target."""
    source = rho_target if rho_source is None else rho_source
    data = exact_probabilities(source) if exact else generate_tomography_counts(source, settings)
    rho_hat = reconstruct(data)
    return TomographyReport(fidelity(rho_hat, rho_target), purity(rho_hat))
