"""POVMs, the trace rule, and the visibility-corrected probability models.

Outcome labels are part of the counts-file wire format:
``B00, B10, B01, B11`` (Bell), ``B00, B10, group_B01_B11`` (grouped Bell)
and ``++, +-, -+, --`` (local diagonal basis).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
import numpy.typing as npt

from .errors import CannotConditionError, DimensionError, DomainError, InvalidStateError
from .linalg import ComplexMatrix, as_square, is_psd, kron, max_abs, partial_trace
from .states import DensityMatrix, PureState, bell_state

BELL_LABELS = ("B00", "B10", "B01", "B11")
GROUPED_LABELS = ("B00", "B10", "group_B01_B11")
LOCAL_LABELS = ("++", "+-", "-+", "--")

STRATEGY_LABELS = {
    "bell": BELL_LABELS,
    "grouped_bell": GROUPED_LABELS,
    "local": LOCAL_LABELS,
}

POVM_TOL = 1e-9


def check_strategy(strategy: str) -> str:
    if strategy not in STRATEGY_LABELS:
        raise DomainError(f"unknown strategy {strategy!r}; expected one of {sorted(STRATEGY_LABELS)}")
    return strategy


@dataclass(frozen=True, eq=False)
class Povm:
    """Labeled PSD operators summing to the identity."""

    labels: tuple[str, ...]
    operators: tuple[ComplexMatrix, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.operators) or not self.labels:
            raise InvalidStateError("POVM needs one label per operator and at least one element")
        ops = tuple(as_square(op) for op in self.operators)
        dim = ops[0].shape[0]
        if any(op.shape[0] != dim for op in ops):
            raise DimensionError("POVM elements differ in dimension")
        for label, op in zip(self.labels, ops):
            if not is_psd(op, POVM_TOL):
                raise InvalidStateError(f"POVM element {label!r} is not Hermitian PSD")
        if max_abs(sum(ops) - np.eye(dim)) > POVM_TOL:
            raise InvalidStateError("POVM elements do not sum to the identity")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return int(self.operators[0].shape[0])

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class OutcomeDistribution:
    labels: tuple[str, ...]
    probabilities: npt.NDArray[np.float64]
    dprob_dphi: npt.NDArray[np.float64] | None = None

    def __post_init__(self) -> None:
        p = np.asarray(self.probabilities, dtype=float)
        if p.shape != (len(self.labels),):
            raise DimensionError("one probability per label required")
        if np.any(p < -1e-12):
            raise InvalidStateError(f"negative probability in {p}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > 1e-9:
            raise InvalidStateError(f"probabilities sum to {p.sum():.12g}")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "probabilities", p)
        if self.dprob_dphi is not None:
            d = np.asarray(self.dprob_dphi, dtype=float)
            if d.shape != p.shape:
                raise DimensionError("one derivative per label required")
            if abs(d.sum()) > 1e-9:
                raise InvalidStateError(f"derivatives sum to {d.sum():.3e}, expected 0")
            object.__setattr__(self, "dprob_dphi", d)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.probabilities.tolist()))

    def to_dict(self) -> dict[str, Any]:
        return {"labels": list(self.labels), "p": self.probabilities.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OutcomeDistribution:
        return cls(tuple(data["labels"]), np.asarray(data["p"], dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> OutcomeDistribution:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class VisibilityModelParams:
    eta: float
    visibility: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta", "visibility"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)


def _projector(vec: Sequence[complex]) -> ComplexMatrix:
    v = np.asarray(vec, dtype=np.complex128)
    return np.outer(v, v.conj())


def bell_povm() -> Povm:
    ops = tuple(bell_state(int(lab[1]), int(lab[2])).projector() for lab in BELL_LABELS)
    return Povm(BELL_LABELS, ops)


def grouped_bell_povm() -> Povm:
    b = {lab: bell_state(int(lab[1]), int(lab[2])).projector() for lab in BELL_LABELS}
    return Povm(GROUPED_LABELS, (b["B00"], b["B10"], b["B01"] + b["B11"]))


def local_diag_povm() -> Povm:
    plus = _projector(np.array([1.0, 1.0]) / math.sqrt(2.0))
    minus = _projector(np.array([1.0, -1.0]) / math.sqrt(2.0))
    side = {"+": plus, "-": minus}
    return Povm(LOCAL_LABELS, tuple(kron(side[lab[0]], side[lab[1]]) for lab in LOCAL_LABELS))


def povm_for(strategy: str) -> Povm:
    return {"bell": bell_povm, "grouped_bell": grouped_bell_povm, "local": local_diag_povm}[
        check_strategy(strategy)
    ]()


def probabilities(
    povm: Povm,
    rho: DensityMatrix,
    drho_dphi: ComplexMatrix | None = None,
) -> OutcomeDistribution:
    """Trace rule p_x = Tr(M_x rho).

    When the state derivative ``drho_dphi`` is supplied, the derivatives
    Tr(M_x drho/dphi) are filled in as well.
    """
    if povm.dim != rho.dim:
        raise DimensionError(f"POVM dim {povm.dim} does not match state dim {rho.dim}")
    p = np.array([np.trace(op @ rho.matrix).real for op in povm.operators])
    d = None
    if drho_dphi is not None:
        d = np.array([np.trace(op @ drho_dphi).real for op in povm.operators])
    return OutcomeDistribution(povm.labels, p, d)


def _checked(labels: tuple[str, ...], p: np.ndarray, d: np.ndarray) -> OutcomeDistribution:
    assert np.all(p >= -1e-12) and np.all(p <= 1.0 + 1e-12), f"model left [0, 1]: {p}"
    return OutcomeDistribution(labels, p, d)


def model_bell_probs(phi: float, params: VisibilityModelParams) -> OutcomeDistribution:
    """Bell-basis outcome model with the cosine terms damped by the visibility."""
    eta, v = params.eta, params.visibility
    c = v * eta * math.cos(2.0 * phi) / 2.0
    s = v * eta * math.sin(2.0 * phi)
    base = (1.0 + eta) / 4.0
    null = (1.0 - eta) / 4.0
    p = np.array([base + c, base - c, null, null])
    d = np.array([-s, s, 0.0, 0.0])
    return _checked(BELL_LABELS, p, d)


def model_grouped_bell_probs(phi: float, params: VisibilityModelParams) -> OutcomeDistribution:
    full = model_bell_probs(phi, params)
    p, d = full.probabilities, full.dprob_dphi
    return _checked(GROUPED_LABELS, np.array([p[0], p[1], p[2] + p[3]]), np.array([d[0], d[1], 0.0]))


def model_local_probs(phi: float, params: VisibilityModelParams) -> OutcomeDistribution:
    """Diagonal-basis product measurement, P_{++} = P_{--} = (1 + V eta cos 2phi)/4."""
    c = params.visibility * params.eta * math.cos(2.0 * phi)
    s = params.visibility * params.eta * math.sin(2.0 * phi) / 2.0
    same, diff = (1.0 + c) / 4.0, (1.0 - c) / 4.0
    p = np.array([same, diff, diff, same])
    d = np.array([-s, s, s, -s])
    return _checked(LOCAL_LABELS, p, d)


def model_probs(strategy: str, phi: float, params: VisibilityModelParams) -> OutcomeDistribution:
    return {
        "bell": model_bell_probs,
        "grouped_bell": model_grouped_bell_probs,
        "local": model_local_probs,
    }[check_strategy(strategy)](phi, params)


def adaptive_project(rho_phi: DensityMatrix, m: PureState) -> tuple[float, DensityMatrix]:
    """Project the first qubit onto |m> and return (probability, conditional state of the second)."""
    if rho_phi.dim != 4 or m.dim != 2:
        raise DimensionError("adaptive_project needs a two-qubit state and a single-qubit |m>")
    proj = kron(m.projector(), np.eye(2))
    prob = float(np.trace(proj @ rho_phi.matrix).real)
    if prob < 1e-12:
        raise CannotConditionError(f"outcome probability {prob:.3e} is too small to condition on")
    post = partial_trace(proj @ rho_phi.matrix @ proj, keep=1) / prob
    return prob, DensityMatrix(0.5 * (post + post.conj().T))
