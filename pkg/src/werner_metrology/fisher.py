"""Classical and quantum Fisher information, plus closed-form references."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np
import numpy.typing as npt

from .errors import DivergentInformationError, DomainError, InvalidStateError
from .linalg import as_square, hermitian_eig
from .measurements import OutcomeDistribution
from .states import DensityMatrix

P_ZERO = 1e-12
DP_ZERO = 1e-9
EIG_SUM_CUTOFF = 1e-12
# sin^2(2 phi) below this is treated as an exact zero (e.g. phi = pi/2 in floats).
SIN2_ZERO = 1e-28

REPORT_FIELDS = ("strategy", "eta", "phi", "visibility", "value")


@dataclass(frozen=True)
class FisherReport:
    strategy: str
    phi: float
    eta: float
    visibility: float
    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value) or self.value < 0.0:
            raise DomainError(f"Fisher information must be finite and >= 0, got {self.value}")


def reports_to_csv(reports: Iterable[FisherReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        row = asdict(rep)
        writer.writerow({k: row[k] for k in REPORT_FIELDS})
    return buf.getvalue()


def classical_fisher(dist: OutcomeDistribution) -> float:
    """Sum over outcomes of (dp/dphi)^2 / p.

    Outcomes with p < 1e-12 and |dp/dphi| < 1e-9 contribute their limit, 0.
    A vanishing probability with a non-vanishing slope raises
    :class:`DivergentInformationError` instead of returning infinity.
    """
    if dist.dprob_dphi is None:
        raise InvalidStateError("classical_fisher needs a distribution with phase derivatives")
    total = 0.0
    for label, p, dp in zip(dist.labels, dist.probabilities, dist.dprob_dphi):
        if p < P_ZERO:
            if abs(dp) < DP_ZERO:
                continue
            raise DivergentInformationError(
                f"outcome {label!r} has p={p:.3e} but dp/dphi={dp:.3e}"
            )
        total += dp * dp / p
    return float(total)


def qfi_unitary_family(rho: DensityMatrix, generator: npt.ArrayLike) -> float:
    """QFI of rho under exp(i G phi), from the eigendecomposition of rho.

    2 * sum_ij (l_i - l_j)^2 / (l_i + l_j) |<psi_i|G|psi_j>|^2, skipping
    pairs with l_i + l_j below 1e-12.
    """
    if not isinstance(rho, DensityMatrix):
        raise InvalidStateError("qfi_unitary_family expects a DensityMatrix")
    g = as_square(generator)
    if g.shape != rho.matrix.shape:
        raise InvalidStateError(f"generator shape {g.shape} does not match state dim {rho.dim}")
    dec = hermitian_eig(rho.matrix)
    lam = dec.eigenvalues
    v = dec.eigenvectors
    elements = np.abs(v.conj().T @ g @ v) ** 2
    total = 0.0
    n = lam.size
    for i in range(n):
        for j in range(n):
            s = lam[i] + lam[j]
            if s < EIG_SUM_CUTOFF:
                continue
            total += (lam[i] - lam[j]) ** 2 / s * elements[i, j]
    return float(max(2.0 * total, 0.0))


def _check_eta(eta: float) -> float:
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    return float(eta)


def qfi_coherent_closed(eta: float) -> float:
    """8 eta^2 / (1 + eta): best precision over all two-probe measurements."""
    eta = _check_eta(eta)
    return 8.0 * eta * eta / (1.0 + eta)


def fisher_bell_closed(phi: float, eta: float) -> float:
    """Bell-basis Fisher information with the cos^2 denominator.

    At the singular points eta = 1, sin(2 phi) = 0 the expression is 0/0;
    the value returned there is 0, matching :func:`classical_fisher` on the
    exact distribution.
    """
    eta = _check_eta(eta)
    s2 = math.sin(2.0 * phi) ** 2
    if s2 < SIN2_ZERO:
        return 0.0
    num = 8.0 * eta * eta * (1.0 + eta) * s2
    return num / ((1.0 + eta) ** 2 - 4.0 * eta * eta * math.cos(2.0 * phi) ** 2)


def fisher_bell_printed(phi: float, eta: float) -> float:
    """The Bell-basis formula with an unsquared cos(2 phi) in the denominator.

    Kept only to document that it disagrees with the brute-force sum away
    from phi = pi/4; use :func:`fisher_bell_closed`.
    """
    eta = _check_eta(eta)
    num = 8.0 * eta * eta * (1.0 + eta) * math.sin(2.0 * phi) ** 2
    return num / ((1.0 + eta) ** 2 - 4.0 * eta * eta * math.cos(2.0 * phi))


def fisher_local_closed(phi: float, eta: float) -> float:
    """Diagonal-basis Fisher information 4 eta^2 sin^2 2phi / (1 - eta^2 cos^2 2phi)."""
    eta = _check_eta(eta)
    s2 = math.sin(2.0 * phi) ** 2
    if s2 < SIN2_ZERO:
        return 0.0
    num = 4.0 * eta * eta * s2
    return num / (1.0 - eta * eta * math.cos(2.0 * phi) ** 2)


def qfi_adaptive_closed(m0: complex, m1: complex, eta: float) -> float:
    eta = _check_eta(eta)
    if abs(abs(m0) ** 2 + abs(m1) ** 2 - 1.0) > 1e-9:
        raise DomainError("projection state (m0, m1) is not normalized")
    return 16.0 * abs(m0 * m1) ** 2 * eta * eta
