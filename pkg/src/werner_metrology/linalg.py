"""Small dense complex linear algebra.

Matrices are plain ``numpy`` arrays of shape ``(n, n)``.  The Hermitian
eigensolver is a cyclic complex Jacobi method; the dimensions used here are
2 and 4, so robustness matters more than speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .errors import ConvergenceError, DimensionError, NotHermitianError, NotPSDError

ComplexMatrix = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-9
PSD_CLIP = 1e-9
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_square(a: npt.ArrayLike) -> ComplexMatrix:
    """Return ``a`` as a complex square matrix, raising on bad shapes."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def max_abs(a: npt.ArrayLike) -> float:
    """Entrywise max-norm."""
    return float(np.max(np.abs(a)))


def is_hermitian(a: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> bool:
    m = as_square(a)
    return max_abs(m - m.conj().T) <= tol


def is_psd(a: npt.ArrayLike, tol: float = PSD_CLIP) -> bool:
    """True when ``a`` is Hermitian and its smallest eigenvalue is >= -tol."""
    m = as_square(a)
    if not is_hermitian(m):
        return False
    return bool(hermitian_eig(m).eigenvalues[0] >= -tol)


@dataclass(frozen=True)
class HermitianEigenDecomposition:
    """Eigenvalues in ascending order with matching orthonormal eigenvector columns."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _off_norm(a: ComplexMatrix) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eig(
    a: npt.ArrayLike,
    tol: float = JACOBI_OFF_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> HermitianEigenDecomposition:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the classical real rotation that annihilates it.  Sweeps stop
    once the off-diagonal Frobenius norm drops below ``tol`` (scaled by the
    matrix norm when that exceeds one).

    Raises
    ------
    NotHermitianError
        If ``a`` deviates from its conjugate transpose by more than 1e-9.
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    m = as_square(a)
    if not is_hermitian(m):
        raise NotHermitianError("hermitian_eig requires a Hermitian matrix")
    n = m.shape[0]
    work = 0.5 * (m + m.conj().T)
    vecs = np.eye(n, dtype=np.complex128)
    threshold = tol * max(1.0, float(np.linalg.norm(work)))

    for _ in range(max_sweeps):
        if _off_norm(work) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app = work[p, p].real
                aqq = work[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) on (p, q) followed by the real rotation.
                g = np.eye(n, dtype=np.complex128)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * np.conj(phase)
                g[q, q] = c * np.conj(phase)
                work = g.conj().T @ work @ g
                work[p, q] = work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                vecs = vecs @ g
    else:
        if _off_norm(work) >= threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    vals = np.real(np.diag(work)).copy()
    order = np.argsort(vals, kind="stable")
    return HermitianEigenDecomposition(vals[order], vecs[:, order])


def matrix_sqrt(a: npt.ArrayLike) -> ComplexMatrix:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-1e-9, 0)`` are treated as roundoff and clipped to zero;
    anything more negative raises :class:`NotPSDError`.
    """
    dec = hermitian_eig(a)
    vals = dec.eigenvalues
    if vals[0] < -PSD_CLIP:
        raise NotPSDError(f"matrix has eigenvalue {vals[0]:.3e} < -{PSD_CLIP:g}")
    roots = np.sqrt(np.clip(vals, 0.0, None))
    v = dec.eigenvectors
    out = (v * roots) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product with ``a`` as the left (first) subsystem."""
    return np.kron(as_square(a), as_square(b))


def partial_trace(a: npt.ArrayLike, keep: int) -> ComplexMatrix:
    """Reduce a two-qubit operator to subsystem ``keep`` (0 = first, 1 = second)."""
    m = as_square(a)
    if m.shape[0] != 4:
        raise DimensionError(f"partial_trace supports dim 4 only, got {m.shape[0]}")
    if keep not in (0, 1):
        raise DimensionError(f"keep must be 0 or 1, got {keep!r}")
    t = m.reshape(2, 2, 2, 2)  # indices: a, b, a', b'
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)
