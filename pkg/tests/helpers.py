import numpy as np

from werner_metrology.states import DensityMatrix


def random_density(rng: np.random.Generator, dim: int = 4, rank: int | None = None) -> DensityMatrix:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_hermitian(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    a = rng.uniform(-1, 1, (dim, dim)) + 1j * rng.uniform(-1, 1, (dim, dim))
    return 0.5 * (a + a.conj().T)


def random_povm_operators(rng: np.random.Generator, n_outcomes: int, dim: int = 4) -> list[np.ndarray]:
    """Random full-rank POVM: M_k = S^{-1/2} A_k S^{-1/2} with S = sum A_k."""
    from werner_metrology.linalg import matrix_sqrt

    parts = []
    for _ in range(n_outcomes):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        parts.append(g @ g.conj().T)
    inv_root = np.linalg.inv(matrix_sqrt(sum(parts)))
    ops = [inv_root @ a @ inv_root for a in parts]
    return [0.5 * (m + m.conj().T) for m in ops]
