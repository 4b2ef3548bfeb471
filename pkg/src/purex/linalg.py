"""Dense complex linear algebra on Liouville space.

All matrices are plain numpy complex arrays.  Vectorization is row-major,
``vec(M)[i * cols + j] = M[i, j]``, so the two-sided product
``A @ rho @ B`` acts on vectors as ``kron(A, B.T) @ vec(rho)``.

Qubit density matrices are additionally handled in a "populations first"
component order (rho_00, rho_11, rho_01, rho_10) whenever a 4x4
conditional map is reported; :func:`population_first_indices` documents
the permutation between the two layouts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NumericError

# Two eigenvalue moduli count as equal when they differ by less than this
# relative amount.
DEGENERACY_RTOL = 1e-9

# Right-eigenvector matrix with a reciprocal condition number below this is
# treated as numerically singular, i.e. the input is flagged non-diagonalizable.
_RCOND_DIAGONALIZABLE = 1e-10

# Order-13 diagonal Pade coefficients and the 1-norm threshold below which a
# single evaluation of the approximant is accurate to machine precision.
_PADE13_COEFFS = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)
_PADE13_THETA = 5.371920351148152


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def _as_square(a) -> np.ndarray:
    m = _as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition of a general (non-Hermitian) square matrix.

    Eigenvalues are sorted by descending modulus, ties broken by descending
    real part and then descending imaginary part, so repeated calls on the
    same input give the same ordering.  ``right_vectors`` holds unit-norm
    right eigenvectors as columns.  ``left_vectors`` holds the matching left
    eigenvectors as rows, bi-orthonormalized so that
    ``left_vectors @ right_vectors`` is the identity whenever
    ``diagonalizable`` is true.  ``condition_estimate`` is the reciprocal
    condition number of the right-eigenvector matrix; it drops below 1e-10
    exactly when the input is flagged non-diagonalizable.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    diagonalizable: bool
    condition_estimate: float

    def eigenprojection(self, n: int) -> np.ndarray:
        """Rank-one spectral projector onto the n-th eigenspace."""
        return np.outer(self.right_vectors[:, n], self.left_vectors[n])


def eig(a) -> EigenSystem:
    """Eigendecomposition with deterministic ordering and left vectors."""
    m = _as_square(a)
    if not np.all(np.isfinite(m)):
        raise NumericError("eigendecomposition input contains non-finite entries")
    try:
        w, right = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        n = m.shape[0]
        raise ConvergenceError(
            f"eigenvalue iteration failed to converge for a {n}x{n} matrix"
        ) from exc
    order = np.lexsort((-w.imag, -w.real, -np.abs(w)))
    w = w[order]
    right = right[:, order]
    singular = np.linalg.svd(right, compute_uv=False)
    rcond = float(singular[-1] / singular[0]) if singular[0] > 0 else 0.0
    if rcond < _RCOND_DIAGONALIZABLE:
        # Defective (or numerically defective) input: left vectors from the
        # pseudo-inverse are reported but not bi-orthonormal.
        return EigenSystem(w, right, np.linalg.pinv(right), False, rcond)
    return EigenSystem(w, right, np.linalg.inv(right), True, rcond)


def expm(a, scale: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(a * scale)``.

    Scaling and squaring with the order-13 diagonal Pade approximant: the
    input is halved until its 1-norm is at most 5.3719..., the approximant
    is evaluated once, and the result is squared back.  Both the order and
    the threshold are fixed constants, so results are bit-stable across runs.
    """
    m = _as_square(a)
    if not (np.all(np.isfinite(m)) and math.isfinite(scale)):
        raise NumericError("matrix exponential input contains non-finite entries")
    m = m * scale
    n = m.shape[0]
    ident = np.eye(n, dtype=complex)

    norm1 = float(np.max(np.sum(np.abs(m), axis=0))) if n else 0.0
    squarings = 0
    if norm1 > _PADE13_THETA:
        squarings = int(math.ceil(math.log2(norm1 / _PADE13_THETA)))
        m = m / (2.0 ** squarings)

    b = _PADE13_COEFFS
    m2 = m @ m
    m4 = m2 @ m2
    m6 = m4 @ m2
    u = m @ (m6 @ (b[13] * m6 + b[11] * m4 + b[9] * m2)
             + b[7] * m6 + b[5] * m4 + b[3] * m2 + b[1] * ident)
    v = (m6 @ (b[12] * m6 + b[10] * m4 + b[8] * m2)
         + b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * ident)
    try:
        result = np.linalg.solve(v - u, v + u)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"Pade denominator is singular for a {n}x{n} matrix"
        ) from exc
    for _ in range(squarings):
        result = result @ result
    return result


def vectorize(m) -> np.ndarray:
    """Row-major vectorization: ``vec(M)[i * cols + j] = M[i, j]``."""
    return _as_matrix(m).reshape(-1)


def devectorize(v, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if vec.size != rows * cols:
        raise DimensionError(
            f"cannot devectorize length {vec.size} into {rows}x{cols}"
        )
    return vec.reshape(rows, cols)


def sandwich_superoperator(a, b) -> np.ndarray:
    """Matrix of ``rho -> a @ rho @ b`` acting on row-major vectorizations."""
    return np.kron(_as_matrix(a), _as_matrix(b).T)


def frobenius_norm(m) -> float:
    """sqrt(tr(M^dag M))."""
    return float(np.linalg.norm(np.asarray(m)))


def trace(m) -> complex:
    return complex(np.trace(_as_square(m)))


def dagger(m) -> np.ndarray:
    return _as_matrix(m).conj().T


def kron(a, b) -> np.ndarray:
    return np.kron(_as_matrix(a), _as_matrix(b))


def population_first_indices(d: int) -> tuple[int, ...]:
    """Permutation mapping population-first components to row-major ones.

    Component k of a population-first vector is row-major component
    ``population_first_indices(d)[k]``: the d diagonal entries come first,
    followed by the off-diagonal entries in row-major order.  For a qubit
    this is (0, 3, 1, 2), i.e. (rho_00, rho_11, rho_01, rho_10).
    """
    diag = [i * d + i for i in range(d)]
    off = [i * d + j for i in range(d) for j in range(d) if i != j]
    return tuple(diag + off)


def vec_population_first(m) -> np.ndarray:
    """Vectorize with populations first (see :func:`population_first_indices`)."""
    mat = _as_square(m)
    return vectorize(mat)[list(population_first_indices(mat.shape[0]))]


def unvec_population_first(v) -> np.ndarray:
    """Inverse of :func:`vec_population_first`."""
    vec = np.asarray(v, dtype=complex).reshape(-1)
    d = math.isqrt(vec.size)
    if d * d != vec.size:
        raise DimensionError(f"length {vec.size} is not a square dimension")
    out = np.empty(vec.size, dtype=complex)
    out[list(population_first_indices(d))] = vec
    return out.reshape(d, d)


def population_first_basis(d: int) -> list[np.ndarray]:
    """The d*d matrix units, ordered populations first."""
    basis = []
    for k in range(d * d):
        v = np.zeros(d * d, dtype=complex)
        v[k] = 1.0
        basis.append(unvec_population_first(v))
    return basis


def superoperator_population_first(m) -> np.ndarray:
    """Re-index a row-major superoperator into population-first components."""
    mat = _as_square(m)
    d = math.isqrt(mat.shape[0])
    if d * d != mat.shape[0]:
        raise DimensionError(f"superoperator size {mat.shape[0]} is not a square")
    idx = list(population_first_indices(d))
    return mat[np.ix_(idx, idx)]
