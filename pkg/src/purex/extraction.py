"""Conditional evolution of the target qubit and spectral state extraction.

Between two successful measurements of the ancilla state |phi>_X the target
qubit S evolves under the conditional (trace-decreasing) map obtained by
sandwiching the full channel between projections onto |phi>_X.  Repeating
the measurement N times applies the N-th power of that map, so for large N
the state of S collapses onto the dominant right-eigenvector.  This module
builds the 4x4 conditional map, analyzes its spectrum, scores the extracted
state by purity tr(rho^2), estimates how many measurements a target quality
requires, and provides the weak-damping closed forms.

All 4x4 maps here act on population-first component vectors
(rho_00, rho_11, rho_01, rho_10).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from . import linalg
from .channel import propagator
from .errors import (
    ConvergenceError,
    DegenerateSpectrumError,
    DomainError,
    EmptyExtractionError,
    OrthogonalStartError,
    ParameterError,
    RegimeError,
)
from .linalg import (
    DEGENERACY_RTOL,
    EigenSystem,
    population_first_basis,
    unvec_population_first,
    vec_population_first,
)
from .model import COUPLED_STATES, ModelParams, coupled_energies, dissipator

# Success probabilities below this are pure round-off; trajectories truncate.
_UNDERFLOW_FLOOR = 1e-300

# A dominant eigenvalue smaller than this means the conditional map has
# annihilated everything the measurement can see.
_EMPTY_TOP_EIGENVALUE = 1e-14

# Hermitized dominant eigenvectors with trace modulus below this cannot be
# normalized into a state.
_TRACE_FLOOR = 1e-12


@dataclass(frozen=True)
class MeasurementSpec:
    """Repeatedly measured ancilla state and measurement spacing.

    The ancilla is projected onto
    ``cos(theta/2)|up> + exp(i chi) sin(theta/2)|down>`` every tau.
    """

    theta: float
    chi: float
    tau: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ParameterError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.chi < 2.0 * math.pi:
            raise ParameterError(f"chi must lie in [0, 2*pi), got {self.chi}")
        if not self.tau > 0.0:
            raise ParameterError(f"tau must be positive, got {self.tau}")

    def ancilla_state(self) -> np.ndarray:
        return np.array(
            [
                math.cos(0.5 * self.theta),
                np.exp(1j * self.chi) * math.sin(0.5 * self.theta),
            ],
            dtype=complex,
        )


@dataclass(frozen=True)
class PureStateSpec:
    """Candidate pure state of S, parametrized on the Bloch sphere."""

    eta: float
    xi: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= math.pi:
            raise ParameterError(f"eta must lie in [0, pi], got {self.eta}")
        if not 0.0 <= self.xi < 2.0 * math.pi:
            raise ParameterError(f"xi must lie in [0, 2*pi), got {self.xi}")

    @classmethod
    def from_vector(cls, v) -> "PureStateSpec":
        vec = np.asarray(v, dtype=complex).reshape(-1)
        if vec.size != 2:
            raise ParameterError("expected a single-qubit state vector")
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise ParameterError("cannot build angles from the zero vector")
        vec = vec / norm
        eta = 2.0 * math.atan2(abs(vec[1]), abs(vec[0]))
        xi = float(np.angle(vec[1]) - np.angle(vec[0])) % (2.0 * math.pi)
        if eta == 0.0 or eta == math.pi:
            xi = 0.0  # azimuth is meaningless at the poles
        return cls(eta=eta, xi=xi)

    def state(self) -> np.ndarray:
        return np.array(
            [
                math.cos(0.5 * self.eta),
                np.exp(1j * self.xi) * math.sin(0.5 * self.eta),
            ],
            dtype=complex,
        )

    def orthogonal_state(self) -> np.ndarray:
        return np.array(
            [
                math.sin(0.5 * self.eta),
                -np.exp(1j * self.xi) * math.cos(0.5 * self.eta),
            ],
            dtype=complex,
        )


@dataclass(frozen=True)
class ExtractionResult:
    """Spectral analysis of a conditional map.

    ``extracted_state`` is the hermitized, trace-normalized dominant
    right-eigenvector (None when normalization is impossible), ``purity``
    its tr(rho^2), and ``log_ratio`` the spectral gap ln|lambda_0/lambda_1|
    controlling how fast the extraction converges.  ``degenerate`` is set
    when the top two moduli coincide within tolerance, when the map is not
    diagonalizable, or when no state could be normalized.
    """

    spectrum: EigenSystem
    extracted_state: np.ndarray | None
    purity: float
    log_ratio: float
    degenerate: bool


@dataclass(frozen=True)
class Trajectory:
    """Conditional evolution record under repeated measurements."""

    n: np.ndarray
    success_probability: np.ndarray
    purity: np.ndarray
    underflow_truncated: bool


@dataclass(frozen=True)
class MeasurementEstimate:
    """Sufficient number of measurements for a target extraction quality.

    ``weight`` is the dominant-component weight actually reached after ``n``
    measurements.  The threshold numerator splits into ``quality_log``
    (target-quality and dimension part) and ``initial_log`` (initial-state
    part); the denominator is ``log_ratio``.
    """

    n: int
    weight: float
    quality_log: float
    initial_log: float
    log_ratio: float


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of the common-eigenstate test for a candidate pure state."""

    passed: bool
    eigencoefficients: np.ndarray
    residuals: np.ndarray
    map_eigenvalue: float


def validate_density_matrix(rho, dim: int = 2, atol: float = 1e-9) -> np.ndarray:
    """Check shape, hermiticity, unit trace and positivity; return as complex."""
    mat = np.asarray(rho, dtype=complex)
    if mat.shape != (dim, dim):
        raise ParameterError(f"expected a {dim}x{dim} density matrix, got {mat.shape}")
    if linalg.frobenius_norm(mat - mat.conj().T) > atol:
        raise ParameterError("density matrix is not Hermitian")
    if abs(np.trace(mat) - 1.0) > atol:
        raise ParameterError("density matrix trace differs from one")
    if float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0]) < -atol:
        raise ParameterError("density matrix has a negative eigenvalue")
    return mat


def _ancilla_projected_map(total_superop: np.ndarray, ancilla: np.ndarray) -> np.ndarray:
    """Contract a 16x16 two-qubit superoperator to the conditional map on S.

    Column by column: each population-first basis matrix of S is tensored
    with |phi><phi| on X, pushed through the map, and the X output is
    projected back onto |phi>.
    """
    phiphi = np.outer(ancilla, ancilla.conj())
    columns = []
    for basis_mat in population_first_basis(2):
        rho_tot = np.kron(basis_mat, phiphi)
        evolved = (total_superop @ rho_tot.reshape(-1)).reshape(4, 4)
        blocks = evolved.reshape(2, 2, 2, 2)
        rho_s = np.einsum("x,axby,y->ab", ancilla.conj(), blocks, ancilla)
        columns.append(vec_population_first(rho_s))
    return np.column_stack(columns)


def contracted_map(params: ModelParams, m: MeasurementSpec) -> np.ndarray:
    """4x4 conditional map of S over one measurement interval.

    Acts on population-first component vectors and is trace-decreasing in
    general: the lost weight is the probability of a failed measurement.
    """
    return _ancilla_projected_map(propagator(params, m.tau), m.ancilla_state())


def analyze(conditional_map) -> ExtractionResult:
    """Extract the dominant state of a 4x4 conditional map and score it."""
    mat = np.asarray(conditional_map, dtype=complex)
    if mat.shape != (4, 4):
        raise ParameterError(f"expected a 4x4 conditional map, got {mat.shape}")
    spectrum = linalg.eig(mat)
    moduli = np.abs(spectrum.eigenvalues)
    if moduli[0] < _EMPTY_TOP_EIGENVALUE:
        raise EmptyExtractionError(
            f"dominant eigenvalue modulus {moduli[0]:.3e} is numerically zero"
        )
    degenerate = (not spectrum.diagonalizable) or (
        moduli[0] - moduli[1] < DEGENERACY_RTOL * moduli[0]
    )
    log_ratio = math.inf if moduli[1] == 0.0 else math.log(moduli[0] / moduli[1])

    candidate = unvec_population_first(spectrum.right_vectors[:, 0])
    hermitized = 0.5 * (candidate + candidate.conj().T)
    tr = np.trace(hermitized)
    if abs(tr) < _TRACE_FLOOR:
        # The eigenvector has no state content; nothing to normalize.
        return ExtractionResult(spectrum, None, math.nan, log_ratio, True)
    state = hermitized / tr
    purity = float(np.real(np.trace(state @ state)))
    return ExtractionResult(spectrum, state, purity, log_ratio, degenerate)


def _up_coherence_amplitude(params: ModelParams, tau: float) -> complex:
    """Survival amplitude of the S coherence when the ancilla is held in |up>."""
    return (
        0.5
        * np.exp(-1j * (params.omega + params.epsilon) * tau)
        * (1.0 + math.exp(-0.5 * params.gamma1 * tau) * np.exp(2j * params.epsilon * tau))
    )


def alpha_analytic(params: ModelParams, tau: float) -> float:
    """Closed-form population ratio of the mixed state extracted at theta = 0.

    Valid at zero temperature when the population eigenvalue exp(-gamma2*tau)
    dominates the coherence one (case II); the extracted state is then
    diag(1, alpha) / (1 + alpha) with purity (1 + alpha^2) / (1 + alpha)^2.
    """
    if params.temperature != 0.0:
        raise RegimeError("closed form requires zero temperature")
    if tau <= 0.0:
        raise ParameterError(f"tau must be positive, got {tau}")
    g1, g2 = params.gamma1, params.gamma2
    f_abs = abs(_up_coherence_amplitude(params, tau))
    gap = math.exp(-g2 * tau) - f_abs * f_abs
    if math.exp(-0.5 * g2 * tau) <= f_abs:
        raise DomainError(
            "population eigenvalue is not dominant here (case I); "
            "the extracted state is pure and alpha is undefined"
        )
    gmax = max(g1, g2)
    if gmax == 0.0 or abs(g1 - g2) < 1e-8 * gmax:
        g = 0.5 * (g1 + g2)
        transfer = 0.5 * g2 * tau * math.exp(-g * tau)
    else:
        transfer = 0.5 * g2 * (math.exp(-g2 * tau) - math.exp(-g1 * tau)) / (g1 - g2)
    return transfer / gap


def trajectory(
    params: ModelParams,
    m: MeasurementSpec,
    rho0,
    n_max: int,
) -> Trajectory:
    """Iterate the conditional map and record success probability and purity.

    Entry N holds the cumulative probability that the first N measurements
    all succeeded and the purity of the correspondingly normalized state;
    N = 0 describes the initial state itself.  Iteration stops early with
    ``underflow_truncated`` set if the success probability underflows.
    """
    if n_max < 1:
        raise ParameterError(f"n_max must be at least 1, got {n_max}")
    rho = validate_density_matrix(rho0)
    vmap = contracted_map(params, m)
    vec = vec_population_first(rho)

    steps = []
    truncated = False
    for n in range(n_max + 1):
        state = unvec_population_first(vec)
        success = float(np.real(np.trace(state)))
        if success < _UNDERFLOW_FLOOR:
            truncated = True
            break
        normalized = state / success
        purity = float(np.real(np.trace(normalized @ normalized)))
        steps.append((n, success, purity))
        if n < n_max:
            vec = vmap @ vec
    counts, successes, purities = (np.array(col) for col in zip(*steps))
    return Trajectory(counts.astype(int), successes, purities, truncated)


def _projection_norms(spectrum: EigenSystem, rho0_vec: np.ndarray) -> np.ndarray:
    """Frobenius norms of the spectral components of the initial state."""
    coeffs = spectrum.left_vectors @ rho0_vec
    right_norms = np.linalg.norm(spectrum.right_vectors, axis=0)
    return np.abs(coeffs) * right_norms


def estimate_measurements(
    spectrum: EigenSystem, rho0, p0: float
) -> MeasurementEstimate:
    """Sufficient measurement count for the dominant component to carry weight p0.

    The bound needs a strictly dominant eigenvalue and an initial state with
    nonzero overlap with it.  The count is conservative: the weight actually
    reached at the returned N always meets p0.
    """
    if not 0.0 < p0 < 1.0:
        raise ParameterError(f"target quality must lie in (0, 1), got {p0}")
    if not spectrum.diagonalizable:
        raise DegenerateSpectrumError("spectrum is not diagonalizable")
    moduli = np.abs(spectrum.eigenvalues)
    if moduli[0] - moduli[1] < DEGENERACY_RTOL * moduli[0]:
        raise DegenerateSpectrumError(
            "top eigenvalue is degenerate in modulus; no finite estimate exists"
        )
    rho = validate_density_matrix(rho0)
    norms = _projection_norms(spectrum, vec_population_first(rho))
    if norms[0] < _TRACE_FLOOR:
        raise OrthogonalStartError(
            "initial state has no component along the dominant eigenvector"
        )
    m = len(spectrum.eigenvalues)
    log_ratio = math.log(moduli[0] / moduli[1])
    quality_log = math.log(p0 / (1.0 - p0)) + math.log(m - 1)
    rest = float(np.max(norms[1:]))
    if rest == 0.0:
        # Already exactly on target; one application never hurts the weight.
        return MeasurementEstimate(0, 1.0, quality_log, -math.inf, log_ratio)
    initial_log = math.log(rest / norms[0])
    n = max(0, math.ceil((quality_log + initial_log) / log_ratio))
    weight = success_weight(spectrum, rho, n)
    return MeasurementEstimate(n, weight, quality_log, initial_log, log_ratio)


def success_weight(spectrum: EigenSystem, rho0, n: int) -> float:
    """Weight of the dominant component after n measurements."""
    rho = validate_density_matrix(rho0)
    norms = _projection_norms(spectrum, vec_population_first(rho))
    moduli = np.abs(spectrum.eigenvalues)
    terms = moduli**n * norms
    total = float(np.sum(terms))
    if total == 0.0:
        raise EmptyExtractionError("all spectral components vanished")
    return float(terms[0]) / total


def pure_eigenstate_criterion(
    vs: list[np.ndarray], candidate: PureStateSpec, tol: float
) -> CriterionVerdict:
    """Test whether a pure state survives the conditional map unchanged.

    The candidate passes exactly when it is a simultaneous eigenstate of all
    contracted operators V_k, i.e. ||V_k phi - alpha_k phi|| stays below
    tol * ||V_k||_F with alpha_k = <phi|V_k|phi>.  When it passes, the pure
    state is an eigenvector of the conditional map with eigenvalue
    sum_k |alpha_k|^2 (reported as ``map_eigenvalue``).
    """
    if tol <= 0.0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    phi = candidate.state()
    alphas = []
    residuals = []
    passed = True
    for op in vs:
        mat = np.asarray(op, dtype=complex)
        alpha = complex(np.vdot(phi, mat @ phi))
        residual = float(np.linalg.norm(mat @ phi - alpha * phi))
        if residual > tol * linalg.frobenius_norm(mat):
            passed = False
        alphas.append(alpha)
        residuals.append(residual)
    alphas = np.array(alphas)
    return CriterionVerdict(
        passed=passed,
        eigencoefficients=alphas,
        residuals=np.array(residuals),
        map_eigenvalue=float(np.sum(np.abs(alphas) ** 2)),
    )


def _coupled_unitary(params: ModelParams, t: float) -> np.ndarray:
    """exp(-i H t) assembled from the exact two-spin eigendecomposition."""
    phases = np.exp(-1j * coupled_energies(params) * t)
    return (COUPLED_STATES * phases) @ COUPLED_STATES.conj().T


def ideal_contracted_operator(params: ModelParams, m: MeasurementSpec) -> np.ndarray:
    """<phi| exp(-i H tau) |phi>: the dissipation-free conditional operator on S."""
    ancilla = m.ancilla_state()
    blocks = _coupled_unitary(params, m.tau).reshape(2, 2, 2, 2)
    return np.einsum("x,axby,y->ab", ancilla.conj(), blocks, ancilla)


def _damping_correction_map(
    params: ModelParams,
    m: MeasurementSpec,
    rtol: float = 1e-8,
    start_nodes: int = 32,
    max_nodes: int = 4096,
) -> np.ndarray:
    """First-order dissipative correction to the ideal conditional map.

    Integrates (unitary evolution) o (dissipator) o (unitary evolution) over
    the insertion time of the single dissipative event, by Gauss-Legendre
    quadrature with node doubling until two successive levels agree to rtol
    in Frobenius norm, then contracts onto the measured ancilla state.
    """
    dsuper = dissipator(params)
    ancilla = m.ancilla_state()
    if linalg.frobenius_norm(dsuper) == 0.0:
        return np.zeros((4, 4), dtype=complex)

    def level(n_nodes: int) -> np.ndarray:
        nodes, weights = leggauss(n_nodes)
        times = 0.5 * m.tau * (nodes + 1.0)
        scaled = 0.5 * m.tau * weights
        acc = np.zeros((16, 16), dtype=complex)
        for t, w in zip(times, scaled):
            u_after = _coupled_unitary(params, m.tau - t)
            u_before = _coupled_unitary(params, t)
            evolve_after = np.kron(u_after, u_after.conj())
            evolve_before = np.kron(u_before, u_before.conj())
            acc += w * (evolve_after @ dsuper @ evolve_before)
        return acc

    previous = level(start_nodes)
    n_nodes = 2 * start_nodes
    while n_nodes <= max_nodes:
        current = level(n_nodes)
        scale = linalg.frobenius_norm(current)
        if scale == 0.0 or linalg.frobenius_norm(current - previous) <= rtol * scale:
            return _ancilla_projected_map(current, ancilla)
        previous = current
        n_nodes *= 2
    raise ConvergenceError(
        f"damping-correction quadrature did not converge below {max_nodes} nodes"
    )


def perturbative_purity(params: ModelParams, m: MeasurementSpec) -> float:
    """Purity of the extracted state to first order in the decay rates.

    Uses the spectral data of the ideal conditional operator plus the
    integrated first-order dissipative correction; requires the dominant
    ideal eigenvalue to be unique in modulus.
    """
    v0 = ideal_contracted_operator(params, m)
    spectrum = linalg.eig(v0)
    a0, a1 = spectrum.eigenvalues
    if not spectrum.diagonalizable or abs(a0) - abs(a1) <= DEGENERACY_RTOL * abs(a0):
        raise DegenerateSpectrumError(
            "ideal conditional operator has a degenerate dominant eigenvalue; "
            "the first-order formula does not apply"
        )
    delta_map = _damping_correction_map(params, m)
    u0 = spectrum.right_vectors[:, 0]
    left1 = spectrum.left_vectors[1]
    sigma00 = np.outer(u0, u0.conj())
    delta_rho = unvec_population_first(delta_map @ vec_population_first(sigma00))
    overlap = left1 @ delta_rho @ left1.conj()
    left1_norm2 = float(np.real(np.vdot(left1, left1)))
    gap = abs(a0) ** 2 - abs(a1) ** 2
    return 1.0 - 2.0 * float(np.real(overlap / gap)) / left1_norm2


def optimal_tau_weak_damping(epsilon: float) -> float:
    """Measurement spacing that maximizes weak-damping purity at theta = 0.

    The first-order purity deficit is proportional to x / sin(x)^2 with
    x = epsilon * tau, minimized on (0, pi) where tan(x) = 2x.  The
    stationarity condition is solved by bracketed root finding (direct
    minimization of x / sin(x)^2 cannot localize the optimum to the 1e-10
    accuracy required of x).
    """
    if epsilon <= 0.0:
        raise ParameterError(f"coupling must be positive, got {epsilon}")
    x = brentq(
        lambda x: math.sin(x) - 2.0 * x * math.cos(x),
        0.5,
        2.0,
        xtol=1e-13,
        rtol=8.9e-16,
    )
    return x / epsilon
