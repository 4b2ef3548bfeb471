"""Two interacting spins in a common bosonic bath.

The target qubit S and the repeatedly measured ancilla X exchange an
excitation through a flip-flop coupling; both decay into a shared thermal
environment.  With hbar = k_B = 1 the Hamiltonian is

    H = (Omega/2) (1 + sigma_z^S) + (Omega/2) (1 + sigma_z^X)
        + epsilon (sigma_+^S sigma_-^X + sigma_-^S sigma_+^X),

whose eigenstates are the triplet/singlet states |2>, |1>, |0>, |s> with
energies 2*Omega, Omega+epsilon, 0, Omega-epsilon.  Damping acts along the
triplet ladder only: downward jumps |2>->|1> (rate gamma2) and |1>->|0>
(rate gamma1), with the matching thermally activated upward jumps weighted
by the Bose occupations of the two transition frequencies Omega -+ epsilon.
The singlet is decoupled from the bath.

Product-basis ordering is (up,up), (up,down), (down,up), (down,down) with
S as the left factor.  Superoperators act on row-major vectorizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .linalg import sandwich_superoperator

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.conj().T
IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

COUPLED_LABELS = ("2", "1", "0", "s")

# Columns are |2>, |1>, |0>, |s> expanded over the product basis.
COUPLED_STATES = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, _INV_SQRT2, 0.0, _INV_SQRT2],
        [0.0, _INV_SQRT2, 0.0, -_INV_SQRT2],
        [0.0, 0.0, 1.0, 0.0],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the two-spin-plus-bath model (hbar = k_B = 1).

    omega is the Bohr frequency of each spin, epsilon the exchange coupling,
    gamma1/gamma2 the decay rates of the |1>->|0> and |2>->|1> transitions,
    and temperature the bath temperature.
    """

    omega: float
    epsilon: float
    gamma1: float
    gamma2: float
    temperature: float = 0.0

    def __post_init__(self):
        if not self.omega > self.epsilon > 0.0:
            raise ParameterError(
                f"require omega > epsilon > 0, got omega={self.omega}, "
                f"epsilon={self.epsilon}"
            )
        if self.gamma1 < 0.0 or self.gamma2 < 0.0:
            raise ParameterError("decay rates must be nonnegative")
        if self.temperature < 0.0:
            raise ParameterError("temperature must be nonnegative")

    @classmethod
    def from_ratios(
        cls,
        omega_over_epsilon: float,
        gamma2_over_epsilon: float,
        gamma1_over_gamma2: float,
        kt_over_omega: float,
        epsilon: float = 1.0,
    ) -> "ModelParams":
        """Build parameters from the dimensionless ratios used on the wire."""
        omega = omega_over_epsilon * epsilon
        gamma2 = gamma2_over_epsilon * epsilon
        return cls(
            omega=omega,
            epsilon=epsilon,
            gamma1=gamma1_over_gamma2 * gamma2,
            gamma2=gamma2,
            temperature=kt_over_omega * omega,
        )


@dataclass(frozen=True)
class CoupledBasis:
    """Energy eigenbasis of the two-spin Hamiltonian.

    ``states`` is unitary with columns in label order; ``energies`` follows
    the same order.
    """

    labels: tuple[str, ...]
    states: np.ndarray
    energies: np.ndarray


@dataclass(frozen=True)
class ThermalOccupations:
    """Mean boson numbers at the two transition frequencies omega +- epsilon."""

    n_plus: float
    n_minus: float


def coupled_energies(params: ModelParams) -> np.ndarray:
    w, e = params.omega, params.epsilon
    return np.array([2.0 * w, w + e, 0.0, w - e])


def coupled_basis(params: ModelParams) -> CoupledBasis:
    return CoupledBasis(COUPLED_LABELS, COUPLED_STATES.copy(), coupled_energies(params))


def hamiltonian(params: ModelParams) -> np.ndarray:
    """4x4 two-spin Hamiltonian in the product basis."""
    number = 0.5 * (IDENTITY_2 + SIGMA_Z)
    h = params.omega * (np.kron(number, IDENTITY_2) + np.kron(IDENTITY_2, number))
    h = h + params.epsilon * (
        np.kron(SIGMA_PLUS, SIGMA_MINUS) + np.kron(SIGMA_MINUS, SIGMA_PLUS)
    )
    return h


def _bose(frequency: float, temperature: float) -> float:
    if frequency <= 0.0:
        raise ParameterError(
            f"Bose occupation undefined for transition frequency {frequency}"
        )
    if temperature == 0.0:
        return 0.0
    x = frequency / temperature
    if x > 700.0:  # exp would overflow; the occupation is zero to double precision
        return 0.0
    return 1.0 / math.expm1(x)


def thermal_occupations(params: ModelParams) -> ThermalOccupations:
    """Bose-Einstein occupations of the bath modes at omega +- epsilon."""
    return ThermalOccupations(
        n_plus=_bose(params.omega + params.epsilon, params.temperature),
        n_minus=_bose(params.omega - params.epsilon, params.temperature),
    )


def hamiltonian_superoperator(params: ModelParams) -> np.ndarray:
    """16x16 matrix of ``rho -> -i [H, rho]``."""
    h = hamiltonian(params)
    return -1j * (
        sandwich_superoperator(h, IDENTITY_4)
        - sandwich_superoperator(IDENTITY_4, h)
    )


def _lindblad_term(jump: np.ndarray) -> np.ndarray:
    ldl = jump.conj().T @ jump
    return (
        sandwich_superoperator(jump, jump.conj().T)
        - 0.5 * sandwich_superoperator(ldl, IDENTITY_4)
        - 0.5 * sandwich_superoperator(IDENTITY_4, ldl)
    )


def dissipator(params: ModelParams) -> np.ndarray:
    """16x16 thermal dissipator along the triplet ladder.

    Jump operators connect neighbouring triplet states only; the singlet
    never appears, so it is left invariant at any temperature.
    """
    occ = thermal_occupations(params)
    ket = [COUPLED_STATES[:, k] for k in range(4)]

    def jump(src: int, dst: int) -> np.ndarray:
        return np.outer(ket[dst], ket[src].conj())

    terms = (
        (params.gamma2 * (1.0 + occ.n_minus), jump(0, 1)),  # |2> -> |1>
        (params.gamma1 * (1.0 + occ.n_plus), jump(1, 2)),   # |1> -> |0>
        (params.gamma2 * occ.n_minus, jump(1, 0)),          # |1> -> |2>
        (params.gamma1 * occ.n_plus, jump(2, 1)),           # |0> -> |1>
    )
    out = np.zeros((16, 16), dtype=complex)
    for rate, op in terms:
        if rate != 0.0:
            out += rate * _lindblad_term(op)
    return out


def liouvillian(params: ModelParams) -> np.ndarray:
    """Full generator of the dissipative dynamics, Hamiltonian plus dissipator."""
    return hamiltonian_superoperator(params) + dissipator(params)
