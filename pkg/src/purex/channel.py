"""The quantum channel connecting two successive measurements.

Numerically the channel is ``exp(L * tau)`` for the full Lindblad generator
L; at zero temperature it also has a closed operator-sum form with four
Kraus operators acting along the triplet ladder, which serves as an
independent oracle for the numerical propagator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import DimensionError, ParameterError, RegimeError
from .linalg import dagger, expm, frobenius_norm
from .model import COUPLED_STATES, ModelParams, coupled_energies, liouvillian

if TYPE_CHECKING:
    from .extraction import MeasurementSpec

# Below this relative rate difference the gamma1 != gamma2 expressions are
# numerically unusable; switch to their analytic limit.
_EQUAL_RATE_RTOL = 1e-8


@dataclass(frozen=True)
class KrausSet:
    """Operator-sum representation of a channel over one interval tau."""

    operators: tuple[np.ndarray, ...]
    tau: float

    def completeness_defect(self) -> float:
        """Frobenius distance of sum_k T_k^dag T_k from the identity."""
        dim = self.operators[0].shape[0]
        acc = np.zeros((dim, dim), dtype=complex)
        for op in self.operators:
            acc += dagger(op) @ op
        return frobenius_norm(acc - np.eye(dim))


def propagator(params: ModelParams, tau: float) -> np.ndarray:
    """16x16 superoperator ``exp(L * tau)`` of the inter-measurement dynamics."""
    if tau < 0.0:
        raise ParameterError(f"propagation time must be nonnegative, got {tau}")
    return expm(liouvillian(params), tau)


def _cascade_coefficients(gamma1: float, gamma2: float, tau: float) -> tuple[float, float]:
    """Squared amplitudes for one- and two-step decay out of the top state.

    Returns (c2, c3) with c2 the |2>->|1> transfer weight and c3 the
    accumulated |2>->|0> weight.  The generic expressions have a removable
    singularity at gamma1 == gamma2; close to it the analytic limit
    (gamma*tau*exp(-gamma*tau), 1 - exp(-gamma*tau)*(1+gamma*tau)) is used.
    """
    gmax = max(gamma1, gamma2)
    if gmax == 0.0 or abs(gamma1 - gamma2) < _EQUAL_RATE_RTOL * gmax:
        g = 0.5 * (gamma1 + gamma2)
        c2 = g * tau * math.exp(-g * tau)
        c3 = 1.0 - math.exp(-g * tau) * (1.0 + g * tau)
    else:
        dg = gamma1 - gamma2
        c2 = gamma2 * (math.exp(-gamma2 * tau) - math.exp(-gamma1 * tau)) / dg
        c3 = 1.0 + (gamma2 * math.exp(-gamma1 * tau) - gamma1 * math.exp(-gamma2 * tau)) / dg
    # Round-off can push the weights marginally negative.
    return max(c2, 0.0), max(c3, 0.0)


def zero_temperature_kraus(params: ModelParams, tau: float) -> KrausSet:
    """The four Kraus operators of the zero-temperature channel.

    T_0 damps and rotates the triplet populations in place, T_1 and T_2
    transfer population down one rung (|1>->|0| and |2>->|1>), and T_3
    carries the two-step cascade |2>->|0>.  All four are returned in the
    product basis.
    """
    if tau < 0.0:
        raise ParameterError(f"propagation time must be nonnegative, got {tau}")
    if params.temperature != 0.0:
        raise RegimeError(
            "closed-form Kraus operators exist only at zero temperature; "
            f"got temperature={params.temperature}"
        )
    g1, g2 = params.gamma1, params.gamma2
    energies = coupled_energies(params)
    ket = [COUPLED_STATES[:, k] for k in range(4)]  # |2>, |1>, |0>, |s>

    survival = np.array(
        [
            math.exp(-0.5 * g2 * tau),  # |2|
            math.exp(-0.5 * g1 * tau),  # |1|
            1.0,                        # |0|
            1.0,                        # |s|
        ]
    )
    t0 = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        t0 += survival[k] * np.exp(-1j * energies[k] * tau) * np.outer(ket[k], ket[k].conj())

    c2, c3 = _cascade_coefficients(g1, g2, tau)
    t1 = math.sqrt(max(1.0 - math.exp(-g1 * tau), 0.0)) * np.outer(ket[2], ket[1].conj())
    t2 = math.sqrt(c2) * np.outer(ket[1], ket[0].conj())
    t3 = math.sqrt(c3) * np.outer(ket[2], ket[0].conj())
    return KrausSet(operators=(t0, t1, t2, t3), tau=tau)


def kraus_superoperator(kraus: KrausSet) -> np.ndarray:
    """Assemble sum_k T_k rho T_k^dag as a matrix on row-major vectorizations."""
    ops = kraus.operators
    dim = ops[0].shape[0]
    for op in ops:
        if op.shape != (dim, dim):
            raise DimensionError("Kraus operators must share one square shape")
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    for op in ops:
        out += np.kron(op, op.conj())
    return out


def contract_kraus(kraus: KrausSet, phi: "MeasurementSpec") -> list[np.ndarray]:
    """Project each Kraus operator onto the measured ancilla state.

    Returns the 2x2 operators V_k = <phi|T_k|phi> acting on S alone; a pure
    state survives the repeated measurements exactly when it is a common
    eigenstate of all of them.
    """
    ancilla = phi.ancilla_state()
    out = []
    for op in kraus.operators:
        blocks = op.reshape(2, 2, 2, 2)  # indices (S out, X out, S in, X in)
        out.append(np.einsum("x,axby,y->ab", ancilla.conj(), blocks, ancilla))
    return out


def choi_matrix(superop) -> np.ndarray:
    """Reshuffle a row-major superoperator into its Choi matrix."""
    m = np.asarray(superop, dtype=complex)
    d = math.isqrt(m.shape[0])
    if m.ndim != 2 or m.shape[0] != m.shape[1] or d * d != m.shape[0]:
        raise DimensionError(f"not a superoperator shape: {m.shape}")
    return m.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)


def choi_min_eigenvalue(superop) -> float:
    """Smallest eigenvalue of the (hermitized) Choi matrix.

    Nonnegative up to round-off exactly when the map is completely positive.
    """
    choi = choi_matrix(superop)
    choi = 0.5 * (choi + choi.conj().T)
    return float(np.linalg.eigvalsh(choi)[0])


def trace_preservation_defect(superop) -> float:
    """Largest entrywise deviation of the trace functional from invariance."""
    m = np.asarray(superop, dtype=complex)
    d = math.isqrt(m.shape[0])
    tr_row = np.eye(d, dtype=complex).reshape(-1)
    return float(np.max(np.abs(tr_row @ m - tr_row)))
