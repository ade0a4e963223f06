"""
Reduced density matrices, transfer fidelities and concurrence.

Single-qubit matrices use the basis {|0>, |1>} and two-qubit matrices the
standard basis {|00>, |01>, |10>, |11>} with qubit i first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import PureInputState, SubspaceState
from .errors import ContractViolation

__all__ = [
    "FidelityReport",
    "single_qubit_rdm",
    "two_qubit_rdm",
    "transfer_fidelity",
    "fidelity_bloch",
    "average_fidelity",
    "average_fidelity_from",
    "concurrence",
    "concurrence_fast",
    "purity",
]

_SIGMA_YY = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))
_PSD_TOL = 1e-10


@dataclass(frozen=True)
class FidelityReport:
    fidelity: float
    alpha: float = 0.0


def _check_site(state: SubspaceState, i: int):
    if not 1 <= i <= state.n_sites:
        raise IndexError(f"site {i} out of range 1..{state.n_sites}")


def single_qubit_rdm(state: SubspaceState, i: int) -> np.ndarray:
    """2x2 reduced state of qubit ``i``."""
    _check_site(state, i)
    if state.kind == "H1":
        p = state.b[i - 1, i - 1].real
        return np.diag([1.0 - p, p]).astype(complex)
    src = state.source
    s, c = math.sin(src.theta / 2), math.cos(src.theta / 2)
    p = state.a[i - 1, i - 1].real * s * s
    coh = state.b[i - 1] * np.exp(1j * src.phi) * s * c
    return np.array([[1.0 - p, np.conj(coh)], [coh, p]], dtype=complex)


def two_qubit_rdm(state: SubspaceState, i: int, j: int) -> np.ndarray:
    """4x4 reduced state of qubits (i, j) for an H1 state."""
    if state.kind != "H1":
        raise ValueError("two_qubit_rdm is defined for H1 states")
    if i == j:
        raise ValueError("two_qubit_rdm needs two distinct sites")
    _check_site(state, i)
    _check_site(state, j)
    b = state.b
    bii, bjj = b[i - 1, i - 1].real, b[j - 1, j - 1].real
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0 - bii - bjj
    rho[1, 1] = bjj
    rho[1, 2] = b[j - 1, i - 1]
    rho[2, 1] = b[i - 1, j - 1]
    rho[2, 2] = bii
    return rho


def transfer_fidelity(state: SubspaceState, target: int) -> float:
    """Excitation fidelity: the population of ``target``."""
    _check_site(state, target)
    value = state.b[target - 1, target - 1] if state.kind == "H1" else state.a[target - 1, target - 1]
    if abs(value.imag) > 1e-12:
        raise ContractViolation(f"population has imaginary part {value.imag:.2e}")
    return float(value.real)


def _alpha(b):
    # angle in (-pi, pi]
    a = float(np.angle(b))
    return math.pi if a == -math.pi else a


def fidelity_bloch(state: SubspaceState, i: int, source: PureInputState | None = None) -> FidelityReport:
    """Fidelity of qubit ``i`` with the pure input state."""
    _check_site(state, i)
    src = source or state.source
    s2 = math.sin(src.theta / 2) ** 2
    c2 = math.cos(src.theta / 2) ** 2
    a_ii = state.a[i - 1, i - 1].real
    b_i = state.b[i - 1]
    alpha = _alpha(b_i)
    value = c2 * (1.0 - a_ii * s2 + 2.0 * abs(b_i) * s2 * math.cos(alpha)) + a_ii * s2 * s2
    return FidelityReport(value, alpha)


def average_fidelity_from(a_ii: float, b_i: complex) -> FidelityReport:
    """Bloch-sphere average ``|b| cos(alpha)/3 + a/6 + 1/2``."""
    alpha = _alpha(b_i)
    return FidelityReport(abs(b_i) * math.cos(alpha) / 3.0 + a_ii / 6.0 + 0.5, alpha)


def average_fidelity(state: SubspaceState, i: int) -> FidelityReport:
    """Average fidelity of qubit ``i`` over all pure inputs."""
    _check_site(state, i)
    return average_fidelity_from(float(state.a[i - 1, i - 1].real), complex(state.b[i - 1]))


def concurrence(rdm: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    The ``lambda_i`` (square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)``) are obtained as the singular values of
    ``P^T (sy x sy) P`` with ``rho = P P^+``, which keeps small ``lambda_i``
    accurate.
    """
    rho = np.asarray(rdm, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > _PSD_TOL:
        raise ContractViolation("density matrix is not Hermitian")
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if evals.min() < -_PSD_TOL:
        raise ContractViolation(f"density matrix has eigenvalue {evals.min():.2e} < 0")
    root = evecs * np.sqrt(np.clip(evals, 0.0, None))
    lam = np.linalg.svd(root.T @ _SIGMA_YY @ root, compute_uv=False)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_fast(state: SubspaceState, i: int, j: int) -> float:
    """Concurrence of qubits (i, j) of an H1 state, ``2 |b_ij|``."""
    _check_site(state, i)
    _check_site(state, j)
    return 2.0 * float(abs(state.b[i - 1, j - 1]))


def purity(state: SubspaceState) -> float:
    rho = state.density_matrix()
    return float(np.real(np.trace(rho @ rho)))
