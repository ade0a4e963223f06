"""
Intrinsic-decoherence dynamics in the H1 and H0+1 sectors.

The master equation

    d rho / dt = -i [H, rho] - gamma/2 [H, [H, rho]]

is diagonal in the energy eigenbasis: the coherence between eigenstates
k and k' picks up ``exp(-i t d - gamma t d^2 / 2)`` with ``d = E_k - E_k'``.
`evolve_h1` and `evolve_h01` use that closed form. Two independent
routes are provided to check it:

- `kraus_oracle`: the operator-sum solution with Kraus operators
  ``M_l = (gamma t)^(l/2) H^l exp(-iHt) exp(-gamma t H^2 / 2) / sqrt(l!)``,
  built from matrix exponentials and powers (no eigen-decomposition).
- `master_equation_oracle`: a fixed-step classical RK4 integration of the
  master equation itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm
from scipy.stats import poisson

from .errors import ContractViolation, InstabilityError, TruncationError
from .spectral import Spectrum

__all__ = [
    "PureInputState",
    "SubspaceState",
    "site_state",
    "pure_state",
    "bell_state",
    "evolve_h1",
    "evolve_h01",
    "population_series",
    "coherence_series",
    "kraus_oracle",
    "KrausResult",
    "master_equation_oracle",
    "site_amplitude",
    "time_grid",
]


@dataclass(frozen=True)
class PureInputState:
    """``cos(theta/2)|vac> + exp(i phi) sin(theta/2)|s>``."""

    s: int
    theta: float = math.pi
    phi: float = 0.0

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"input site must be >= 1, got {self.s}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    @property
    def vacuum_weight(self) -> float:
        return math.cos(self.theta / 2) ** 2

    @property
    def excited_weight(self) -> float:
        return math.sin(self.theta / 2) ** 2

    def vector(self, n_sites: int) -> np.ndarray:
        """State vector in the H0+1 basis (vacuum at index 0)."""
        if self.s > n_sites:
            raise ValueError(f"input site {self.s} outside 1..{n_sites}")
        psi = np.zeros(n_sites + 1, dtype=complex)
        psi[0] = math.cos(self.theta / 2)
        psi[self.s] = np.exp(1j * self.phi) * math.sin(self.theta / 2)
        return psi


@dataclass(frozen=True)
class SubspaceState:
    """Density-matrix coefficients in one excitation sector.

    For ``kind == "H1"`` the matrix ``b`` holds ``b_nm`` (``rho = sum b_nm |n><m|``).
    For ``kind == "H01"`` ``a`` holds ``a_nm``, ``b`` the vacuum coherences
    ``b_n``, and ``source`` the input state that fixes the weights
    ``cos^2(theta/2)``, ``sin^2(theta/2)`` and the phase ``exp(i phi)``.
    """

    kind: str
    b: np.ndarray
    a: np.ndarray | None = None
    source: PureInputState | None = None
    time: float = 0.0
    gamma: float = 0.0

    @property
    def n_sites(self) -> int:
        return self.b.shape[0]

    def population(self, site: int) -> float:
        """Probability that ``site`` is excited."""
        if not 1 <= site <= self.n_sites:
            raise IndexError(f"site {site} out of range 1..{self.n_sites}")
        if self.kind == "H1":
            return float(self.b[site - 1, site - 1].real)
        return float(self.a[site - 1, site - 1].real) * self.source.excited_weight

    def density_matrix(self) -> np.ndarray:
        """Full matrix in the sector basis (H0+1: vacuum first)."""
        if self.kind == "H1":
            return np.array(self.b, dtype=complex)
        src = self.source
        n = self.n_sites
        s, c = math.sin(src.theta / 2), math.cos(src.theta / 2)
        rho = np.zeros((n + 1, n + 1), dtype=complex)
        rho[0, 0] = c * c
        rho[1:, 1:] = s * s * self.a
        rho[1:, 0] = np.exp(1j * src.phi) * s * c * self.b
        rho[0, 1:] = rho[1:, 0].conj()
        return rho

    def check(self, tol: float = 1e-10) -> None:
        """Raise `ContractViolation` unless Hermitian, unit-trace and PSD."""
        rho = self.density_matrix()
        if np.abs(rho - rho.conj().T).max() > tol:
            raise ContractViolation("state is not Hermitian")
        if abs(np.trace(rho) - 1.0) > tol:
            raise ContractViolation(f"trace {np.trace(rho).real:.3e} differs from 1")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
            raise ContractViolation("state is not positive semidefinite")


def site_state(n_sites: int, site: int) -> SubspaceState:
    """``|site><site|`` in H1."""
    if not 1 <= site <= n_sites:
        raise IndexError(f"site {site} out of range 1..{n_sites}")
    rho = np.zeros((n_sites, n_sites), dtype=complex)
    rho[site - 1, site - 1] = 1.0
    return SubspaceState("H1", rho)


def pure_state(amplitudes) -> SubspaceState:
    """H1 state ``|psi><psi|`` from site amplitudes (normalised here)."""
    psi = np.asarray(amplitudes, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return SubspaceState("H1", np.outer(psi, psi.conj()))


def bell_state(n_sites: int, i: int, j: int, a=1 / math.sqrt(2), b=1 / math.sqrt(2)) -> SubspaceState:
    """``a|01> + b|10>`` on qubits (i, j), all other spins down.

    ``|01>`` excites site j and ``|10>`` excites site i.
    """
    psi = np.zeros(n_sites, dtype=complex)
    psi[j - 1] = a
    psi[i - 1] = b
    return pure_state(psi)


def _as_matrix(rho0) -> np.ndarray:
    if isinstance(rho0, SubspaceState):
        return rho0.density_matrix()
    return np.asarray(rho0, dtype=complex)


def _check_rate_time(gamma, t):
    if gamma < 0:
        raise ContractViolation(f"gamma must be non-negative, got {gamma}")
    if np.any(np.asarray(t) < 0):
        raise ContractViolation("time must be non-negative")


def _damping(energy_diff, gamma, t):
    return np.exp(-1j * t * energy_diff - 0.5 * gamma * t * energy_diff**2)


def evolve_h1(spectrum: Spectrum, rho0, gamma: float, t: float) -> SubspaceState:
    """Evolve an H1 density matrix to time ``t`` in the eigenbasis."""
    _check_rate_time(gamma, t)
    rho0 = _as_matrix(rho0)
    v = spectrum.eigenvectors
    energies = spectrum.eigenvalues
    coeff = v @ rho0 @ v.T
    diff = energies[:, None] - energies[None, :]
    rho_t = v.T @ (coeff * _damping(diff, gamma, t)) @ v
    return SubspaceState("H1", rho_t, time=float(t), gamma=float(gamma))


def evolve_h01(spectrum: Spectrum, source: PureInputState, gamma: float, t: float) -> SubspaceState:
    """Evolve a pure zero-or-one excitation input to time ``t``.

    Any field must already be folded into ``spectrum`` (the vacuum energy is
    fixed at 0).
    """
    _check_rate_time(gamma, t)
    v = spectrum.eigenvectors
    energies = spectrum.eigenvalues
    if source.s > v.shape[1]:
        raise ValueError(f"input site {source.s} outside 1..{v.shape[1]}")
    w = v[:, source.s - 1]
    diff = energies[:, None] - energies[None, :]
    a = v.T @ (np.outer(w, w) * _damping(diff, gamma, t)) @ v
    b = v.T @ (w * _damping(energies, gamma, t))
    return SubspaceState("H01", b, a=a, source=source, time=float(t), gamma=float(gamma))


def _chunks(times, width):
    step = max(1, int(2_000_000 // max(width, 1)))
    for start in range(0, len(times), step):
        yield times[start : start + step]


def population_series(spectrum: Spectrum, source: int, target: int, gamma: float, times) -> np.ndarray:
    """Excitation probability of ``target`` for the input ``|source>``.

    Equivalent to ``evolve_h1(...).population(target)`` on every time but
    only the needed matrix element is formed.
    """
    times = np.asarray(times, dtype=float)
    _check_rate_time(gamma, times)
    v = spectrum.eigenvectors
    u = v[:, source - 1] * v[:, target - 1]
    weights = np.outer(u, u)
    diff = spectrum.eigenvalues[:, None] - spectrum.eigenvalues[None, :]
    # u_k u_k' is symmetric and diff antisymmetric: the imaginary parts cancel
    out = []
    for block in _chunks(times, diff.size):
        tt = block[:, None, None]
        vals = weights * np.exp(-0.5 * gamma * tt * diff**2) * np.cos(tt * diff)
        out.append(vals.sum(axis=(1, 2)))
    return np.concatenate(out) if out else np.zeros(0)


def coherence_series(spectrum: Spectrum, source: int, target: int, gamma: float, times) -> np.ndarray:
    """Vacuum coherence ``b_target(t)`` for an input on ``source``."""
    times = np.asarray(times, dtype=float)
    _check_rate_time(gamma, times)
    v = spectrum.eigenvectors
    u = v[:, source - 1] * v[:, target - 1]
    energies = spectrum.eigenvalues
    out = []
    for block in _chunks(times, energies.size):
        out.append((u * _damping(energies, gamma, block[:, None])).sum(axis=1))
    return np.concatenate(out) if out else np.zeros(0, dtype=complex)


class KrausResult(NamedTuple):
    rho: np.ndarray
    completeness_defect: float
    l_max: int
    n_slices: int


def _required_terms(weight, tol, cap):
    # Poisson(weight) tail below tol bounds the completeness defect
    l_needed = int(poisson.isf(tol, weight)) + 1 if weight > 0 else 1
    return min(max(l_needed, 1), 10 * cap)


def _kraus_ops(h, gamma, dt, l_max, slice_tol, cap):
    d = h.shape[0]
    u = expm(-1j * h * dt - 0.5 * gamma * dt * (h @ h))
    if gamma == 0:
        ops = [u]
    else:
        step = math.sqrt(gamma * dt) * h
        ops = [u]
        total = u.conj().T @ u
        l = 0
        while True:
            if l_max is not None:
                if l >= l_max:
                    break
            elif np.abs(total - np.eye(d)).max() <= slice_tol or l >= cap:
                break
            l += 1
            m = step @ ops[-1] / math.sqrt(l)
            ops.append(m)
            total = total + m.conj().T @ m
    stack = np.array(ops)
    comp = np.einsum("lji,ljk->ik", stack.conj(), stack)
    return stack, float(np.abs(comp - np.eye(d)).max())


def kraus_oracle(
    hamiltonian,
    rho0,
    gamma: float,
    t,
    l_max: int | None = None,
    *,
    max_slice_weight: float = 1.0,
    defect_tol: float = 1e-10,
    cap: int = 200,
) -> KrausResult:
    """Truncated operator-sum evolution.

    The exact map is a semigroup, so each interval is cut into slices with
    ``gamma * dt * ||H||_F^2 <= max_slice_weight`` and the Kraus sum is
    applied slice by slice; this keeps the powers ``H^l`` well conditioned.
    Pass ``max_slice_weight=np.inf`` to apply the sum over the whole interval
    in one go.

    Parameters
    ----------
    hamiltonian : (d, d) array
    rho0 : (d, d) array or SubspaceState
    gamma : float
    t : float or 1-D array of non-decreasing times
    l_max : int, optional
        Highest Kraus index kept. Chosen adaptively from the completeness
        defect when omitted (at most ``cap`` terms).

    Returns
    -------
    KrausResult
        ``rho`` has shape (d, d) for scalar ``t`` and (len(t), d, d) otherwise;
        ``completeness_defect`` bounds ``||sum M_l^+ M_l - 1||`` accumulated
        over all slices.

    Raises
    ------
    TruncationError
        If the accumulated defect exceeds ``defect_tol``.
    """
    h = np.asarray(hamiltonian, dtype=float)
    rho = _as_matrix(rho0).astype(complex)
    _check_rate_time(gamma, t)
    scalar = np.ndim(t) == 0
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be non-decreasing")
    norm_sq = float(np.sum(h * h))
    segments = np.diff(np.concatenate([[0.0], times]))
    slices = []
    for seg in segments:
        if seg == 0 or gamma == 0 or not math.isfinite(max_slice_weight):
            slices.append(1)
        else:
            slices.append(max(1, math.ceil(gamma * seg * norm_sq / max_slice_weight)))
    total_slices = sum(s for s, seg in zip(slices, segments) if seg > 0) or 1
    slice_tol = max(defect_tol / (10 * total_slices), 1e-15)

    cache = {}
    defect = 0.0
    used_l = 0
    out = []
    for seg, n_slices in zip(segments, slices):
        if seg > 0:
            dt = seg / n_slices
            if dt not in cache:
                cache[dt] = _kraus_ops(h, gamma, dt, l_max, slice_tol, cap)
            ops, slice_defect = cache[dt]
            used_l = max(used_l, ops.shape[0] - 1)
            defect += n_slices * slice_defect
            if defect > defect_tol:
                weight = gamma * dt * norm_sq
                need = _required_terms(weight, defect_tol / (10 * n_slices), cap)
                raise TruncationError(
                    f"Kraus completeness defect {defect:.2e} exceeds {defect_tol:.0e}; "
                    f"about l_max = {need} terms per slice are required",
                    required_l_max=need,
                )
            ops_h = ops.conj().transpose(0, 2, 1)
            for _ in range(n_slices):
                rho = (ops @ rho @ ops_h).sum(axis=0)
        out.append(rho.copy())
    stacked = out[0] if scalar else np.array(out)
    return KrausResult(stacked, defect, used_l, total_slices)


def _commutator_superop(h):
    d = h.shape[0]
    eye = np.eye(d)
    # row-major vec: vec(A X) = (A kron I) vec X, vec(X A) = (I kron A^T) vec X
    return np.kron(h, eye) - np.kron(eye, h.T)


def _rk4_step_operator(generator, dt):
    # one classical RK4 step of y' = L y is y <- (1 + z + z^2/2 + z^3/6 + z^4/24) y, z = dt L
    z = dt * generator
    z2 = z @ z
    eye = np.eye(z.shape[0])
    return eye + z + z2 / 2 + z2 @ z / 6 + z2 @ z2 / 24


def master_equation_oracle(
    hamiltonian,
    rho0,
    gamma: float,
    t,
    dt: float | None = None,
    *,
    trace_tol: float = 1e-8,
):
    """Fixed-step RK4 solution of the intrinsic-decoherence master equation.

    ``dt`` defaults to ``1e-3 / max(1, ||H||_2)``; each interval between
    requested times is split into equal steps no longer than ``dt``.
    Returns an array shaped like ``rho0`` for scalar ``t`` and stacked along
    a leading axis otherwise.

    Raises
    ------
    InstabilityError
        If the trace drifts by more than ``trace_tol`` or the Frobenius norm
        grows (the exact flow never increases ``tr rho^2``).
    """
    h = np.asarray(hamiltonian, dtype=float)
    rho = _as_matrix(rho0).astype(complex)
    _check_rate_time(gamma, t)
    d = h.shape[0]
    if dt is None:
        dt = 1e-3 / max(1.0, float(np.linalg.norm(h, 2)))
    if dt <= 0:
        raise ValueError("dt must be positive")
    scalar = np.ndim(t) == 0
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be non-decreasing")
    comm = _commutator_superop(h)
    generator = -1j * comm - 0.5 * gamma * (comm @ comm)
    vec = rho.reshape(-1)
    trace0 = np.trace(rho)
    norm0 = np.linalg.norm(vec)
    diag_idx = np.arange(d) * (d + 1)
    cache = {}
    out = []
    elapsed = 0.0
    for target in times:
        seg = target - elapsed
        if seg > 0:
            n_steps = max(1, math.ceil(seg / dt - 1e-9))
            step = seg / n_steps
            if step not in cache:
                cache[step] = _rk4_step_operator(generator, step)
            prop = cache[step]
            for i in range(n_steps):
                vec = prop @ vec
                if i % 1000 == 999 and not np.linalg.norm(vec) <= norm0 * (1 + 1e-8):
                    raise InstabilityError(f"RK4 step {step:.2e} is unstable: norm grew")
            elapsed = target
        drift = abs(vec[diag_idx].sum() - trace0)
        if not drift <= trace_tol:
            raise InstabilityError(f"trace drift {drift:.2e} exceeds {trace_tol:.0e}")
        if not np.linalg.norm(vec) <= norm0 * (1 + 1e-8):
            raise InstabilityError("RK4 integration is unstable: norm grew")
        out.append(vec.reshape(d, d).copy())
    return out[0] if scalar else np.array(out)


def site_amplitude(state: SubspaceState, site: int) -> float:
    """``c_i = sqrt(<i| rho_i |i>)``, the excitation amplitude of ``site``."""
    return math.sqrt(max(state.population(site), 0.0))


def time_grid(t_start: float, t_end: float, n_points: int) -> np.ndarray:
    """Inclusive uniform grid."""
    if n_points < 2:
        raise ValueError("a time grid needs at least 2 points")
    if not t_end > t_start >= 0:
        raise ValueError("time grid requires t_end > t_start >= 0")
    return np.linspace(t_start, t_end, n_points)
