"""
Brute-force reference in the full 2^N Hilbert space.

Shares nothing with the package apart from reading edge lists: the XX
Hamiltonian is assembled from Kronecker products, evolved through its own
eigendecomposition, and observables come from explicit partial traces.
Qubit 1 is the most significant tensor factor; |1> is the excited state.
"""

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([-1.0, 1.0]).astype(complex)  # +1 on the excited state


def _site_op(op, site, n):
    out = np.array([[1.0 + 0j]])
    for k in range(1, n + 1):
        out = np.kron(out, op if k == site else np.eye(2))
    return out


def full_hamiltonian(n, edges, field=0.0):
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for i, j, coupling in edges:
        h += 0.5 * coupling * (_site_op(SX, i, n) @ _site_op(SX, j, n) + _site_op(SY, i, n) @ _site_op(SY, j, n))
    for site in range(1, n + 1):
        h += field * _site_op(SZ, site, n)
    return h


def product_state(n, first_qubit):
    """``first_qubit`` (2-vector) on qubit 1, all other spins down."""
    rest = np.zeros(2 ** (n - 1), dtype=complex)
    rest[0] = 1.0
    return np.kron(first_qubit, rest)


def excitation_state(n, amplitudes):
    """Single-excitation state ``sum_n amp_n |n>``."""
    psi = np.zeros(2**n, dtype=complex)
    for site, amp in enumerate(amplitudes, start=1):
        psi[1 << (n - site)] = amp
    return psi


def evolve(h, rho0, gamma, t):
    energies, vecs = np.linalg.eigh(h)
    d = energies[:, None] - energies[None, :]
    coeff = vecs.conj().T @ rho0 @ vecs
    return vecs @ (coeff * np.exp(-1j * t * d - 0.5 * gamma * t * d**2)) @ vecs.conj().T


def steady(h, rho0, tol=1e-9):
    energies, vecs = np.linalg.eigh(h)
    mask = np.abs(energies[:, None] - energies[None, :]) <= tol
    coeff = vecs.conj().T @ rho0 @ vecs
    return vecs @ (coeff * mask) @ vecs.conj().T


def partial_trace(rho, keep, n):
    """Reduced matrix of the qubits in ``keep`` (1-based, kept in the given order)."""
    t = rho.reshape([2] * (2 * n))
    trace_out = [k for k in range(1, n + 1) if k not in keep]
    for count, site in enumerate(sorted(trace_out, reverse=True)):
        m = n - count
        t = np.trace(t, axis1=site - 1, axis2=site - 1 + m)
    kept_sorted = sorted(keep)
    d = len(keep)
    t = t.reshape([2] * (2 * d))
    order = [kept_sorted.index(k) for k in keep]
    t = t.transpose(order + [d + o for o in order])
    return t.reshape(2**d, 2**d)


def wootters(rho):
    yy = np.kron(SY, SY)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


# the six Bloch-axis states form a spherical 3-design, which is exact for
# averaging a fidelity that is quadratic in the input state
AXIS_STATES = [
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([1, 1], dtype=complex) / np.sqrt(2),
    np.array([1, -1], dtype=complex) / np.sqrt(2),
    np.array([1, 1j], dtype=complex) / np.sqrt(2),
    np.array([1, -1j], dtype=complex) / np.sqrt(2),
]


def average_fidelity(h, n, gamma, t, target=None):
    """Bloch-average fidelity of sending qubit 1 to ``target``; ``t=inf`` for the steady limit."""
    target = n if target is None else target
    total = 0.0
    for q in AXIS_STATES:
        psi = product_state(n, q)
        rho0 = np.outer(psi, psi.conj())
        rho = steady(h, rho0) if np.isinf(t) else evolve(h, rho0, gamma, t)
        red = partial_trace(rho, [target], n)
        total += float(np.real(q.conj() @ red @ q))
    return total / len(AXIS_STATES)
