"""
Infinite-time limits.

Every eigenbasis coherence between states of different energy decays as
``exp(-gamma t (E_k - E_k')^2 / 2)``, so for any ``gamma > 0`` the state
converges to the dephased ``sum_E P_E rho(0) P_E``. Coherences between
exactly degenerate levels never oscillate and are kept. This includes
the vacuum (energy 0) against zero-energy single-excitation modes.

The closed-form steady values for the uniform, modulated and multiarm
networks are evaluated alongside, together with `steady_table`, which
puts formula and numeric limit side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channels
from .dynamics import PureInputState, SubspaceState, bell_state, site_state
from .observables import average_fidelity, concurrence_fast, transfer_fidelity
from .spectral import Spectrum, diagonalize

__all__ = [
    "SteadyStateResult",
    "numeric_steady_state",
    "steady_fidelity_uniform",
    "steady_avg_fidelity_uniform",
    "steady_fidelity_modulated",
    "steady_concurrence_endpair",
    "steady_concurrence_distribution",
    "steady_concurrence_multiarm",
    "numeric_steady_fidelity",
    "numeric_steady_avg_fidelity",
    "numeric_steady_endpair",
    "numeric_steady_distribution",
    "numeric_steady_multiarm",
    "steady_table",
    "STEADY_QUANTITIES",
]


@dataclass(frozen=True)
class SteadyStateResult:
    """Limit state and the level pairs whose coherence survives.

    ``degenerate_pairs`` lists 1-based eigen-indices ``(k, k')`` with
    ``k < k'``; index 0 stands for the vacuum of an H0+1 state.
    """

    state: SubspaceState
    degenerate_pairs: list


def _default_tol(energies):
    spread = float(np.ptp(energies)) if energies.size else 0.0
    return 1e-9 * spread if spread > 0 else 1e-12


def _pairs(mask):
    k, kp = np.nonzero(np.triu(mask, 1))
    return [(int(a) + 1, int(b) + 1) for a, b in zip(k, kp)]


def numeric_steady_state(spectrum: Spectrum, initial, tol: float | None = None) -> SteadyStateResult:
    """``t -> infinity`` limit of the eigenbasis solution (any ``gamma > 0``).

    Parameters
    ----------
    spectrum : Spectrum
        Spectrum of the H1 block (field included).
    initial : SubspaceState, (N, N) array, or PureInputState
        H1 density matrix, or a pure zero-or-one excitation input.
    tol : float, optional
        Levels closer than ``tol`` count as degenerate. Defaults to
        ``1e-9 * max|E_k - E_k'|`` (the vacuum counts for H0+1 inputs).
    """
    v = spectrum.eigenvectors
    energies = spectrum.eigenvalues
    if isinstance(initial, PureInputState):
        with_vac = np.concatenate([[0.0], energies])
        tol = _default_tol(with_vac) if tol is None else tol
        if tol <= 0:
            raise ValueError("tol must be positive")
        mask = np.abs(energies[:, None] - energies[None, :]) <= tol
        zero = np.abs(energies) <= tol
        w = v[:, initial.s - 1]
        a = v.T @ (np.outer(w, w) * mask) @ v
        b = v.T @ (w * zero)
        pairs = [(0, int(k) + 1) for k in np.flatnonzero(zero)] + _pairs(mask)
        state = SubspaceState("H01", b.astype(complex), a=a.astype(complex), source=initial, time=math.inf)
        return SteadyStateResult(state, pairs)

    rho0 = initial.density_matrix() if isinstance(initial, SubspaceState) else np.asarray(initial, dtype=complex)
    tol = _default_tol(energies) if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    mask = np.abs(energies[:, None] - energies[None, :]) <= tol
    coeff = v @ rho0 @ v.T
    rho = v.T @ (coeff * mask) @ v
    return SteadyStateResult(SubspaceState("H1", rho, time=math.inf), _pairs(mask))


# -- closed forms ---------------------------------------------------------


def _check_n(n, minimum=2):
    if n < minimum:
        raise ValueError(f"N must be >= {minimum}, got {n}")


def steady_fidelity_uniform(n: int) -> float:
    """``3 / (2 (N + 1))``."""
    _check_n(n)
    return 3.0 / (2.0 * (n + 1))


def steady_avg_fidelity_uniform(n: int) -> float:
    """``(6N + 17) / (12N + 12)`` for odd N, ``(2N + 3) / (4N + 4)`` for even N."""
    _check_n(n)
    if n % 2:
        return (6.0 * n + 17.0) / (12.0 * n + 12.0)
    return (2.0 * n + 3.0) / (4.0 * n + 4.0)


def _log_modulated_product(n):
    # log of 2^(2-2N) prod_{k=2}^N (4 - 2/(k-1))
    return math.fsum(math.log(4.0 - 2.0 / (k - 1)) for k in range(2, n + 1)) - (2 * n - 2) * math.log(2.0)


def steady_fidelity_modulated(n: int) -> float:
    """``2^(2-2N) prod_{k=2}^N (4 - 2/(k-1))``, evaluated in log space."""
    _check_n(n)
    return math.exp(_log_modulated_product(n))


def _half_ratio_product(upper):
    # prod_{n=3}^{upper} (2n - 5) / (2n - 4)
    return math.exp(math.fsum(math.log((2 * m - 5) / (2 * m - 4)) for m in range(3, upper + 1)))


def steady_concurrence_endpair(n: int, c_init: float = 1.0) -> float:
    """``C_init prod_{n=3}^N (2n-5)/(2n-4)``; ``N = 2`` gives ``C_init``."""
    _check_n(n)
    if not 0.0 <= c_init <= 1.0:
        raise ValueError("initial concurrence must lie in [0, 1]")
    return c_init * _half_ratio_product(n)


def steady_concurrence_distribution(n: int) -> float:
    """0 for odd N, ``prod_{n=3}^{(N+4)/2} (2n-5)/(2n-4)`` for even N."""
    _check_n(n)
    if n % 2:
        return 0.0
    return _half_ratio_product((n + 4) // 2)


def steady_concurrence_multiarm(l1: int, l2: int, n_arms: int) -> float:
    """``2^(3-2l) prod_{k=2}^l (4 - 2/(k-1)) / N_A`` with ``l = l1 + l2 + 1``."""
    if l1 < 1 or l2 < 1 or n_arms < 2:
        raise ValueError(f"invalid multiarm sizes l1={l1}, l2={l2}, N_A={n_arms}")
    length = l1 + l2 + 1
    return 2.0 * steady_fidelity_modulated(length) / n_arms


# -- numeric limits -------------------------------------------------------


def numeric_steady_fidelity(spec: channels.ChannelSpec, source: int = 1, target: int | None = None) -> float:
    """Steady excitation fidelity from ``source`` to ``target`` (default: last site)."""
    target = spec.n_sites if target is None else target
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    res = numeric_steady_state(spectrum, site_state(spec.n_sites, source))
    return transfer_fidelity(res.state, target)


def numeric_steady_avg_fidelity(spec: channels.ChannelSpec, source: int = 1, target: int | None = None) -> float:
    target = spec.n_sites if target is None else target
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    res = numeric_steady_state(spectrum, PureInputState(source, math.pi / 2, 0.0))
    return average_fidelity(res.state, target).fidelity


def numeric_steady_endpair(spec: channels.ChannelSpec, a=1 / math.sqrt(2), b=1 / math.sqrt(2)) -> float:
    """Steady concurrence of the last two sites for ``a|01> + b|10>`` on sites 1, 2."""
    n = spec.n_sites
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    res = numeric_steady_state(spectrum, bell_state(n, 1, 2, a, b))
    return concurrence_fast(res.state, n - 1, n)


def numeric_steady_distribution(spec: channels.ChannelSpec) -> float:
    """Steady concurrence between an uncoupled qubit and the far end.

    The uncoupled qubit is appended as site N+1 and starts in a Bell pair
    with site 1.
    """
    n = spec.n_sites
    extended = channels.attach_uncoupled_node(spec)
    spectrum = diagonalize(channels.build_hamiltonian(extended))
    res = numeric_steady_state(spectrum, bell_state(n + 1, n + 1, 1))
    return concurrence_fast(res.state, n + 1, n)


def numeric_steady_multiarm(spec: channels.ChannelSpec) -> float:
    """Steady concurrence between the ends of the first two output arms."""
    ends = channels.multiarm_output_ends(spec)
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    res = numeric_steady_state(spectrum, site_state(spec.n_sites, 1))
    return concurrence_fast(res.state, ends[0], ends[1])


STEADY_QUANTITIES = {
    # name: (family, closed form, numeric limit)
    "uniform-F": ("uniform", steady_fidelity_uniform, lambda n: numeric_steady_fidelity(channels.uniform_chain(n))),
    "uniform-Fbar": (
        "uniform",
        steady_avg_fidelity_uniform,
        lambda n: numeric_steady_avg_fidelity(channels.uniform_chain(n)),
    ),
    "modulated-F": (
        "modulated",
        steady_fidelity_modulated,
        lambda n: numeric_steady_fidelity(channels.modulated_chain(n)),
    ),
    "endpair": ("modulated", steady_concurrence_endpair, lambda n: numeric_steady_endpair(channels.modulated_chain(n))),
    "distribution": (
        "modulated",
        steady_concurrence_distribution,
        lambda n: numeric_steady_distribution(channels.modulated_chain(n)),
    ),
}


def steady_table(quantity: str, sizes) -> list[tuple[int, float, float, float]]:
    """Rows ``(N, formula, numeric, |formula - numeric|)``."""
    if quantity not in STEADY_QUANTITIES:
        raise KeyError(f"unknown steady quantity {quantity!r}; choose from {sorted(STEADY_QUANTITIES)}")
    _, formula, numeric = STEADY_QUANTITIES[quantity]
    rows = []
    for n in sizes:
        f, x = formula(n), numeric(n)
        rows.append((int(n), f, x, abs(f - x)))
    return rows
