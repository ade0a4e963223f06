"""
Eigen-decomposition of single-excitation Hamiltonians.

`diagonalize` is the production path (LAPACK ``syevd`` via numpy). The two
closed-form spectra, uniform and modulated chains, are kept as independent
cross-checks of it.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InvalidSizeError, NotFoundError

__all__ = [
    "Spectrum",
    "diagonalize",
    "analytic_uniform_spectrum",
    "analytic_modulated_spectrum",
    "eigenvector_population",
    "smallest_positive_eigenvalue",
    "MODULATED_RECURSION_MAX_N",
]

MODULATED_RECURSION_MAX_N = 30


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and real eigenvectors.

    ``eigenvectors[k]`` holds the coefficients ``c_{k,n}`` of the k-th
    eigenvector on sites n = 1..N (row k, column n-1).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    def check(self, hamiltonian: np.ndarray | None = None, tol: float = 1e-10) -> None:
        """Raise `ContractViolation` if orthonormality or the residual bound fails."""
        v = self.eigenvectors
        if np.abs(v @ v.T - np.eye(self.size)).max() > tol:
            raise ContractViolation("eigenvectors are not orthonormal")
        if np.any(np.diff(self.eigenvalues) < 0):
            raise ContractViolation("eigenvalues are not ascending")
        if hamiltonian is not None:
            scale = max(np.abs(self.eigenvalues).max(), 1.0)
            resid = hamiltonian @ v.T - v.T * self.eigenvalues
            if np.abs(resid).max() > tol * scale:
                raise ContractViolation("eigen-residual exceeds tolerance")

    def to_csv(self) -> str:
        """CSV table ``k, E_k, c_k_1 .. c_k_N``; k is 1-based."""
        from .io import format_number

        n = self.eigenvectors.shape[1]
        out = io.StringIO()
        out.write(",".join(["k", "E_k"] + [f"c_k_{m}" for m in range(1, n + 1)]) + "\n")
        for k, (energy, vec) in enumerate(zip(self.eigenvalues, self.eigenvectors), start=1):
            row = [str(k), format_number(energy)] + [format_number(x) for x in vec]
            out.write(",".join(row) + "\n")
        return out.getvalue()


def _normalize_signs(vectors: np.ndarray) -> np.ndarray:
    # first entry whose magnitude ties the maximum is made positive
    out = vectors.copy()
    for k, vec in enumerate(out):
        mags = np.abs(vec)
        lead = int(np.flatnonzero(mags >= mags.max() - 1e-10)[0])
        if vec[lead] < 0:
            out[k] = -vec
    return out


def _canonical(eigenvalues, vectors, degeneracy_tol):
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = _normalize_signs(vectors[order])
    # ties: order degenerate clusters lexicographically by (sign-normalised) vector
    start = 0
    n = eigenvalues.shape[0]
    while start < n:
        stop = start + 1
        while stop < n and eigenvalues[stop] - eigenvalues[stop - 1] <= degeneracy_tol:
            stop += 1
        if stop - start > 1:
            block = vectors[start:stop]
            keys = [tuple(np.round(-row, 12)) for row in block]
            idx = sorted(range(stop - start), key=lambda i: keys[i])
            vectors[start:stop] = block[idx]
        start = stop
    return eigenvalues, vectors


def diagonalize(hamiltonian: np.ndarray) -> Spectrum:
    """Diagonalize a real symmetric single-excitation Hamiltonian.

    Raises
    ------
    ContractViolation
        If the matrix is not square, real, or exactly symmetric.
    """
    h = np.asarray(hamiltonian)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ContractViolation(f"Hamiltonian must be square, got shape {h.shape}")
    if np.iscomplexobj(h):
        raise ContractViolation("Hamiltonian must be real")
    if np.abs(h - h.T).max(initial=0.0) > 0:
        raise ContractViolation("Hamiltonian is not symmetric")
    evals, evecs = np.linalg.eigh(h)
    scale = max(np.abs(evals).max(initial=0.0), 1.0)
    evals, vecs = _canonical(evals, evecs.T, 1e-12 * scale)
    spec = Spectrum(evals, vecs)
    spec.check(h)
    return spec


def analytic_uniform_spectrum(n_sites: int, J: float = 1.0) -> Spectrum:
    """Closed-form spectrum of the uniform chain.

    ``E_k = 2 J cos(pi k / (N+1))`` and
    ``c_{k,n} = sqrt(2/(N+1)) sin(pi k n / (N+1))``, re-sorted ascending.
    """
    if n_sites < 2:
        raise InvalidSizeError(f"uniform chain needs N >= 2, got {n_sites}")
    k = np.arange(1, n_sites + 1)
    n = np.arange(1, n_sites + 1)
    energies = 2.0 * J * np.cos(np.pi * k / (n_sites + 1))
    vecs = math.sqrt(2.0 / (n_sites + 1)) * np.sin(np.pi * np.outer(k, n) / (n_sites + 1))
    evals, vecs = _canonical(energies, vecs, 0.0)
    return Spectrum(evals, vecs)


def analytic_modulated_spectrum(n_sites: int, lam: float = 1.0) -> Spectrum:
    """Closed-form spectrum of the modulated chain via the three-term recursion.

    Eigenvalues are ``(2k - N - 1) lam``. Each eigenvector is built from
    ``c_{k,1}`` upwards with

        c_{k,n} = (e_k c_{k,n-1} - sqrt((n-2)(N-n+2)) c_{k,n-2}) / sqrt((n-1)(N-n+1))

    where ``e_k = E_k / lam`` (the doubled S_x eigenvalue), then normalised.
    The forward recursion loses accuracy quickly, so sizes above
    `MODULATED_RECURSION_MAX_N` raise `InvalidSizeError`.
    """
    if n_sites < 2:
        raise InvalidSizeError(f"modulated chain needs N >= 2, got {n_sites}")
    if n_sites > MODULATED_RECURSION_MAX_N:
        raise InvalidSizeError(
            f"recursion is unstable beyond N = {MODULATED_RECURSION_MAX_N}; use diagonalize"
        )
    N = n_sites
    e = np.array([2 * k - N - 1 for k in range(1, N + 1)], dtype=float)
    vecs = np.zeros((N, N))
    vecs[:, 0] = 2.0 ** (-(N - 1) / 2)
    for n in range(2, N + 1):
        prev2 = vecs[:, n - 3] * math.sqrt((n - 2) * (N - n + 2)) if n > 2 else 0.0
        vecs[:, n - 1] = (e * vecs[:, n - 2] - prev2) / math.sqrt((n - 1) * (N - n + 1))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    evals, vecs = _canonical(e * lam, vecs, 0.0)
    return Spectrum(evals, vecs)


def eigenvector_population(spectrum: Spectrum, site: int) -> np.ndarray:
    """``|c_{k,site}|^2`` for every k (ascending eigenvalue order)."""
    if not 1 <= site <= spectrum.eigenvectors.shape[1]:
        raise IndexError(f"site {site} out of range 1..{spectrum.eigenvectors.shape[1]}")
    return np.abs(spectrum.eigenvectors[:, site - 1]) ** 2


def smallest_positive_eigenvalue(spectrum: Spectrum, tol: float | None = None) -> float:
    """Smallest eigenvalue strictly above ``tol`` (default ``1e-9 max|E|``)."""
    evals = spectrum.eigenvalues
    if tol is None:
        tol = 1e-9 * np.abs(evals).max(initial=0.0)
    above = evals[evals > tol]
    if above.size == 0:
        raise NotFoundError(f"no eigenvalue above tol={tol:g}")
    return float(above.min())
