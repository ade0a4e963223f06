"""
spinchan: quantum state transfer through XX spin channels under
intrinsic decoherence.

Modules
-------
channels     network families and their single-excitation Hamiltonians
spectral     deterministic eigendecomposition and analytic spectra
dynamics     eigenbasis propagators plus Kraus and RK4 oracles
observables  fidelities, reduced states, concurrence
steady       infinite-time limits and their closed forms
analysis     optimal times, J0 sweeps, design extraction, field search
cli          the ``spinchan`` command
"""

__version__ = "0.1.0"

from .channels import (  # noqa: E402
    ChannelSpec,
    Family,
    apply_field,
    build_hamiltonian,
    modified_chain_a,
    modified_chain_b,
    modulated_chain,
    multiarm,
    uniform_chain,
)
from .dynamics import PureInputState, SubspaceState, evolve_h01, evolve_h1  # noqa: E402
from .spectral import Spectrum, diagonalize  # noqa: E402

__all__ = [
    "__version__",
    "ChannelSpec",
    "Family",
    "apply_field",
    "build_hamiltonian",
    "modified_chain_a",
    "modified_chain_b",
    "modulated_chain",
    "multiarm",
    "uniform_chain",
    "PureInputState",
    "SubspaceState",
    "evolve_h01",
    "evolve_h1",
    "Spectrum",
    "diagonalize",
]
