"""
Three independent routes to the same density matrix.

The eigenbasis closed form is checked against the operator-sum (Kraus)
solution built from matrix exponentials and against a direct RK4
integration of the master equation.
"""

import numpy as np

from spinchan import channels, dynamics
from spinchan.spectral import diagonalize

h = channels.build_hamiltonian(channels.modified_chain_b(6, 1.0, 0.5))
spectrum = diagonalize(h)
rho0 = dynamics.pure_state(np.exp(1j * np.arange(6)) / np.arange(1, 7)).b
times = np.linspace(0, 20, 5)
for gamma in (0.0, 0.1, 0.3):
    eig = np.array([dynamics.evolve_h1(spectrum, rho0, gamma, t).b for t in times])
    kraus = dynamics.kraus_oracle(h, rho0, gamma, times)
    rk4 = dynamics.master_equation_oracle(h, rho0, gamma, times)
    print(
        f"gamma={gamma}: |eig-kraus|={np.abs(eig - kraus.rho).max():.1e}  "
        f"|eig-rk4|={np.abs(eig - rk4).max():.1e}  kraus l_max={kraus.l_max}, slices={kraus.n_slices}"
    )
