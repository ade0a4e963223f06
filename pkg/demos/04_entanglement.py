"""
Moving and creating entanglement.

1. A Bell pair on sites (1, 2) of a modulated chain leaves a steady
   concurrence on the far pair (N-1, N).
2. An isolated qubit entangled with site 1 shares steady entanglement with
   site N only through a zero mode of the chain.
3. A star network with N_A output arms splits the transferred population
   evenly, so the end-to-end concurrence between arms is 2F/N_A.
"""

import numpy as np

from spinchan import channels, dynamics, steady
from spinchan.spectral import diagonalize

print("steady concurrence of (N-1, N) after a Bell pair on (1, 2)")
for n in range(3, 8):
    numeric = steady.numeric_steady_endpair(channels.modulated_chain(n))
    print(f"  N={n}: {numeric:.6f}  closed form {steady.steady_concurrence_endpair(n):.6f}")

print("\nsteady concurrence between an isolated qubit and site N")
for n in range(2, 8):
    print(f"  N={n}: {steady.numeric_steady_distribution(channels.modulated_chain(n)):.6f}")

spec = channels.multiarm(2, 2, 3)
ends = channels.multiarm_output_ends(spec)
chain = diagonalize(channels.build_hamiltonian(channels.modulated_chain(5)))
net = diagonalize(channels.build_hamiltonian(spec))
print(f"\nmultiarm M(2,2,3): arm ends {ends}")
for t in np.linspace(0.5, 3.0, 4):
    state = dynamics.evolve_h1(net, dynamics.site_state(spec.n_sites, 1), 0.1, t)
    c = 2 * abs(state.b[ends[0] - 1, ends[1] - 1])
    f = dynamics.population_series(chain, 1, 5, 0.1, [t])[0]
    print(f"  t={t:.2f}: C = {c:.6f}, 2F(l=5)/3 = {2 * f / 3:.6f}")
print(f"steady: {steady.numeric_steady_multiarm(spec):.6f} vs {steady.steady_concurrence_multiarm(2, 2, 3):.6f}")
