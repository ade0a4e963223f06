import math

import numpy as np
import pytest

from spinchan import channels, dynamics, observables
from spinchan.dynamics import PureInputState
from spinchan.errors import ContractViolation
from spinchan.spectral import diagonalize

import fullspace as fs


def test_bell_and_product_concurrence():
    bell = np.zeros((4, 4))
    bell[1, 1] = bell[2, 2] = bell[1, 2] = bell[2, 1] = 0.5
    assert observables.concurrence(bell) == pytest.approx(1.0, abs=1e-12)
    prod = np.diag([1.0, 0, 0, 0])
    assert observables.concurrence(prod) == 0.0


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.9, 1.0])
def test_werner_state(p):
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    rho = p * np.outer(psi, psi) + (1 - p) * np.eye(4) / 4
    assert observables.concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)


def test_concurrence_rejects_unphysical():
    with pytest.raises(ContractViolation):
        observables.concurrence(np.diag([1.1, -0.1, 0, 0]))
    with pytest.raises(ContractViolation):
        observables.concurrence(np.triu(np.ones((4, 4))) / 4)
    with pytest.raises(ValueError):
        observables.concurrence(np.eye(2))


def test_rdm_and_concurrence_against_full_space():
    spec = channels.modulated_chain(5)
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    state = dynamics.evolve_h1(spectrum, dynamics.bell_state(5, 1, 2, 0.6, 0.8), 0.2, 0.9)
    psi = fs.excitation_state(5, [0.8, 0.6, 0, 0, 0])
    rho = fs.evolve(fs.full_hamiltonian(5, spec.edges), np.outer(psi, psi.conj()), 0.2, 0.9)
    for i, j in [(4, 5), (1, 5), (3, 2)]:
        ref = fs.partial_trace(rho, [i, j], 5)
        np.testing.assert_allclose(observables.two_qubit_rdm(state, i, j), ref, atol=1e-12)
        assert observables.concurrence_fast(state, i, j) == pytest.approx(fs.wootters(ref), abs=1e-9)
    for i in (1, 5):
        np.testing.assert_allclose(observables.single_qubit_rdm(state, i), fs.partial_trace(rho, [i], 5), atol=1e-12)


def test_single_qubit_rdm_h01_against_full_space():
    spec = channels.uniform_chain(4)
    src = PureInputState(1, 1.1, 2.0)
    state = dynamics.evolve_h01(diagonalize(channels.build_hamiltonian(spec)), src, 0.1, 1.7)
    qubit = np.array([math.cos(0.55), np.exp(2.0j) * math.sin(0.55)])
    psi = fs.product_state(4, qubit)
    rho = fs.evolve(fs.full_hamiltonian(4, spec.edges), np.outer(psi, psi.conj()), 0.1, 1.7)
    for i in (1, 3, 4):
        np.testing.assert_allclose(observables.single_qubit_rdm(state, i), fs.partial_trace(rho, [i], 4), atol=1e-12)


def test_average_fidelity_is_bloch_average():
    spectrum = diagonalize(channels.build_hamiltonian(channels.modified_chain_b(5, 1.0, 0.5)))
    ref = dynamics.evolve_h01(spectrum, PureInputState(1), 0.15, 3.0)
    # average the closed-form Bloch fidelity over a Gauss-Legendre grid in cos(theta)
    nodes, weights = np.polynomial.legendre.leggauss(8)
    total = 0.0
    for x, w in zip(nodes, weights):
        src = PureInputState(1, math.acos(x), 0.0)
        total += w * observables.fidelity_bloch(ref, 5, src).fidelity / 2
    assert observables.average_fidelity(ref, 5).fidelity == pytest.approx(total, abs=1e-12)


def test_average_fidelity_from_values():
    assert observables.average_fidelity_from(1.0, 1.0).fidelity == pytest.approx(1.0)
    assert observables.average_fidelity_from(0.0, 0.0).fidelity == pytest.approx(0.5)
    report = observables.average_fidelity_from(1.0, 1j)
    assert report.fidelity == pytest.approx(2 / 3) and report.alpha == pytest.approx(math.pi / 2)
    assert observables.average_fidelity_from(0.25, -0.5).alpha == pytest.approx(math.pi)


def test_transfer_fidelity_and_purity():
    state = dynamics.pure_state([0.6, 0.0, 0.8])
    assert observables.transfer_fidelity(state, 3) == pytest.approx(0.64)
    assert observables.purity(state) == pytest.approx(1.0)
    mixed = dynamics.SubspaceState("H1", np.diag([0.5, 0.5]).astype(complex))
    assert observables.purity(mixed) == pytest.approx(0.5)
    with pytest.raises(IndexError):
        observables.transfer_fidelity(state, 4)


def test_two_qubit_rdm_errors():
    state = dynamics.site_state(3, 1)
    with pytest.raises(ValueError):
        observables.two_qubit_rdm(state, 2, 2)
